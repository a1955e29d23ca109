#pragma once

// JSON scenario files: models, belief structures, extraction data, and a
// request list, all in exact rational arithmetic. Numbers are written as
// "p/q" strings; plain JSON integers are accepted on input, floating-point
// literals are rejected to keep every run exact. Parse errors carry the
// JSON path of the offending element.

#include "rmd/beliefs.hpp"
#include "rmd/extraction.hpp"
#include "rmd/models.hpp"

#include "json.hpp"

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace rmd {

using Json = nlohmann::ordered_json;

inline Rational rational_from_json(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const InputError& e) {
            throw InputError(path + ": " + e.what());
        }
    }
    if (j.is_number_float())
        throw InputError(path + ": floating-point numbers are not exact; write \"p/q\"");
    throw InputError(path + ": expected an integer or a \"p/q\" string");
}

inline Json rational_to_json(const Rational& x) { return Json(to_string(x)); }

inline Vec vec_from_json(const Json& j, const std::string& path) {
    if (!j.is_array()) throw InputError(path + ": expected an array");
    Vec v;
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(rational_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
}

inline Mat mat_from_json(const Json& j, const std::string& path) {
    if (!j.is_array()) throw InputError(path + ": expected an array of arrays");
    Mat m;
    for (std::size_t i = 0; i < j.size(); ++i)
        m.push_back(vec_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    return m;
}

inline Json vec_to_json(const Vec& v) {
    Json j = Json::array();
    for (const auto& x : v) j.push_back(rational_to_json(x));
    return j;
}

inline Json mat_to_json(const Mat& m) {
    Json j = Json::array();
    for (const auto& row : m) j.push_back(vec_to_json(row));
    return j;
}

namespace detail {

inline const Json& require_field(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw InputError(path + ": expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw InputError(path + ": missing \"" + key + "\"");
    return *it;
}

inline std::vector<std::string> labels_from_json(const Json& j, const std::string& path) {
    if (!j.is_array()) throw InputError(path + ": expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& e = j[i];
        if (!e.is_string()) throw InputError(path + "[" + std::to_string(i) + "]: expected a string");
        out.push_back(e.get<std::string>());
    }
    return out;
}

inline std::vector<std::vector<std::size_t>> index_table_from_json(const Json& j,
                                                                   const std::string& path) {
    if (!j.is_array()) throw InputError(path + ": expected an array of arrays");
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& row = j[i];
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!row.is_array()) throw InputError(rp + ": expected an array");
        std::vector<std::size_t> r;
        for (std::size_t k = 0; k < row.size(); ++k) {
            const Json& e = row[k];
            if (!e.is_number_integer() || e.get<long long>() < 0)
                throw InputError(rp + "[" + std::to_string(k) + "]: expected a nonnegative index");
            r.push_back(static_cast<std::size_t>(e.get<long long>()));
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Belief sets. Four interchangeable forms:
//   {"simplex": m}
//   {"contamination": {"reference": [...], "epsilon": "1/6"}}
//   {"constraints": [{"coeffs": [...], "rel": "<="|">=", "rhs": "..."}], "states": m}
//   {"vertices": [[...], ...]}

inline BeliefPolytope belief_set_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) throw InputError(path + ": expected a belief set object");
    if (j.contains("simplex")) {
        const Json& m = j["simplex"];
        if (!m.is_number_integer() || m.get<long long>() < 1)
            throw InputError(path + ".simplex: expected a positive state count");
        return full_simplex(static_cast<std::size_t>(m.get<long long>()));
    }
    if (j.contains("contamination")) {
        const Json& c = j["contamination"];
        ContaminationSpec spec;
        spec.reference =
            vec_from_json(detail::require_field(c, "reference", path + ".contamination"),
                          path + ".contamination.reference");
        spec.epsilon = rational_from_json(
            detail::require_field(c, "epsilon", path + ".contamination"),
            path + ".contamination.epsilon");
        try {
            return make_contamination(spec);
        } catch (const InputError& e) {
            throw InputError(path + ".contamination: " + e.what());
        }
    }
    if (j.contains("vertices")) {
        const Mat points = mat_from_json(j["vertices"], path + ".vertices");
        try {
            return from_vertices(points);
        } catch (const InputError& e) {
            throw InputError(path + ".vertices: " + e.what());
        }
    }
    if (j.contains("constraints")) {
        const Json& rows = j["constraints"];
        if (!rows.is_array()) throw InputError(path + ".constraints: expected an array");
        Mat a;
        Vec b;
        std::size_t states = 0;
        if (j.contains("states")) {
            const Json& m = j["states"];
            if (!m.is_number_integer() || m.get<long long>() < 1)
                throw InputError(path + ".states: expected a positive state count");
            states = static_cast<std::size_t>(m.get<long long>());
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string rp = path + ".constraints[" + std::to_string(i) + "]";
            const Json& row = rows[i];
            Vec coeffs = vec_from_json(detail::require_field(row, "coeffs", rp), rp + ".coeffs");
            Rational rhs = rational_from_json(detail::require_field(row, "rhs", rp), rp + ".rhs");
            std::string rel = "<=";
            if (row.contains("rel")) {
                if (!row["rel"].is_string()) throw InputError(rp + ".rel: expected \"<=\" or \">=\"");
                rel = row["rel"].get<std::string>();
            }
            if (rel == ">=") {
                for (auto& c : coeffs) c = -c;
                rhs = -rhs;
            } else if (rel != "<=") {
                throw InputError(rp + ".rel: expected \"<=\" or \">=\"");
            }
            if (states == 0) states = coeffs.size();
            a.push_back(std::move(coeffs));
            b.push_back(std::move(rhs));
        }
        if (states == 0) throw InputError(path + ": constraint form needs rows or \"states\"");
        try {
            return make_polytope(states, std::move(a), std::move(b));
        } catch (const InputError& e) {
            throw InputError(path + ": " + e.what());
        }
    }
    throw InputError(path +
                     ": expected \"simplex\", \"contamination\", \"vertices\", or \"constraints\"");
}

inline Json belief_set_to_json(const BeliefPolytope& set) {
    if (set.a.empty()) return Json{{"simplex", set.states}};
    Json rows = Json::array();
    for (std::size_t k = 0; k < set.a.size(); ++k)
        rows.push_back(Json{{"coeffs", vec_to_json(set.a[k])},
                            {"rel", "<="},
                            {"rhs", rational_to_json(set.b[k])}});
    return Json{{"states", set.states}, {"constraints", std::move(rows)}};
}

inline BeliefMap belief_map_from_json(const Json& j, const std::string& path) {
    if (!j.is_array()) throw InputError(path + ": expected an array of belief sets");
    BeliefMap map;
    for (std::size_t i = 0; i < j.size(); ++i)
        map.push_back(belief_set_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    return map;
}

inline Json belief_map_to_json(const BeliefMap& map) {
    Json j = Json::array();
    for (const auto& set : map) j.push_back(belief_set_to_json(set));
    return j;
}

// ---------------------------------------------------------------------------
// Models.

inline QuasilinearModel quasilinear_from_json(const Json& j, const std::string& path) {
    TypeGrid grid = make_grid(vec_from_json(detail::require_field(j, "grid", path), path + ".grid"));
    StateSpace states{
        detail::labels_from_json(detail::require_field(j, "states", path), path + ".states")};
    Mat q = mat_from_json(detail::require_field(j, "q", path), path + ".q");
    Mat p = mat_from_json(detail::require_field(j, "p", path), path + ".p");
    for (std::size_t t = 0; t < q.size(); ++t)
        for (std::size_t s = 0; s < q[t].size(); ++s)
            if (q[t][s] < 0 || q[t][s] > 1)
                throw InputError(path + ".q[" + std::to_string(t) + "][" + std::to_string(s) +
                                 "]: allocation probability must lie in [0,1]");
    try {
        return make_quasilinear(std::move(grid), std::move(states), std::move(q), std::move(p));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline Json quasilinear_to_json(const QuasilinearModel& m) {
    return Json{{"kind", "quasilinear"},
                {"grid", vec_to_json(m.grid.points)},
                {"states", m.states.labels},
                {"q", mat_to_json(m.q)},
                {"p", mat_to_json(m.p)}};
}

inline AuctionModel auction_from_json(const Json& j, const std::string& path) {
    const Json& grids_json = detail::require_field(j, "grids", path);
    if (!grids_json.is_array() || grids_json.empty())
        throw InputError(path + ".grids: expected one grid per agent");
    std::vector<TypeGrid> grids;
    for (std::size_t i = 0; i < grids_json.size(); ++i)
        grids.push_back(
            make_grid(vec_from_json(grids_json[i], path + ".grids[" + std::to_string(i) + "]")));

    const auto tables = [&](const char* key) {
        const Json& block = detail::require_field(j, key, path);
        if (!block.is_array() || block.size() != grids.size())
            throw InputError(path + "." + key + ": expected one table per agent");
        std::vector<Mat> out;
        for (std::size_t i = 0; i < block.size(); ++i)
            out.push_back(
                mat_from_json(block[i], path + "." + key + "[" + std::to_string(i) + "]"));
        return out;
    };

    AuctionModel model;
    try {
        model = make_auction(std::move(grids), tables("v"), tables("dv"), tables("q"), tables("p"));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }

    // The grand allocation must never hand out more than the whole good.
    const auto sizes = profile_sizes(model);
    for (std::size_t flat = 0; flat < model.profile_count(); ++flat) {
        const auto profile = unflatten_profile(sizes, flat);
        Rational total(0);
        for (std::size_t i = 0; i < model.agents(); ++i)
            total += model.q[i][profile[i]][opponent_index(sizes, profile, i)];
        if (total > 1)
            throw InputError(path + ".q: shares at joint profile " + std::to_string(flat) +
                             " sum to " + to_string(total) + " > 1");
    }
    return model;
}

inline Json auction_to_json(const AuctionModel& m) {
    Json grids = Json::array();
    for (const auto& g : m.grids) grids.push_back(vec_to_json(g.points));
    const auto tables = [](const std::vector<Mat>& ts) {
        Json j = Json::array();
        for (const auto& t : ts) j.push_back(mat_to_json(t));
        return j;
    };
    return Json{{"kind", "auction"}, {"grids", std::move(grids)}, {"v", tables(m.v)},
                {"dv", tables(m.dv)}, {"q", tables(m.q)},         {"p", tables(m.p)}};
}

inline GeneralModel general_from_json(const Json& j, const std::string& path) {
    TypeGrid grid = make_grid(vec_from_json(detail::require_field(j, "grid", path), path + ".grid"));
    StateSpace states{
        detail::labels_from_json(detail::require_field(j, "states", path), path + ".states")};
    std::vector<std::string> outcomes =
        detail::labels_from_json(detail::require_field(j, "outcomes", path), path + ".outcomes");
    auto phi = detail::index_table_from_json(detail::require_field(j, "phi", path), path + ".phi");

    const auto cube = [&](const char* key) {
        const Json& block = detail::require_field(j, key, path);
        if (!block.is_array()) throw InputError(path + "." + key + ": expected one table per outcome");
        std::vector<Mat> out;
        for (std::size_t k = 0; k < block.size(); ++k)
            out.push_back(mat_from_json(block[k], path + "." + key + "[" + std::to_string(k) + "]"));
        return out;
    };
    std::vector<Mat> u = cube("u");
    std::vector<Mat> u2;
    bool derived = false;
    if (j.contains("u2")) {
        u2 = cube("u2");
    } else {
        u2 = derive_u2_central_difference(grid, u);
        for (auto& table : u2)
            for (auto& row : table)
                for (auto& cell : row)
                    if (cell < 0)
                        throw InputError(path +
                                         ": derived type-sensitivity is negative; supply \"u2\"");
        derived = true;
    }
    try {
        return make_general(std::move(grid), std::move(states), std::move(outcomes), std::move(phi),
                            std::move(u), std::move(u2), derived);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline Json general_to_json(const GeneralModel& m) {
    const auto cube = [](const std::vector<Mat>& ts) {
        Json j = Json::array();
        for (const auto& t : ts) j.push_back(mat_to_json(t));
        return j;
    };
    Json phi = Json::array();
    for (const auto& row : m.phi) phi.push_back(row);
    return Json{{"kind", "general"},       {"grid", vec_to_json(m.grid.points)},
                {"states", m.states.labels}, {"outcomes", m.outcomes},
                {"phi", std::move(phi)},   {"u", cube(m.u)},
                {"u2", cube(m.u2)}};
}

inline IndirectMechanism indirect_from_json(const Json& j, const std::string& path) {
    TypeGrid grid = make_grid(vec_from_json(detail::require_field(j, "grid", path), path + ".grid"));
    StateSpace states{
        detail::labels_from_json(detail::require_field(j, "states", path), path + ".states")};
    std::vector<std::string> outcomes =
        detail::labels_from_json(detail::require_field(j, "outcomes", path), path + ".outcomes");
    std::vector<std::string> messages =
        detail::labels_from_json(detail::require_field(j, "messages", path), path + ".messages");
    auto gamma =
        detail::index_table_from_json(detail::require_field(j, "gamma", path), path + ".gamma");
    const Json& strat = detail::require_field(j, "strategy", path);
    auto strat_rows = detail::index_table_from_json(Json::array({strat}), path + ".strategy");

    const auto cube = [&](const char* key) {
        const Json& block = detail::require_field(j, key, path);
        std::vector<Mat> out;
        for (std::size_t k = 0; k < block.size(); ++k)
            out.push_back(mat_from_json(block[k], path + "." + key + "[" + std::to_string(k) + "]"));
        return out;
    };
    std::vector<Mat> u = cube("u");
    std::vector<Mat> u2 = j.contains("u2") ? cube("u2") : derive_u2_central_difference(grid, u);
    try {
        return make_indirect(std::move(grid), std::move(states), std::move(outcomes),
                             std::move(messages), std::move(gamma), std::move(strat_rows[0]),
                             std::move(u), std::move(u2));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline Json indirect_to_json(const IndirectMechanism& g) {
    const auto cube = [](const std::vector<Mat>& ts) {
        Json j = Json::array();
        for (const auto& t : ts) j.push_back(mat_to_json(t));
        return j;
    };
    Json gamma = Json::array();
    for (const auto& row : g.gamma) gamma.push_back(row);
    return Json{{"kind", "indirect"},        {"grid", vec_to_json(g.grid.points)},
                {"states", g.states.labels}, {"outcomes", g.outcomes},
                {"messages", g.messages},    {"gamma", std::move(gamma)},
                {"strategy", g.strategy},    {"u", cube(g.u)},
                {"u2", cube(g.u2)}};
}

// ---------------------------------------------------------------------------
// Scenario: one file bundling a model and/or extraction data plus requests.

struct Scenario {
    std::optional<QuasilinearModel> quasilinear;
    std::optional<AuctionModel> auction;
    std::optional<GeneralModel> general;
    std::optional<IndirectMechanism> indirect;
    std::optional<QuasilinearModel> model_b;  // comparison target for payment analysis

    std::optional<BeliefMap> beliefs;                      // single-agent models
    std::optional<std::vector<BeliefMap>> agent_beliefs;   // auctions
    std::optional<Mat> priors;                             // single-agent interim
    std::optional<std::vector<Mat>> agent_priors;          // auction interim

    std::optional<ExtractionInstance> extraction;
    std::optional<Menu> menu;
    std::optional<BeliefPolytope> designer;

    Json requests = Json::array();
};

inline Scenario parse_scenario(const Json& j) {
    if (!j.is_object()) throw InputError("$: scenario must be a JSON object");
    Scenario sc;

    const auto parse_model = [&](const Json& mj, const std::string& path) {
        const Json& kind_json = detail::require_field(mj, "kind", path);
        if (!kind_json.is_string()) throw InputError(path + ".kind: expected a string");
        const std::string kind = kind_json.get<std::string>();
        if (kind == "quasilinear") return;
        if (kind == "auction") return;
        if (kind == "general") return;
        if (kind == "indirect") return;
        throw InputError(path + ".kind: unknown model kind \"" + kind + "\"");
    };

    if (j.contains("model")) {
        const Json& mj = j["model"];
        parse_model(mj, "$.model");
        const std::string kind = mj["kind"].get<std::string>();
        if (kind == "quasilinear") sc.quasilinear = quasilinear_from_json(mj, "$.model");
        else if (kind == "auction") sc.auction = auction_from_json(mj, "$.model");
        else if (kind == "general") sc.general = general_from_json(mj, "$.model");
        else sc.indirect = indirect_from_json(mj, "$.model");
    }
    if (j.contains("model_b")) {
        const Json& mj = j["model_b"];
        parse_model(mj, "$.model_b");
        if (mj["kind"].get<std::string>() != "quasilinear")
            throw InputError("$.model_b: payment comparison targets must be quasilinear");
        sc.model_b = quasilinear_from_json(mj, "$.model_b");
    }

    if (j.contains("beliefs")) {
        const Json& bj = j["beliefs"];
        if (!bj.is_array() || bj.empty()) throw InputError("$.beliefs: expected a nonempty array");
        if (bj[0].is_array()) {
            std::vector<BeliefMap> per_agent;
            for (std::size_t i = 0; i < bj.size(); ++i)
                per_agent.push_back(
                    belief_map_from_json(bj[i], "$.beliefs[" + std::to_string(i) + "]"));
            sc.agent_beliefs = std::move(per_agent);
        } else {
            sc.beliefs = belief_map_from_json(bj, "$.beliefs");
        }
    }
    if (j.contains("priors")) {
        const Json& pj = j["priors"];
        if (!pj.is_array() || pj.empty()) throw InputError("$.priors: expected a nonempty array");
        if (pj[0].is_array() && !pj[0].empty() && pj[0][0].is_array()) {
            std::vector<Mat> per_agent;
            for (std::size_t i = 0; i < pj.size(); ++i)
                per_agent.push_back(mat_from_json(pj[i], "$.priors[" + std::to_string(i) + "]"));
            sc.agent_priors = std::move(per_agent);
        } else {
            sc.priors = mat_from_json(pj, "$.priors");
        }
    }

    if (j.contains("values")) {
        if (!sc.beliefs)
            throw InputError("$.values: extraction data also needs top-level \"beliefs\"");
        sc.extraction = make_extraction_instance(vec_from_json(j["values"], "$.values"),
                                                 *sc.beliefs);
    }
    if (j.contains("menu")) sc.menu = Menu{mat_from_json(j["menu"], "$.menu")};
    if (j.contains("designer_belief"))
        sc.designer = belief_set_from_json(j["designer_belief"], "$.designer_belief");

    if (j.contains("requests")) {
        if (!j["requests"].is_array()) throw InputError("$.requests: expected an array");
        sc.requests = j["requests"];
    }
    return sc;
}

inline Scenario load_scenario(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) throw InputError("cannot open scenario file: " + file_path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("scenario is not valid JSON: ") + e.what());
    }
    return parse_scenario(j);
}

}  // namespace rmd
