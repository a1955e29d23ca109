#pragma once

// JSON views of the library's report structures. Field order is fixed and no
// timing or environment data is included, so serialized reports are
// byte-for-byte reproducible across runs and machines.

#include "rmd/envelope.hpp"
#include "rmd/extraction.hpp"
#include "rmd/ic.hpp"
#include "rmd/revelation.hpp"
#include "rmd/scenario.hpp"

#include <cstdint>
#include <string>

namespace rmd {

inline Json to_json(const IcWitness& w) {
    Json j{{"truth", w.truth}, {"report", w.report}};
    if (w.state) j["state"] = *w.state;
    if (w.belief) j["belief"] = vec_to_json(*w.belief);
    return j;
}

inline Json to_json(const IcReport& r) {
    return Json{{"mode", to_cstring(r.mode)},
                {"pass", r.pass},
                {"slack", rational_to_json(r.slack)},
                {"worst", to_json(r.worst)}};
}

inline Json to_json(const AuctionIcReport& r) {
    Json agents = Json::array();
    for (const auto& a : r.per_agent) agents.push_back(to_json(a));
    return Json{{"pass", r.pass}, {"per_agent", std::move(agents)}};
}

inline Json to_json(const MonotonicityWitness& w) {
    Json j{{"low", w.low}, {"high", w.high}};
    if (w.state) j["state"] = *w.state;
    if (w.belief) j["belief"] = vec_to_json(*w.belief);
    return j;
}

inline Json to_json(const MonotonicityReport& r) {
    return Json{{"pass", r.pass},
                {"slack", rational_to_json(r.slack)},
                {"worst", to_json(r.worst)}};
}

inline Json to_json(const OverlapEntry& e) {
    return Json{{"window", e.window},
                {"nonempty", e.nonempty},
                {"full_dimension", e.full_dimension},
                {"affine_dim", e.affine_dim}};
}

inline Json to_json(const OverlapProfile& p) {
    Json entries = Json::array();
    for (const auto& e : p.entries) entries.push_back(to_json(e));
    Json j{{"window", p.window},
           {"overlapping", p.overlapping},
           {"fully_overlapping", p.fully_overlapping},
           {"common_belief", p.common_belief},
           {"independent", p.independent},
           {"entries", std::move(entries)}};
    if (p.common_point) j["common_point"] = vec_to_json(*p.common_point);
    if (p.first_empty_window) j["first_empty_window"] = *p.first_empty_window;
    return j;
}

inline Json to_json(const DimensionReport& r) {
    Json j{{"full", r.full}, {"affine_dim", r.affine_dim}};
    if (r.full) j["independent_points"] = mat_to_json(r.independent_points);
    else j["flat_direction"] = vec_to_json(r.flat_direction);
    return j;
}

inline Json to_json(const EnvelopeWitness& w) {
    return Json{{"low", w.low},
                {"high", w.high},
                {"state", w.state},
                {"residual", rational_to_json(w.residual)}};
}

inline Json to_json(const EnvelopeReport& r, bool include_residuals = false) {
    Json j{{"pass", r.pass},
           {"tolerance", rational_to_json(r.tolerance)},
           {"max_abs_residual", rational_to_json(r.max_abs_residual)},
           {"worst", to_json(r.worst)}};
    if (include_residuals) {
        Json rs = Json::array();
        for (const auto& w : r.residuals) rs.push_back(to_json(w));
        j["residuals"] = std::move(rs);
    }
    return j;
}

inline Json to_json(const ImplicationClause& c) {
    Json j{{"applicable", c.applicable}, {"pass", c.pass}};
    if (c.worst) j["worst"] = to_json(*c.worst);
    return j;
}

inline Json to_json(const MonotonicityImplications& r) {
    Json pairs = Json::array();
    for (const auto& [lo, hi] : r.empty_pairs) pairs.push_back(Json::array({lo, hi}));
    return Json{{"robust_ic_holds", r.robust_ic_holds},
                {"common_belief", to_json(r.common_belief)},
                {"independent", to_json(r.independent)},
                {"overlapping", to_json(r.overlapping)},
                {"full_ambiguity", to_json(r.full_ambiguity)},
                {"empty_pairs", std::move(pairs)}};
}

inline Json to_json(const PipelineReport& r, bool include_residuals = false) {
    return Json{{"overlap", to_json(r.overlap)},
                {"robust", to_json(r.robust)},
                {"envelope", to_json(r.envelope, include_residuals)},
                {"monotone", to_json(r.monotone)},
                {"expost", to_json(r.expost)},
                {"envelope_implication_applicable", r.envelope_implication_applicable},
                {"envelope_implication_ok", r.envelope_implication_ok},
                {"expost_implication_applicable", r.expost_implication_applicable},
                {"expost_implication_ok", r.expost_implication_ok}};
}

inline Json to_json(const PaymentComparison& r) {
    Json j{{"same_allocation", r.same_allocation},
           {"constant_offsets", r.constant_offsets},
           {"offsets", vec_to_json(r.offsets)},
           {"zero_offsets", r.zero_offsets}};
    if (r.mismatch) j["mismatch"] = Json{{"type", r.mismatch->first}, {"state", r.mismatch->second}};
    if (r.robust_indifference) {
        j["robust_indifference"] = *r.robust_indifference;
        j["indifference_forces_zero"] = r.indifference_forces_zero;
    }
    return j;
}

inline Json to_json(const PiViolation& v) {
    return Json{{"anchor", v.anchor},
                {"mu", vec_to_json(v.mu)},
                {"selections", mat_to_json(v.selections)},
                {"mixture", vec_to_json(v.mixture)}};
}

inline Json to_json(const PiReport& r) {
    Json j{{"pass", r.pass}, {"anchor_scores", vec_to_json(r.anchor_scores)}};
    if (r.violation) j["violation"] = to_json(*r.violation);
    return j;
}

inline Json to_json(const CiSeparator& s) {
    return Json{{"g", vec_to_json(s.g)},
                {"alpha", rational_to_json(s.alpha)},
                {"gap", rational_to_json(s.gap)}};
}

inline Json to_json(const CiReport& r) {
    Json types = Json::array();
    for (const auto& t : r.per_type) {
        Json j{{"independent", t.independent}};
        if (t.witness) j["witness"] = vec_to_json(*t.witness);
        if (t.separator) j["separator"] = to_json(*t.separator);
        types.push_back(std::move(j));
    }
    return Json{{"pass", r.pass}, {"per_type", std::move(types)}};
}

inline Json to_json(const MenuFailure& f) {
    Json j{{"clause", f.clause}, {"type", f.type}};
    if (f.other) j["other"] = *f.other;
    j["belief"] = vec_to_json(f.belief);
    j["amount"] = rational_to_json(f.amount);
    return j;
}

inline Json to_json(const MenuReport& r) {
    Json failures = Json::array();
    for (const auto& f : r.failures) failures.push_back(to_json(f));
    return Json{{"mode", to_cstring(r.mode)},
                {"pass", r.pass},
                {"eps", rational_to_json(r.eps)},
                {"own_surplus_min", vec_to_json(r.own_surplus_min)},
                {"own_surplus_max", vec_to_json(r.own_surplus_max)},
                {"failures", std::move(failures)}};
}

inline Json to_json(const VseSolution& s) {
    return Json{{"p_star", rational_to_json(s.p_star)},
                {"z", mat_to_json(s.z)},
                {"lambda", vec_to_json(s.lambda)},
                {"nu", mat_to_json(s.nu)},
                {"multiplier_mass", rational_to_json(s.multiplier_mass)},
                {"dual_objective", rational_to_json(s.dual_objective)}};
}

inline Json to_json(const CollapseReport& r) {
    Json edges = Json::array();
    for (const auto& [i, k] : r.edges) edges.push_back(Json::array({i, k}));
    return Json{{"edges", std::move(edges)},
                {"component", r.component},
                {"component_count", r.component_count},
                {"single_contract_regime", r.single_contract_regime}};
}

inline Json to_json(const SingleContract& r) {
    return Json{{"level", rational_to_json(r.level)},
                {"revenue", rational_to_json(r.revenue)},
                {"lowest_type", r.lowest_type},
                {"applicability", to_cstring(r.applicability)}};
}

inline Json to_json(const StrategyReport& r) {
    Json j{{"robust", r.robust},
           {"slack", rational_to_json(r.slack)},
           {"worst_type", r.worst_type},
           {"worst_message", r.worst_message}};
    if (r.worst_belief) j["worst_belief"] = vec_to_json(*r.worst_belief);
    return j;
}

inline Json to_json(const RevelationResult& r) {
    return Json{{"direct", general_to_json(r.direct)},
                {"input_strategy_robust", r.input_strategy_robust},
                {"output_truthful_robust", r.output_truthful_robust}};
}

inline Json to_json(const Menu& m) { return mat_to_json(m.contracts); }

// 64-bit FNV-1a over the serialized report, as a fixed-width hex string.
inline std::string fnv1a_digest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    for (int i = 15; i >= 0; --i) {
        buf[i] = "0123456789abcdef"[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

}  // namespace rmd
