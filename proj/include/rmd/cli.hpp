#pragma once

// Command-line front end. Every operation reads a scenario JSON file, runs
// one analysis, and reports either human-readable text or a deterministic
// JSON document (flag --json). Exit codes: 0 every check passed, 1 a check
// failed, 2 malformed input, 3 the requested analysis is outside the
// guaranteed regime.

#include "rmd/envelope.hpp"
#include "rmd/extraction.hpp"
#include "rmd/ic.hpp"
#include "rmd/oracles.hpp"
#include "rmd/report_json.hpp"
#include "rmd/revelation.hpp"
#include "rmd/scenario.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace rmd::cli {

struct OpParams {
    std::optional<std::string> mode;
    std::optional<Rational> tau;
    std::optional<Rational> eps;
    std::size_t window = 1;
    std::optional<std::size_t> collapse_window;
    std::optional<std::size_t> indifferent_type;
    bool oracle = false;
    bool verbose = false;
};

struct OpResult {
    std::string op;
    std::string verdict;  // "pass" | "fail" | "capability_error"
    Json report;
};

namespace detail {

inline IcMode parse_ic_mode(const std::string& name) {
    if (name == "expost") return IcMode::expost;
    if (name == "interim") return IcMode::interim;
    if (name == "robust") return IcMode::robust;
    throw InputError("unknown incentive mode \"" + name + "\" (expost|interim|robust)");
}

inline MenuMode parse_menu_mode(const std::string& name) {
    if (name == "full") return MenuMode::full;
    if (name == "weak_full") return MenuMode::weak_full;
    if (name == "virtual") return MenuMode::virtual_eps;
    if (name == "robust_ic") return MenuMode::robust_ic;
    if (name == "robust_ir") return MenuMode::robust_ir;
    throw InputError("unknown menu mode \"" + name +
                     "\" (full|weak_full|virtual|robust_ic|robust_ir)");
}

inline const BeliefMap& need_beliefs(const Scenario& sc) {
    if (!sc.beliefs) throw InputError("scenario needs a top-level \"beliefs\" array");
    return *sc.beliefs;
}

inline const ExtractionInstance& need_extraction(const Scenario& sc) {
    if (!sc.extraction)
        throw InputError("scenario needs \"values\" and \"beliefs\" for extraction analysis");
    return *sc.extraction;
}

inline std::string verdict_of(bool pass) { return pass ? "pass" : "fail"; }

inline OpResult run_beliefs_check(const Scenario& sc, const OpParams& params) {
    OpResult out{"beliefs.check", "pass", Json::object()};
    const auto profile_of = [&](const BeliefMap& map) {
        Json sets = Json::array();
        for (const auto& set : map) sets.push_back(to_json(has_full_dimension(set)));
        return Json{{"overlap", to_json(overlap_profile(map, params.window))},
                    {"dimension", std::move(sets)}};
    };
    if (sc.agent_beliefs) {
        Json agents = Json::array();
        for (const auto& map : *sc.agent_beliefs) agents.push_back(profile_of(map));
        out.report = Json{{"per_agent", std::move(agents)}};
    } else {
        out.report = profile_of(need_beliefs(sc));
    }
    return out;
}

inline OpResult run_ic_check(const Scenario& sc, const OpParams& params) {
    const IcMode mode = parse_ic_mode(params.mode.value_or("robust"));
    OpResult out{"ic.check", "fail", Json::object()};
    if (sc.auction) {
        const AuctionIcReport r =
            check_auction_ic(*sc.auction, mode, sc.agent_beliefs.value_or(std::vector<BeliefMap>{}),
                             sc.agent_priors.value_or(std::vector<Mat>{}));
        out.verdict = verdict_of(r.pass);
        out.report = to_json(r);
    } else if (sc.quasilinear) {
        const IcReport r = check_ic(*sc.quasilinear, mode,
                                    sc.beliefs.value_or(BeliefMap{}), sc.priors.value_or(Mat{}));
        out.verdict = verdict_of(r.pass);
        out.report = to_json(r);
    } else if (sc.general) {
        const IcReport r = check_ic(*sc.general, mode, sc.beliefs.value_or(BeliefMap{}),
                                    sc.priors.value_or(Mat{}));
        out.verdict = verdict_of(r.pass);
        out.report = to_json(r);
    } else {
        throw InputError("incentive check needs a direct model (quasilinear, auction, or general)");
    }
    return out;
}

inline OpResult run_envelope_check(const Scenario& sc, const OpParams& params) {
    OpResult out{"envelope.check", "fail", Json::object()};
    if (sc.auction) {
        Json agents = Json::array();
        bool pass = true;
        for (std::size_t i = 0; i < sc.auction->agents(); ++i) {
            const EnvelopeReport r = check_envelope(*sc.auction, i, params.tau);
            pass = pass && r.pass;
            agents.push_back(to_json(r, params.verbose));
        }
        out.verdict = verdict_of(pass);
        out.report = Json{{"pass", pass}, {"per_agent", std::move(agents)}};
    } else if (sc.quasilinear) {
        const EnvelopeReport r = check_envelope(*sc.quasilinear, params.tau);
        out.verdict = verdict_of(r.pass);
        out.report = to_json(r, params.verbose);
    } else if (sc.general) {
        const EnvelopeReport r = check_envelope(*sc.general, params.tau);
        out.verdict = verdict_of(r.pass);
        out.report = to_json(r, params.verbose);
    } else {
        throw InputError("envelope check needs a direct model");
    }
    return out;
}

inline OpResult run_pipeline(const Scenario& sc, const OpParams& params) {
    if (!sc.quasilinear) throw InputError("pipeline analysis needs a quasilinear model");
    const PipelineReport r =
        rmd::run_pipeline(*sc.quasilinear, need_beliefs(sc), params.window, params.tau);
    const bool pass = r.robust.pass && r.envelope.pass && r.monotone.pass && r.expost.pass;
    Json report = to_json(r, params.verbose);
    report["implications"] =
        to_json(check_monotonicity_implications(*sc.quasilinear, need_beliefs(sc), params.window));
    return OpResult{"envelope.pipeline", verdict_of(pass), std::move(report)};
}

inline OpResult run_payments_compare(const Scenario& sc, const OpParams& params) {
    if (!sc.quasilinear || !sc.model_b)
        throw InputError("payment comparison needs \"model\" and \"model_b\", both quasilinear");
    const PaymentComparison r =
        compare_payments(*sc.quasilinear, *sc.model_b, sc.beliefs.value_or(BeliefMap{}),
                         params.indifferent_type);
    const bool pass = r.same_allocation && r.constant_offsets && r.indifference_forces_zero;
    return OpResult{"payments.compare", verdict_of(pass), to_json(r)};
}

inline OpResult run_extract_pi(const Scenario& sc, const OpParams& params) {
    const ExtractionInstance& inst = need_extraction(sc);
    const PiReport r = check_probabilistic_independence(inst);
    Json report = to_json(r);
    bool pass = r.pass;
    if (params.oracle) {
        const auto hit = brute_pi(inst);
        const bool agree = !hit.has_value() || !r.pass;
        report["oracle_violation_found"] = hit.has_value();
        report["oracle_agreement"] = agree;
        pass = pass && agree;
    }
    return OpResult{"extract.pi", verdict_of(pass), std::move(report)};
}

inline OpResult run_extract_ci(const Scenario& sc, const OpParams&) {
    const CiReport r = check_convex_independence(need_extraction(sc));
    return OpResult{"extract.ci", verdict_of(r.pass), to_json(r)};
}

inline OpResult run_extract_menu(const Scenario& sc, const OpParams& params) {
    const ExtractionInstance& inst = need_extraction(sc);
    if (sc.menu) {
        const MenuMode mode = parse_menu_mode(params.mode.value_or("weak_full"));
        const MenuReport r = check_menu(inst, *sc.menu, mode, params.eps.value_or(Rational(0)));
        return OpResult{"extract.menu", verdict_of(r.pass), to_json(r)};
    }
    const Menu menu = build_extraction_menu(inst);
    const MenuReport audit = check_menu(inst, menu, MenuMode::weak_full);
    Json report{{"menu", to_json(menu)}, {"audit", to_json(audit)}};
    return OpResult{"extract.menu", verdict_of(audit.pass), std::move(report)};
}

inline OpResult run_extract_vse(const Scenario& sc, const OpParams& params) {
    const ExtractionInstance& inst = need_extraction(sc);
    const VseSolution sol = solve_vse(inst);
    Json report = to_json(sol);
    bool pass = true;
    if (params.oracle) {
        const Rational reference = brute_vse(inst);
        const bool agree = reference == sol.p_star;
        report["oracle_value"] = rational_to_json(reference);
        report["oracle_agreement"] = agree;
        pass = agree;
    }
    return OpResult{"extract.vse", verdict_of(pass), std::move(report)};
}

inline OpResult run_extract_virtual(const Scenario& sc, const OpParams& params) {
    if (!params.eps) throw InputError("virtual extraction needs --eps");
    const ExtractionInstance& inst = need_extraction(sc);
    const Menu menu = build_virtual_menu(inst, *params.eps);
    const MenuReport audit = check_menu(inst, menu, MenuMode::virtual_eps, *params.eps * 2);
    Json report{{"eps", rational_to_json(*params.eps)},
                {"menu", to_json(menu)},
                {"audit", to_json(audit)}};
    return OpResult{"extract.virtual", verdict_of(audit.pass), std::move(report)};
}

inline OpResult run_extract_collapse(const Scenario& sc, const OpParams& params) {
    const CollapseReport r = menu_collapse(need_extraction(sc), params.collapse_window);
    return OpResult{"extract.collapse", "pass", to_json(r)};
}

inline OpResult run_extract_optimal(const Scenario& sc, const OpParams&) {
    const SingleContract r = optimal_single_contract(need_extraction(sc), sc.designer);
    return OpResult{"extract.optimal", "pass", to_json(r)};
}

inline OpResult run_reveal_transform(const Scenario& sc, const OpParams&) {
    if (!sc.indirect) throw InputError("revelation transform needs an indirect model");
    const RevelationResult r = revelation_transform(*sc.indirect, need_beliefs(sc));
    // The collapsed mechanism must stay robust whenever the strategy was.
    const bool pass = !r.input_strategy_robust || r.output_truthful_robust;
    return OpResult{"reveal.transform", verdict_of(pass), to_json(r)};
}

inline OpResult execute(const Scenario& sc, const std::string& op, const OpParams& params) {
    if (op == "beliefs.check") return run_beliefs_check(sc, params);
    if (op == "ic.check") return run_ic_check(sc, params);
    if (op == "envelope.check") return run_envelope_check(sc, params);
    if (op == "envelope.pipeline") return run_pipeline(sc, params);
    if (op == "payments.compare") return run_payments_compare(sc, params);
    if (op == "extract.pi") return run_extract_pi(sc, params);
    if (op == "extract.ci") return run_extract_ci(sc, params);
    if (op == "extract.menu") return run_extract_menu(sc, params);
    if (op == "extract.vse") return run_extract_vse(sc, params);
    if (op == "extract.virtual") return run_extract_virtual(sc, params);
    if (op == "extract.collapse") return run_extract_collapse(sc, params);
    if (op == "extract.optimal") return run_extract_optimal(sc, params);
    if (op == "reveal.transform") return run_reveal_transform(sc, params);
    throw InputError("unknown operation \"" + op + "\"");
}

inline OpParams params_from_request(const Json& req) {
    OpParams p;
    if (req.contains("mode")) p.mode = req["mode"].get<std::string>();
    if (req.contains("tau")) p.tau = rational_from_json(req["tau"], "$.requests[].tau");
    if (req.contains("eps")) p.eps = rational_from_json(req["eps"], "$.requests[].eps");
    if (req.contains("window")) {
        const long long w = req["window"].get<long long>();
        if (w < 1) throw InputError("$.requests[].window: must be at least 1");
        p.window = static_cast<std::size_t>(w);
        p.collapse_window = p.window;
    }
    if (req.contains("indifferent_type"))
        p.indifferent_type = static_cast<std::size_t>(req["indifferent_type"].get<long long>());
    if (req.contains("oracle")) p.oracle = req["oracle"].get<bool>();
    return p;
}

inline int exit_code_for(const std::vector<OpResult>& results) {
    bool any_capability = false, any_fail = false;
    for (const auto& r : results) {
        any_capability = any_capability || r.verdict == "capability_error";
        any_fail = any_fail || r.verdict == "fail";
    }
    if (any_capability) return 3;
    if (any_fail) return 1;
    return 0;
}

inline void render_text(const OpResult& r, std::ostream& out) {
    out << r.op << ": " << r.verdict << "\n";
    out << r.report.dump(2) << "\n";
}

inline Json envelope_json(const std::vector<OpResult>& results, bool as_run) {
    Json body;
    if (!as_run && results.size() == 1) {
        body = Json{{"tool", "rmd"},
                    {"op", results[0].op},
                    {"verdict", results[0].verdict},
                    {"report", results[0].report}};
    } else {
        Json reqs = Json::array();
        for (const auto& r : results)
            reqs.push_back(Json{{"op", r.op}, {"verdict", r.verdict}, {"report", r.report}});
        std::string overall = "pass";
        for (const auto& r : results)
            if (r.verdict == "fail" && overall == "pass") overall = "fail";
        for (const auto& r : results)
            if (r.verdict == "capability_error") overall = "capability_error";
        body = Json{{"tool", "rmd"}, {"verdict", overall}, {"requests", std::move(reqs)}};
    }
    body["digest"] = fnv1a_digest(body.dump());
    return body;
}

}  // namespace detail

// Runs the tool on the given arguments (without argv[0]). Returns the exit
// code and writes to the supplied streams.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"robust mechanism analysis in exact rational arithmetic"};
    app.require_subcommand(1);

    std::string file;
    bool json_out = false, verbose = false, oracle = false;
    std::string mode, tau_text, eps_text;
    long long window = 1;
    long long indifferent_type = -1;
    bool window_given = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("file", file, "scenario JSON file")->required();
        cmd->add_flag("--json", json_out, "emit a deterministic JSON report");
        cmd->add_flag("--verbose", verbose, "include full residual tables");
    };

    CLI::App* beliefs = app.add_subcommand("beliefs", "belief-structure analysis");
    CLI::App* beliefs_check = beliefs->add_subcommand("check", "overlap and dimension profile");
    add_common(beliefs_check);
    beliefs_check->add_option("--window", window, "neighbour window (default 1)");

    CLI::App* ic = app.add_subcommand("ic", "incentive compatibility");
    CLI::App* ic_check = ic->add_subcommand("check", "verify truth-telling");
    add_common(ic_check);
    ic_check->add_option("--mode", mode, "expost | interim | robust (default robust)");

    CLI::App* env = app.add_subcommand("envelope", "payoff-difference identity");
    CLI::App* env_check = env->add_subcommand("check", "residuals against a tolerance");
    add_common(env_check);
    env_check->add_option("--tau", tau_text, "tolerance as p/q (default: largest grid step)");
    CLI::App* env_pipe = env->add_subcommand("pipeline", "overlap, robust IC, envelope, monotonicity");
    add_common(env_pipe);
    env_pipe->add_option("--tau", tau_text, "envelope tolerance as p/q");
    env_pipe->add_option("--window", window, "neighbour window (default 1)");

    CLI::App* pay = app.add_subcommand("payments", "payment comparisons");
    CLI::App* pay_cmp = pay->add_subcommand("compare", "offset structure of two mechanisms");
    add_common(pay_cmp);
    pay_cmp->add_option("--indifferent-type", indifferent_type,
                        "type index whose robust indifference is asserted");

    CLI::App* extract = app.add_subcommand("extract", "surplus extraction analysis");
    CLI::App* ex_pi = extract->add_subcommand("pi", "mixture independence of belief sets");
    add_common(ex_pi);
    ex_pi->add_flag("--oracle", oracle, "cross-check against the reference grid search");
    CLI::App* ex_ci = extract->add_subcommand("ci", "convex separation of belief sets");
    add_common(ex_ci);
    CLI::App* ex_menu = extract->add_subcommand("menu", "build or audit a contract menu");
    add_common(ex_menu);
    ex_menu->add_option("--mode", mode, "audit mode for a provided menu (default weak_full)");
    ex_menu->add_option("--eps", eps_text, "bound for the virtual audit mode");
    CLI::App* ex_vse = extract->add_subcommand("vse", "transfer-perturbation optimum");
    add_common(ex_vse);
    ex_vse->add_flag("--oracle", oracle, "cross-check against the vertex-expanded program");
    CLI::App* ex_virtual = extract->add_subcommand("virtual", "build a near-extraction menu");
    add_common(ex_virtual);
    ex_virtual->add_option("--eps", eps_text, "surplus bound as p/q")->required();
    CLI::App* ex_collapse = extract->add_subcommand("collapse", "shared-contract components");
    add_common(ex_collapse);
    ex_collapse
        ->add_option("--window", window, "restrict overlap tests to neighbours within the window")
        ->each([&](const std::string&) { window_given = true; });
    CLI::App* ex_optimal = extract->add_subcommand("optimal", "best uniform-price contract");
    add_common(ex_optimal);

    CLI::App* reveal = app.add_subcommand("reveal", "message-game analysis");
    CLI::App* reveal_tr = reveal->add_subcommand("transform", "collapse a strategy into a direct mechanism");
    add_common(reveal_tr);

    CLI::App* runner = app.add_subcommand("run", "execute the scenario's request list");
    add_common(runner);

    try {
        // CLI11's vector overload consumes arguments from the back.
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends print through CLI11's own stream.
            std::ostringstream help;
            const int code = app.exit(e, help, help);
            out << help.str();
            return code;
        }
        err << "input error: " << e.what() << "\n";
        return 2;
    }

    const auto op_name = [&]() -> std::string {
        if (beliefs_check->parsed()) return "beliefs.check";
        if (ic_check->parsed()) return "ic.check";
        if (env_check->parsed()) return "envelope.check";
        if (env_pipe->parsed()) return "envelope.pipeline";
        if (pay_cmp->parsed()) return "payments.compare";
        if (ex_pi->parsed()) return "extract.pi";
        if (ex_ci->parsed()) return "extract.ci";
        if (ex_menu->parsed()) return "extract.menu";
        if (ex_vse->parsed()) return "extract.vse";
        if (ex_virtual->parsed()) return "extract.virtual";
        if (ex_collapse->parsed()) return "extract.collapse";
        if (ex_optimal->parsed()) return "extract.optimal";
        if (reveal_tr->parsed()) return "reveal.transform";
        return "run";
    }();

    std::vector<OpResult> results;
    try {
        const Scenario sc = load_scenario(file);

        OpParams params;
        if (!mode.empty()) params.mode = mode;
        if (!tau_text.empty()) params.tau = parse_rational(tau_text);
        if (!eps_text.empty()) params.eps = parse_rational(eps_text);
        if (window < 1) throw InputError("--window must be at least 1");
        params.window = static_cast<std::size_t>(window);
        if (window_given) params.collapse_window = params.window;
        if (indifferent_type >= 0)
            params.indifferent_type = static_cast<std::size_t>(indifferent_type);
        params.oracle = oracle;
        params.verbose = verbose;

        if (op_name == "run") {
            if (sc.requests.empty())
                throw InputError("scenario has no \"requests\" to run");
            for (const Json& req : sc.requests) {
                if (!req.is_object() || !req.contains("op"))
                    throw InputError("$.requests[]: each request needs an \"op\"");
                OpParams rp = detail::params_from_request(req);
                rp.verbose = verbose;
                try {
                    results.push_back(detail::execute(sc, req["op"].get<std::string>(), rp));
                } catch (const CapabilityError& e) {
                    results.push_back(OpResult{req["op"].get<std::string>(), "capability_error",
                                               Json{{"message", e.what()}}});
                }
            }
        } else {
            try {
                results.push_back(detail::execute(sc, op_name, params));
            } catch (const CapabilityError& e) {
                results.push_back(
                    OpResult{op_name, "capability_error", Json{{"message", e.what()}}});
            }
        }
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    }

    if (json_out) {
        out << detail::envelope_json(results, op_name == "run").dump(2) << "\n";
    } else {
        for (const auto& r : results) detail::render_text(r, out);
    }
    return detail::exit_code_for(results);
}

}  // namespace rmd::cli
