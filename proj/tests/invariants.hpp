#pragma once

// Seeded invariant suites over randomly drawn instances. Each function runs
// one suite and returns human-readable failure strings (empty = green). The
// unit tests assert on these, and the integration gate re-runs the same
// functions under the same default seeds, so both see identical instances.

#include "fixtures.hpp"
#include "generators.hpp"

#include "rmd/envelope.hpp"
#include "rmd/extraction.hpp"
#include "rmd/ic.hpp"
#include "rmd/report_json.hpp"
#include "rmd/revelation.hpp"
#include "rmd/scenario.hpp"

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace rmdtest {

using Failures = std::vector<std::string>;

namespace detail {
inline void note(Failures& f, int round, const std::string& what) {
    f.push_back("round " + std::to_string(round) + ": " + what);
}
}  // namespace detail

// Worst-case over states <= worst-case over the belief set <= one prior
// drawn from the set; passing therefore nests the same way.
inline Failures slack_ordering_failures(std::uint64_t seed = 101, int rounds = 40) {
    using namespace rmd;
    Failures fails;
    Rng rng(seed);
    for (int round = 0; round < rounds; ++round) {
        const std::size_t n = static_cast<std::size_t>(rng.pick(2, 4));
        const std::size_t m = static_cast<std::size_t>(rng.pick(2, 3));
        const QuasilinearModel model = random_quasilinear(rng, n, m);
        const BeliefMap beliefs = random_belief_map(rng, n, m);
        Mat priors;
        for (const auto& set : beliefs) priors.push_back(random_member(rng, set));

        const IcReport expost = check_ic(model, IcMode::expost);
        const IcReport robust = check_ic(model, IcMode::robust, beliefs);
        const IcReport interim = check_ic(model, IcMode::interim, {}, priors);
        if (!(expost.slack <= robust.slack))
            detail::note(fails, round, "state-wise slack exceeds belief-set slack");
        if (!(robust.slack <= interim.slack))
            detail::note(fails, round, "belief-set slack exceeds single-prior slack");
        if (expost.pass && !robust.pass)
            detail::note(fails, round, "state-wise pass without belief-set pass");
        if (robust.pass && !interim.pass)
            detail::note(fails, round, "belief-set pass without single-prior pass");
    }
    return fails;
}

// With the whole simplex as every type's belief set, the belief-set check
// must agree with the state-wise check: same slack, verdict, and witness pair.
inline Failures full_ambiguity_equivalence_failures(std::uint64_t seed, int rounds,
                                                    std::size_t n_lo, std::size_t n_hi,
                                                    std::size_t m_lo, std::size_t m_hi) {
    using namespace rmd;
    Failures fails;
    Rng rng(seed);
    for (int round = 0; round < rounds; ++round) {
        const std::size_t n = static_cast<std::size_t>(
            rng.pick(static_cast<long long>(n_lo), static_cast<long long>(n_hi)));
        const std::size_t m = static_cast<std::size_t>(
            rng.pick(static_cast<long long>(m_lo), static_cast<long long>(m_hi)));
        const QuasilinearModel model = random_quasilinear(rng, n, m);
        const BeliefMap all_beliefs(n, full_simplex(m));

        const IcReport expost = check_ic(model, IcMode::expost);
        const IcReport robust = check_ic(model, IcMode::robust, all_beliefs);
        if (robust.slack != expost.slack)
            detail::note(fails, round,
                         "slack mismatch: " + to_string(robust.slack) + " vs " +
                             to_string(expost.slack));
        if (robust.pass != expost.pass) detail::note(fails, round, "verdict mismatch");
        if (robust.worst.truth != expost.worst.truth ||
            robust.worst.report != expost.worst.report)
            detail::note(fails, round, "witness pair mismatch");
    }
    return fails;
}

inline Failures full_ambiguity_equivalence_failures(std::uint64_t seed = 202, int rounds = 25) {
    return full_ambiguity_equivalence_failures(seed, rounds, 2, 5, 2, 3);
}

// Rendering any report twice must give identical bytes.
inline Failures determinism_failures(std::uint64_t seed = 303, int rounds = 8) {
    using namespace rmd;
    Failures fails;
    Rng rng(seed);
    for (int round = 0; round < rounds; ++round) {
        const QuasilinearModel model = random_quasilinear(rng, 3, 2);
        const BeliefMap beliefs = random_belief_map(rng, 3, 2);
        if (to_json(check_ic(model, IcMode::robust, beliefs)).dump() !=
            to_json(check_ic(model, IcMode::robust, beliefs)).dump())
            detail::note(fails, round, "incentive report not reproducible");
        if (to_json(check_envelope(model), true).dump() !=
            to_json(check_envelope(model), true).dump())
            detail::note(fails, round, "envelope report not reproducible");

        const ExtractionInstance inst = random_extraction(rng, 3, 2);
        if (to_json(solve_vse(inst)).dump() != to_json(solve_vse(inst)).dump())
            detail::note(fails, round, "perturbation solution not reproducible");
        if (to_json(check_probabilistic_independence(inst)).dump() !=
            to_json(check_probabilistic_independence(inst)).dump())
            detail::note(fails, round, "independence report not reproducible");
    }
    return fails;
}

// V-rep -> H-rep -> V-rep is the identity on belief sets.
inline Failures hull_roundtrip_failures(std::uint64_t seed = 404, int rounds = 30) {
    using namespace rmd;
    Failures fails;
    Rng rng(seed);
    for (int round = 0; round < rounds; ++round) {
        const std::size_t m = static_cast<std::size_t>(rng.pick(2, 3));
        const BeliefPolytope set = random_belief_set(rng, m);
        const Mat vertices = polytope_vertices(set);
        if (vertices.empty()) {
            detail::note(fails, round, "drawn set has no vertices");
            continue;
        }
        const BeliefPolytope rebuilt = from_vertices(vertices);
        if (!same_belief_set(set, rebuilt))
            detail::note(fails, round, "rebuilt set differs from the original");
        for (const auto& v : vertices)
            if (!contains(rebuilt, v)) detail::note(fails, round, "rebuilt set lost a vertex");
    }
    return fails;
}

// A contamination ball is full-dimensional exactly when its radius is
// positive; at radius zero it is the reference point.
inline Failures contamination_dimension_failures(std::uint64_t seed = 505, int rounds = 20) {
    using namespace rmd;
    Failures fails;
    Rng rng(seed);
    for (int round = 0; round < rounds; ++round) {
        const std::size_t m = static_cast<std::size_t>(rng.pick(2, 4));
        ContaminationSpec spec;
        spec.reference = random_distribution(rng, m);
        spec.epsilon = rng.pick(0, 1) ? make_rational(rng.pick(1, 4), 4) : Rational(0);
        const auto dim = has_full_dimension(make_contamination(spec));
        if (dim.full != (spec.epsilon > 0))
            detail::note(fails, round, "dimension disagrees with the radius");
        if (spec.epsilon == 0 && dim.affine_dim != 0)
            detail::note(fails, round, "point set reported positive dimension");
    }
    return fails;
}

// A wider window intersects over a superset of types, so intersections can
// only shrink; whole-map facts do not depend on the window.
inline Failures overlap_window_failures(std::uint64_t seed = 606, int rounds = 15) {
    using namespace rmd;
    Failures fails;
    Rng rng(seed);
    for (int round = 0; round < rounds; ++round) {
        const std::size_t n = static_cast<std::size_t>(rng.pick(3, 5));
        const std::size_t m = static_cast<std::size_t>(rng.pick(2, 3));
        const BeliefMap beliefs = random_belief_map(rng, n, m);
        OverlapProfile prev = overlap_profile(beliefs, 1);
        for (std::size_t w = 2; w < n; ++w) {
            const OverlapProfile cur = overlap_profile(beliefs, w);
            if (!prev.overlapping && cur.overlapping)
                detail::note(fails, round, "overlap reappeared at a wider window");
            for (std::size_t i = 0; i < n; ++i) {
                if (!prev.entries[i].nonempty && cur.entries[i].nonempty)
                    detail::note(fails, round, "intersection reappeared at a wider window");
                if (cur.entries[i].nonempty &&
                    cur.entries[i].affine_dim > prev.entries[i].affine_dim)
                    detail::note(fails, round, "intersection dimension grew with the window");
            }
            if (cur.common_belief != prev.common_belief)
                detail::note(fails, round, "common-belief flag depends on the window");
            if (cur.independent != prev.independent)
                detail::note(fails, round, "identical-sets flag depends on the window");
            prev = cur;
        }
    }
    return fails;
}

// Residuals of the payoff-difference identity add up along the grid.
inline Failures telescoping_failures(std::uint64_t seed = 707, int rounds = 20) {
    using namespace rmd;
    Failures fails;
    Rng rng(seed);
    for (int round = 0; round < rounds; ++round) {
        const std::size_t n = static_cast<std::size_t>(rng.pick(3, 5));
        const std::size_t m = static_cast<std::size_t>(rng.pick(2, 3));
        const QuasilinearModel model = random_quasilinear(rng, n, m);
        const EnvelopeReport report = check_envelope(model);
        std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Rational> residual;
        for (const auto& w : report.residuals) residual[{w.low, w.high, w.state}] = w.residual;
        for (std::size_t lo = 0; lo < n; ++lo)
            for (std::size_t hi = lo + 1; hi < n; ++hi)
                for (std::size_t s = 0; s < m; ++s) {
                    Rational sum(0);
                    for (std::size_t k = lo; k < hi; ++k) sum += residual.at({k, k + 1, s});
                    if (residual.at({lo, hi, s}) != sum)
                        detail::note(fails, round, "residual does not telescope");
                }
    }
    return fails;
}

// When every type's belief survives the mixture-extremality probe, the
// transfer-perturbation optimum is exactly zero and the sets separate
// convexly; when the probe fails, its violation must re-verify by direct
// substitution.
inline Failures extremal_vse_failures(std::uint64_t seed = 808, int rounds = 60,
                                      int min_extremal = 2) {
    using namespace rmd;
    Failures fails;
    Rng rng(seed);
    int extremal_seen = 0;
    for (int round = 0; round < rounds; ++round) {
        const std::size_t n = static_cast<std::size_t>(rng.pick(2, 3));
        const std::size_t m = static_cast<std::size_t>(rng.pick(2, 3));
        const ExtractionInstance inst = random_extraction(rng, n, m);
        const PiReport pi = check_probabilistic_independence(inst);
        if (pi.pass) {
            ++extremal_seen;
            if (solve_vse(inst).p_star != 0)
                detail::note(fails, round, "extremal beliefs but nonzero optimum");
            if (!check_convex_independence(inst).pass)
                detail::note(fails, round, "mixture extremality without convex separation");
        } else if (!pi.violation) {
            detail::note(fails, round, "failure reported without a violation certificate");
        } else if (!verify_pi_violation(inst, *pi.violation)) {
            detail::note(fails, round, "violation certificate does not re-verify");
        }
    }
    if (extremal_seen < min_extremal)
        fails.push_back("draw hit the extremal case only " + std::to_string(extremal_seen) +
                        " times");
    return fails;
}

// Convex separation is exactly what the menu construction needs: it must
// succeed and audit clean whenever separation holds, and refuse otherwise.
inline Failures menu_soundness_failures(std::uint64_t seed = 909, int rounds = 70,
                                        int min_separated = 5) {
    using namespace rmd;
    Failures fails;
    Rng rng(seed);
    int separated_seen = 0;
    for (int round = 0; round < rounds; ++round) {
        const std::size_t n = static_cast<std::size_t>(rng.pick(2, 3));
        const std::size_t m = static_cast<std::size_t>(rng.pick(2, 3));
        const ExtractionInstance inst = random_extraction(rng, n, m);
        const CiReport ci = check_convex_independence(inst);
        if (!ci.pass) {
            bool refused = false;
            try {
                build_extraction_menu(inst);
            } catch (const CapabilityError&) {
                refused = true;
            }
            if (!refused)
                detail::note(fails, round, "menu built despite failed separation");
            continue;
        }
        ++separated_seen;
        const Menu menu = build_extraction_menu(inst);
        const MenuReport audit = check_menu(inst, menu, MenuMode::weak_full);
        if (!audit.pass) detail::note(fails, round, "built menu fails its own audit");
        for (const auto& s : audit.own_surplus_min)
            if (s != 0) detail::note(fails, round, "worst-case own surplus is not zero");
    }
    if (separated_seen < min_separated)
        fails.push_back("draw hit the separated case only " + std::to_string(separated_seen) +
                        " times");
    return fails;
}

// With point beliefs the weak audit upgrades to the exact one; with thick
// sets the same construction must fail the exact audit.
inline Failures point_belief_upgrade_failures(std::uint64_t seed = 1010, int rounds = 40,
                                              int min_upgraded = 25) {
    using namespace rmd;
    Failures fails;
    Rng rng(seed);
    int upgraded = 0;
    for (int round = 0; round < rounds; ++round) {
        const std::size_t n = static_cast<std::size_t>(rng.pick(2, 3));
        Vec values;
        BeliefMap map;
        for (std::size_t t = 0; t < n; ++t) {
            values.push_back(Rational(static_cast<long long>(t)));
            map.push_back(singleton_belief(random_distribution(rng, 3)));
        }
        const ExtractionInstance inst = make_extraction_instance(values, map);
        if (!check_convex_independence(inst).pass) continue;
        ++upgraded;
        const Menu menu = build_extraction_menu(inst);
        if (!check_menu(inst, menu, MenuMode::full).pass)
            detail::note(fails, round, "point beliefs but exact audit failed");
    }
    if (upgraded < min_upgraded)
        fails.push_back("draw hit the separated case only " + std::to_string(upgraded) +
                        " times");

    const ExtractionInstance thick = contaminated_corners_instance(rat("1/8"));
    const Menu menu = build_extraction_menu(thick);
    if (!check_menu(thick, menu, MenuMode::weak_full).pass)
        fails.push_back("thick sets: weak audit rejected the built menu");
    const MenuReport exact = check_menu(thick, menu, MenuMode::full);
    if (exact.pass) fails.push_back("thick sets: exact audit accepted leftover surplus");
    else if (exact.failures.empty() || exact.failures[0].clause != "own surplus above bound" ||
             exact.failures[0].amount != rat("1/3"))
        fails.push_back("thick sets: unexpected exact-audit failure shape");
    return fails;
}

// Shared-contract components must match an independent union-find over
// pairwise thick intersections.
inline Failures collapse_reconstruction_failures(std::uint64_t seed = 1111, int rounds = 25) {
    using namespace rmd;
    Failures fails;
    Rng rng(seed);
    for (int round = 0; round < rounds; ++round) {
        const std::size_t n = static_cast<std::size_t>(rng.pick(2, 4));
        const std::size_t m = static_cast<std::size_t>(rng.pick(2, 3));
        const ExtractionInstance inst = random_extraction(rng, n, m);
        const CollapseReport report = menu_collapse(inst);

        std::vector<std::size_t> parent(n);
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
        const auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                // An edge needs a thick shared region: overlap in a single
                // point (or a face) does not merge the contracts.
                const auto cap = intersect(inst.beliefs[i], inst.beliefs[j]);
                if (cap && has_full_dimension(*cap).full) {
                    edges.emplace_back(i, j);
                    parent[find(i)] = find(j);
                }
            }
        if (report.edges != edges) detail::note(fails, round, "edge list mismatch");
        std::map<std::size_t, std::size_t> canon;
        std::size_t expected_count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t root = find(i);
            if (!canon.count(root)) canon[root] = expected_count++;
            if (report.component[i] != canon[root])
                detail::note(fails, round, "component label mismatch");
        }
        if (report.component_count != expected_count)
            detail::note(fails, round, "component count mismatch");
        if (report.single_contract_regime != (expected_count == 1))
            detail::note(fails, round, "single-contract flag mismatch");
    }
    return fails;
}

// Collapsing a robust message strategy into a direct rule keeps truthful
// reporting robust, and replays the played outcomes exactly.
inline Failures revelation_failures(std::uint64_t seed = 1212, int rounds = 40,
                                    int min_robust = 5) {
    using namespace rmd;
    Failures fails;
    Rng rng(seed);
    int robust_inputs = 0;
    for (int round = 0; round < rounds; ++round) {
        const std::size_t n = static_cast<std::size_t>(rng.pick(2, 3));
        const std::size_t m = static_cast<std::size_t>(rng.pick(2, 3));
        const IndirectMechanism game = random_indirect(rng, n, m, 2, 3);
        const BeliefMap beliefs = random_belief_map(rng, n, m);
        const RevelationResult result = revelation_transform(game, beliefs);
        if (result.input_strategy_robust) {
            ++robust_inputs;
            if (!result.output_truthful_robust)
                detail::note(fails, round, "robustness lost in the collapse");
        }
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t s = 0; s < m; ++s)
                if (result.direct.phi[t][s] != game.gamma[game.strategy[t]][s])
                    detail::note(fails, round, "collapsed rule changes an outcome");
    }
    if (robust_inputs < min_robust)
        fails.push_back("draw hit the robust case only " + std::to_string(robust_inputs) +
                        " times");
    return fails;
}

// JSON serialization is lossless for every model kind and belief shape.
inline Failures serialization_roundtrip_failures(std::uint64_t seed = 1313, int rounds = 12) {
    using namespace rmd;
    Failures fails;
    Rng rng(seed);
    for (int round = 0; round < rounds; ++round) {
        const QuasilinearModel model = random_quasilinear(rng, 3, 2);
        const QuasilinearModel back = quasilinear_from_json(quasilinear_to_json(model), "$");
        if (back.grid.points != model.grid.points || back.q != model.q || back.p != model.p)
            detail::note(fails, round, "allocation model changed through JSON");

        const BeliefPolytope set = random_belief_set(rng, 3);
        const BeliefPolytope back_set = belief_set_from_json(belief_set_to_json(set), "$");
        if (!same_belief_set(set, back_set))
            detail::note(fails, round, "belief set changed through JSON");
    }
    const IndirectMechanism game = random_indirect(rng, 3, 2, 2, 3);
    const IndirectMechanism back = indirect_from_json(indirect_to_json(game), "$");
    if (back.gamma != game.gamma || back.strategy != game.strategy || back.u != game.u)
        fails.push_back("message game changed through JSON");
    return fails;
}

// Every suite at its default seed, labeled, in a stable order.
inline std::vector<std::pair<std::string, Failures>> all_invariant_suites() {
    return {
        {"slack ordering", slack_ordering_failures()},
        {"full-ambiguity equivalence", full_ambiguity_equivalence_failures()},
        {"report determinism", determinism_failures()},
        {"hull round-trip", hull_roundtrip_failures()},
        {"contamination dimension", contamination_dimension_failures()},
        {"overlap window monotonicity", overlap_window_failures()},
        {"residual telescoping", telescoping_failures()},
        {"extremal beliefs and the perturbation optimum", extremal_vse_failures()},
        {"menu soundness", menu_soundness_failures()},
        {"point-belief upgrade", point_belief_upgrade_failures()},
        {"collapse reconstruction", collapse_reconstruction_failures()},
        {"revelation robustness", revelation_failures()},
        {"serialization round-trip", serialization_roundtrip_failures()},
    };
}

}  // namespace rmdtest
