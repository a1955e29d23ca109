#pragma once

#include "rmd/beliefs.hpp"
#include "rmd/models.hpp"
#include "rmd/parallel.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace rmd {

enum class IcMode { expost, interim, robust };

inline const char* to_cstring(IcMode mode) {
    switch (mode) {
        case IcMode::expost: return "expost";
        case IcMode::interim: return "interim";
        case IcMode::robust: return "robust";
    }
    return "?";
}

// Worst truthful-minus-deviation slack and where it is attained. For the
// ex post mode `state` is set; for belief-weighted modes `belief` is the
// minimizing distribution. Ties are resolved lexicographically by
// (truth, report, state), so a failing check names the smallest violator
// among those attaining the worst slack.
struct IcWitness {
    std::size_t truth = 0;
    std::size_t report = 0;
    std::optional<std::size_t> state;
    std::optional<Vec> belief;
};

struct IcReport {
    IcMode mode = IcMode::expost;
    bool pass = false;
    Rational slack;  // min over deviations of (truthful payoff - deviation payoff)
    IcWitness worst;
};

namespace detail {

// Per-state payoff advantage of truth-telling for true type t vs report theta.
template <typename Model>
Vec truth_gap(const Model& model, std::size_t t, std::size_t theta) {
    Vec gap(model.state_count());
    for (std::size_t s = 0; s < model.state_count(); ++s)
        gap[s] = model.utility(t, t, s) - model.utility(t, theta, s);
    return gap;
}

struct PairSlack {
    Rational slack;
    std::optional<std::size_t> state;
    std::optional<Vec> belief;
};

// Evaluates every (truth, report) pair — concurrently when a thread budget
// allows — then folds in lexicographic order so the outcome is deterministic.
template <typename Model, typename PairEval>
IcReport scan_pairs(const Model& model, IcMode mode, PairEval eval) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t t = 0; t < model.types(); ++t)
        for (std::size_t theta = 0; theta < model.types(); ++theta)
            if (theta != t) pairs.emplace_back(t, theta);
    if (pairs.empty()) throw InputError("incentive check needs at least two types");

    std::vector<PairSlack> slots(pairs.size());
    parallel_for(pairs.size(),
                 [&](std::size_t i) { slots[i] = eval(pairs[i].first, pairs[i].second); });

    IcReport report;
    report.mode = mode;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i == 0 || slots[i].slack < report.slack) {
            report.slack = slots[i].slack;
            report.worst =
                IcWitness{pairs[i].first, pairs[i].second, slots[i].state, std::move(slots[i].belief)};
        }
    }
    report.pass = report.slack >= 0;
    return report;
}

}  // namespace detail

// Ex post: truth-telling must win state by state.
template <typename Model>
IcReport check_ic_expost(const Model& model) {
    return detail::scan_pairs(model, IcMode::expost, [&](std::size_t t, std::size_t theta) {
        const Vec gap = detail::truth_gap(model, t, theta);
        detail::PairSlack ps{gap[0], 0, std::nullopt};
        for (std::size_t s = 1; s < gap.size(); ++s) {
            if (gap[s] < ps.slack) {
                ps.slack = gap[s];
                ps.state = s;
            }
        }
        return ps;
    });
}

// Interim: truth-telling must win on average under one fixed prior per type.
template <typename Model>
IcReport check_ic_interim(const Model& model, const Mat& priors) {
    if (priors.size() != model.types()) throw InputError("interim check: one prior per type required");
    for (const auto& prior : priors) {
        if (prior.size() != model.state_count()) throw InputError("interim prior: state count mismatch");
        validate_distribution(prior, "interim prior");
    }
    return detail::scan_pairs(model, IcMode::interim, [&](std::size_t t, std::size_t theta) {
        const Vec gap = detail::truth_gap(model, t, theta);
        return detail::PairSlack{dot(priors[t], gap), std::nullopt, priors[t]};
    });
}

// Robust: truth-telling must win against the least favorable belief in the
// type's belief set. The witness belief is a minimizer.
template <typename Model>
IcReport check_ic_robust(const Model& model, const BeliefMap& beliefs) {
    if (beliefs.size() != model.types()) throw InputError("robust check: one belief set per type required");
    for (const auto& set : beliefs)
        if (set.states != model.state_count()) throw InputError("robust check: belief state count mismatch");
    return detail::scan_pairs(model, IcMode::robust, [&](std::size_t t, std::size_t theta) {
        const Vec gap = detail::truth_gap(model, t, theta);
        SupportResult r = support_min(beliefs[t], gap);
        return detail::PairSlack{std::move(r.value), std::nullopt, std::move(r.arg)};
    });
}

template <typename Model>
IcReport check_ic(const Model& model, IcMode mode, const BeliefMap& beliefs = {}, const Mat& priors = {}) {
    switch (mode) {
        case IcMode::expost: return check_ic_expost(model);
        case IcMode::interim: return check_ic_interim(model, priors);
        case IcMode::robust: return check_ic_robust(model, beliefs);
    }
    throw InputError("unknown incentive mode");
}

struct AuctionIcReport {
    bool pass = false;
    std::vector<IcReport> per_agent;
};

// Auction-wide check: every agent's direct slice must pass unilaterally.
inline AuctionIcReport check_auction_ic(const AuctionModel& auction, IcMode mode,
                                        const std::vector<BeliefMap>& beliefs = {},
                                        const std::vector<Mat>& priors = {}) {
    AuctionIcReport out;
    out.pass = true;
    for (std::size_t i = 0; i < auction.agents(); ++i) {
        const GeneralModel view = agent_view(auction, i);
        IcReport r;
        switch (mode) {
            case IcMode::expost: r = check_ic_expost(view); break;
            case IcMode::interim:
                if (priors.size() != auction.agents())
                    throw InputError("auction interim check: one prior table per agent required");
                r = check_ic_interim(view, priors[i]);
                break;
            case IcMode::robust:
                if (beliefs.size() != auction.agents())
                    throw InputError("auction robust check: one belief map per agent required");
                r = check_ic_robust(view, beliefs[i]);
                break;
        }
        out.pass = out.pass && r.pass;
        out.per_agent.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Monotonicity checks.

struct MonotonicityWitness {
    std::size_t low = 0;   // smaller type index
    std::size_t high = 0;  // larger type index
    std::optional<std::size_t> state;
    std::optional<Vec> belief;
};

struct MonotonicityReport {
    bool pass = false;
    Rational slack;  // min over checked comparisons of (high value - low value)
    MonotonicityWitness worst;
};

namespace detail {

template <typename ValueAt>
MonotonicityReport scan_monotone(std::size_t types, std::size_t states, ValueAt value_at) {
    MonotonicityReport report;
    bool first = true;
    for (std::size_t lo = 0; lo < types; ++lo) {
        for (std::size_t hi = lo + 1; hi < types; ++hi) {
            for (std::size_t s = 0; s < states; ++s) {
                const Rational diff = value_at(hi, s) - value_at(lo, s);
                if (first || diff < report.slack) {
                    first = false;
                    report.slack = diff;
                    report.worst = MonotonicityWitness{lo, hi, s, std::nullopt};
                }
            }
        }
    }
    if (first) throw InputError("monotonicity check needs at least two types");
    report.pass = report.slack >= 0;
    return report;
}

}  // namespace detail

// State-by-state allocation monotonicity in the report.
inline MonotonicityReport check_allocation_monotone(const QuasilinearModel& model) {
    return detail::scan_monotone(model.types(), model.state_count(),
                                 [&](std::size_t t, std::size_t s) { return model.q[t][s]; });
}

inline MonotonicityReport check_allocation_monotone(const AuctionModel& auction, std::size_t agent) {
    if (agent >= auction.agents()) throw InputError("no such agent");
    const std::size_t opp = detail::opponent_profile_count(auction, agent);
    return detail::scan_monotone(auction.grids[agent].size(), opp,
                                 [&](std::size_t t, std::size_t s) { return auction.q[agent][t][s]; });
}

// Outcome sensitivity monotone in the report: for every true type and state,
// a higher report must yield a weakly higher type-derivative of the payoff.
inline MonotonicityReport check_sensitivity_monotone(const GeneralModel& model) {
    MonotonicityReport report;
    bool first = true;
    for (std::size_t lo = 0; lo < model.types(); ++lo) {
        for (std::size_t hi = lo + 1; hi < model.types(); ++hi) {
            for (std::size_t t = 0; t < model.types(); ++t) {
                for (std::size_t s = 0; s < model.state_count(); ++s) {
                    const Rational diff = model.sensitivity(t, hi, s) - model.sensitivity(t, lo, s);
                    if (first || diff < report.slack) {
                        first = false;
                        report.slack = diff;
                        report.worst = MonotonicityWitness{lo, hi, s, std::nullopt};
                    }
                }
            }
        }
    }
    if (first) throw InputError("monotonicity check needs at least two types");
    report.pass = report.slack >= 0;
    return report;
}

// ---------------------------------------------------------------------------
// Structural consequences of robust incentive compatibility for allocations.
// Each clause is checked only when its structural precondition holds.

struct ImplicationClause {
    bool applicable = false;
    bool pass = true;
    std::optional<MonotonicityWitness> worst;
};

struct MonotonicityImplications {
    bool robust_ic_holds = false;       // annotation: conclusions are only promised under it
    ImplicationClause common_belief;    // whole-family intersection nonempty
    ImplicationClause independent;      // all belief sets identical
    ImplicationClause overlapping;      // windowed pairwise intersections nonempty
    ImplicationClause full_ambiguity;   // every set is the whole simplex
    std::vector<std::pair<std::size_t, std::size_t>> empty_pairs;  // windowed pairs with no overlap
};

namespace detail {

inline void clause_check_pairs(const QuasilinearModel& model, const BeliefPolytope& set,
                               ImplicationClause& clause) {
    for (std::size_t lo = 0; lo < model.types(); ++lo) {
        for (std::size_t hi = lo + 1; hi < model.types(); ++hi) {
            Vec diff(model.state_count());
            for (std::size_t s = 0; s < model.state_count(); ++s)
                diff[s] = model.q[hi][s] - model.q[lo][s];
            SupportResult r = support_min(set, diff);
            if (r.value < 0) {
                clause.pass = false;
                if (!clause.worst)
                    clause.worst = MonotonicityWitness{lo, hi, std::nullopt, std::move(r.arg)};
            }
        }
    }
}

}  // namespace detail

inline MonotonicityImplications check_monotonicity_implications(const QuasilinearModel& model,
                                                                const BeliefMap& beliefs,
                                                                std::size_t window = 1) {
    if (beliefs.size() != model.types()) throw InputError("one belief set per type required");
    if (window < 1) throw InputError("window must be at least 1");
    MonotonicityImplications out;
    out.robust_ic_holds = check_ic_robust(model, beliefs).pass;

    // Common belief: expected allocation monotone under any shared belief.
    std::optional<BeliefPolytope> common = beliefs.front();
    for (std::size_t t = 1; t < beliefs.size() && common; ++t) common = intersect(*common, beliefs[t]);
    if (common) {
        out.common_belief.applicable = true;
        detail::clause_check_pairs(model, *common, out.common_belief);
    }

    // Identical belief sets: same test against the shared set.
    bool all_same = true;
    for (std::size_t t = 1; t < beliefs.size() && all_same; ++t)
        all_same = same_belief_set(beliefs.front(), beliefs[t]);
    if (all_same) {
        out.independent.applicable = true;
        detail::clause_check_pairs(model, beliefs.front(), out.independent);
    }

    // Overlapping neighbours: local comparison inside each windowed overlap.
    bool any_overlap = false;
    for (std::size_t lo = 0; lo < model.types(); ++lo) {
        for (std::size_t hi = lo + 1; hi < model.types() && hi - lo <= window; ++hi) {
            std::optional<BeliefPolytope> cap = intersect(beliefs[lo], beliefs[hi]);
            if (!cap) {
                out.empty_pairs.emplace_back(lo, hi);
                continue;
            }
            any_overlap = true;
            Vec diff(model.state_count());
            for (std::size_t s = 0; s < model.state_count(); ++s)
                diff[s] = model.q[hi][s] - model.q[lo][s];
            SupportResult r = support_min(*cap, diff);
            if (r.value < 0) {
                out.overlapping.pass = false;
                if (!out.overlapping.worst)
                    out.overlapping.worst =
                        MonotonicityWitness{lo, hi, std::nullopt, std::move(r.arg)};
            }
        }
    }
    out.overlapping.applicable = any_overlap;

    // Full ambiguity: every belief set is the entire simplex, so the
    // allocation must be monotone state by state.
    bool all_full = true;
    for (const auto& set : beliefs)
        all_full = all_full && canonical_rows(set).empty();
    if (all_full) {
        out.full_ambiguity.applicable = true;
        MonotonicityReport r = check_allocation_monotone(model);
        out.full_ambiguity.pass = r.pass;
        if (!r.pass) out.full_ambiguity.worst = r.worst;
    }
    return out;
}

}  // namespace rmd
