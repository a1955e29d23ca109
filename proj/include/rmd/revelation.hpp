#pragma once

#include "rmd/ic.hpp"
#include "rmd/models.hpp"

#include <utility>
#include <vector>

namespace rmd {

// Best-response audit of a message strategy: for each type, playing its
// assigned message must beat every alternative message against the least
// favorable belief in the type's set.
struct StrategyReport {
    bool robust = false;
    Rational slack;  // worst (assigned minus alternative) expected gap
    std::size_t worst_type = 0;
    std::size_t worst_message = 0;
    std::optional<Vec> worst_belief;
};

inline StrategyReport check_message_strategy(const IndirectMechanism& game,
                                             const BeliefMap& beliefs) {
    const std::size_t n = game.grid.size(), m = game.states.size();
    if (beliefs.size() != n) throw InputError("one belief set per type required");
    for (const auto& set : beliefs)
        if (set.states != m) throw InputError("belief state count mismatch");

    StrategyReport report;
    bool first = true;
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t mine = game.strategy[t];
        for (std::size_t alt = 0; alt < game.messages.size(); ++alt) {
            if (alt == mine) continue;
            Vec gap(m);
            for (std::size_t s = 0; s < m; ++s)
                gap[s] = game.u[game.gamma[mine][s]][t][s] - game.u[game.gamma[alt][s]][t][s];
            SupportResult r = support_min(beliefs[t], gap);
            if (first || r.value < report.slack) {
                first = false;
                report.slack = r.value;
                report.worst_type = t;
                report.worst_message = alt;
                report.worst_belief = std::move(r.arg);
            }
        }
    }
    if (first) {
        // A single message admits no deviations.
        report.robust = true;
        report.slack = 0;
        return report;
    }
    report.robust = report.slack >= 0;
    return report;
}

// Collapse a message game and a strategy into a direct mechanism: report a
// type, receive the outcome the strategy would have produced. The report
// records whether the input strategy was robust and whether truth-telling is
// robust in the output; the second must hold whenever the first does.
struct RevelationResult {
    GeneralModel direct;
    bool input_strategy_robust = false;
    bool output_truthful_robust = false;
};

inline RevelationResult revelation_transform(const IndirectMechanism& game,
                                             const BeliefMap& beliefs) {
    const std::size_t n = game.grid.size(), m = game.states.size();
    std::vector<std::vector<std::size_t>> phi(n, std::vector<std::size_t>(m, 0));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t s = 0; s < m; ++s) phi[t][s] = game.gamma[game.strategy[t]][s];

    RevelationResult out{make_general(game.grid, game.states, game.outcomes, std::move(phi),
                                      game.u, game.u2),
                         false, false};
    out.input_strategy_robust = check_message_strategy(game, beliefs).robust;
    out.output_truthful_robust = check_ic_robust(out.direct, beliefs).pass;
    return out;
}

}  // namespace rmd
