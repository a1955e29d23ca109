#pragma once

#include "rmd/beliefs.hpp"
#include "rmd/ic.hpp"
#include "rmd/models.hpp"

#include <array>
#include <optional>
#include <vector>

namespace rmd {

// Trapezoid quadrature of a grid function between two grid nodes.
inline Rational trapezoid(const TypeGrid& grid, const Vec& values, std::size_t lo, std::size_t hi) {
    Rational acc(0);
    for (std::size_t k = lo; k < hi; ++k)
        acc += (grid[k + 1] - grid[k]) * (values[k] + values[k + 1]) / 2;
    return acc;
}

inline Rational max_grid_step(const TypeGrid& grid) {
    Rational step = grid[1] - grid[0];
    for (std::size_t k = 2; k < grid.size(); ++k)
        if (grid[k] - grid[k - 1] > step) step = grid[k] - grid[k - 1];
    return step;
}

struct EnvelopeWitness {
    std::size_t low = 0;
    std::size_t high = 0;
    std::size_t state = 0;
    Rational residual;
};

// Residual of the payoff-difference identity
//   U(high, s) - U(low, s) = integral of the sensitivity along the grid,
// with the integral taken by trapezoid quadrature. `max_abs_residual` is the
// largest magnitude over ordered node pairs and states; the witness is the
// lexicographically first (low, high, state) attaining it.
struct EnvelopeReport {
    bool pass = false;
    Rational tolerance;
    Rational max_abs_residual;
    EnvelopeWitness worst;
    std::vector<EnvelopeWitness> residuals;  // every ordered pair and state
};

namespace detail {

template <typename ValueAt, typename SlopeAt>
EnvelopeReport envelope_scan(const TypeGrid& grid, std::size_t states, ValueAt value_at,
                             SlopeAt slope_at, std::optional<Rational> tau) {
    EnvelopeReport report;
    report.tolerance = tau ? *tau : max_grid_step(grid);
    report.max_abs_residual = 0;
    bool first = true;
    for (std::size_t s = 0; s < states; ++s) {
        Vec slope(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) slope[k] = slope_at(k, s);
        for (std::size_t lo = 0; lo < grid.size(); ++lo) {
            for (std::size_t hi = lo + 1; hi < grid.size(); ++hi) {
                const Rational residual =
                    (value_at(hi, s) - value_at(lo, s)) - trapezoid(grid, slope, lo, hi);
                report.residuals.push_back(EnvelopeWitness{lo, hi, s, residual});
                const Rational mag = residual < 0 ? Rational(-residual) : residual;
                if (first || mag > report.max_abs_residual) {
                    first = false;
                    report.max_abs_residual = mag;
                    report.worst = EnvelopeWitness{lo, hi, s, residual};
                }
            }
        }
    }
    if (first) throw InputError("envelope check needs at least two grid nodes");
    // Witnesses are appended in (state, low, high) order; rebuild the worst
    // entry as the lexicographically first (low, high, state) maximizer.
    for (const auto& w : report.residuals) {
        const Rational mag = w.residual < 0 ? Rational(-w.residual) : w.residual;
        if (mag != report.max_abs_residual) continue;
        const auto key = std::array<std::size_t, 3>{w.low, w.high, w.state};
        const auto cur = std::array<std::size_t, 3>{report.worst.low, report.worst.high,
                                                    report.worst.state};
        if (key < cur) report.worst = w;
    }
    report.pass = report.max_abs_residual <= report.tolerance;
    return report;
}

}  // namespace detail

// Quasilinear flavour: payoff t*q - p, sensitivity q.
inline EnvelopeReport check_envelope(const QuasilinearModel& model,
                                     std::optional<Rational> tau = std::nullopt) {
    return detail::envelope_scan(
        model.grid, model.state_count(),
        [&](std::size_t t, std::size_t s) { return model.grid[t] * model.q[t][s] - model.p[t][s]; },
        [&](std::size_t t, std::size_t s) { return model.q[t][s]; }, tau);
}

// Outcome-mechanism flavour: payoff u on the truthful diagonal, sensitivity u2.
inline EnvelopeReport check_envelope(const GeneralModel& model,
                                     std::optional<Rational> tau = std::nullopt) {
    return detail::envelope_scan(
        model.grid, model.state_count(),
        [&](std::size_t t, std::size_t s) { return model.utility(t, t, s); },
        [&](std::size_t t, std::size_t s) { return model.sensitivity(t, t, s); }, tau);
}

// Auction flavour: one agent's slice, states are opponent profiles.
inline EnvelopeReport check_envelope(const AuctionModel& auction, std::size_t agent,
                                     std::optional<Rational> tau = std::nullopt) {
    if (agent >= auction.agents()) throw InputError("no such agent");
    const std::size_t opp = detail::opponent_profile_count(auction, agent);
    return detail::envelope_scan(
        auction.grids[agent], opp,
        [&](std::size_t t, std::size_t s) {
            return auction.v[agent][t][s] * auction.q[agent][t][s] - auction.p[agent][t][s];
        },
        [&](std::size_t t, std::size_t s) {
            return auction.dv[agent][t][s] * auction.q[agent][t][s];
        },
        tau);
}

// ---------------------------------------------------------------------------
// Combined diagnostic: overlap structure, robust incentives, envelope
// residuals, allocation monotonicity, and the downstream implications.

struct PipelineReport {
    OverlapProfile overlap;
    IcReport robust;
    EnvelopeReport envelope;
    MonotonicityReport monotone;
    IcReport expost;
    // Implication health, evaluated only when the antecedents hold:
    //   fully overlapping belief structure + robust pass  =>  envelope pass
    //   ... + monotone allocation                         =>  ex post pass
    bool envelope_implication_applicable = false;
    bool envelope_implication_ok = true;
    bool expost_implication_applicable = false;
    bool expost_implication_ok = true;
};

inline PipelineReport run_pipeline(const QuasilinearModel& model, const BeliefMap& beliefs,
                                   std::size_t window = 1,
                                   std::optional<Rational> tau = std::nullopt) {
    PipelineReport out{overlap_profile(beliefs, window),
                       check_ic_robust(model, beliefs),
                       check_envelope(model, tau),
                       check_allocation_monotone(model),
                       check_ic_expost(model)};
    out.envelope_implication_applicable = out.overlap.fully_overlapping && out.robust.pass;
    if (out.envelope_implication_applicable)
        out.envelope_implication_ok = out.envelope.pass;
    out.expost_implication_applicable = out.envelope_implication_applicable && out.monotone.pass;
    if (out.expost_implication_applicable)
        out.expost_implication_ok = out.expost.pass;
    return out;
}

// ---------------------------------------------------------------------------
// Payment comparison for two mechanisms sharing a grid and allocation rule.
// If both satisfy the envelope identity exactly, payments can differ only by
// a per-state constant; if some type is robustly indifferent in both, the
// constants must vanish.

struct PaymentComparison {
    bool same_allocation = false;
    bool constant_offsets = false;  // p_a - p_b independent of the type
    Vec offsets;                    // per state, valid when constant_offsets
    bool zero_offsets = false;
    std::optional<std::pair<std::size_t, std::size_t>> mismatch;  // (type, state)
    // When an indifferent type is supplied with its belief set: whether the
    // expected payment difference is exactly zero against every belief in the
    // set. In that case the offsets must vanish.
    std::optional<bool> robust_indifference;
    bool indifference_forces_zero = true;  // robust_indifference => zero_offsets
};

inline PaymentComparison compare_payments(const QuasilinearModel& a, const QuasilinearModel& b,
                                          const BeliefMap& beliefs = {},
                                          std::optional<std::size_t> indifferent_type = std::nullopt) {
    PaymentComparison out;
    if (a.types() != b.types() || a.state_count() != b.state_count() ||
        a.grid.points != b.grid.points)
        throw InputError("payment comparison requires identical grids and state counts");
    if (a.q != b.q) throw InputError("payment comparison requires identical allocation tables");
    out.same_allocation = true;
    out.offsets.assign(a.state_count(), Rational(0));
    for (std::size_t s = 0; s < a.state_count(); ++s) out.offsets[s] = a.p[0][s] - b.p[0][s];
    out.constant_offsets = true;
    for (std::size_t t = 0; t < a.types() && out.constant_offsets; ++t) {
        for (std::size_t s = 0; s < a.state_count(); ++s) {
            if (a.p[t][s] - b.p[t][s] != out.offsets[s]) {
                out.constant_offsets = false;
                out.mismatch = {t, s};
                break;
            }
        }
    }
    out.zero_offsets = out.constant_offsets;
    if (out.constant_offsets)
        for (const auto& k : out.offsets) out.zero_offsets = out.zero_offsets && is_zero(k);

    if (indifferent_type) {
        const std::size_t ti = *indifferent_type;
        if (ti >= a.types()) throw InputError("indifferent type index out of range");
        if (beliefs.size() != a.types())
            throw InputError("payment comparison with an indifferent type needs one belief set per type");
        Vec diff(a.state_count());
        for (std::size_t s = 0; s < a.state_count(); ++s) diff[s] = a.p[ti][s] - b.p[ti][s];
        const Rational lo = support_min(beliefs[ti], diff).value;
        const Rational hi = support_max(beliefs[ti], diff).value;
        out.robust_indifference = is_zero(lo) && is_zero(hi);
        out.indifference_forces_zero = !*out.robust_indifference || out.zero_offsets;
    }
    return out;
}

}  // namespace rmd
