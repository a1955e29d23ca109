#pragma once

#include "rmd/rational.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace rmd {

// Discretized type line: strictly increasing rationals spanning [0,1].
struct TypeGrid {
    Vec points;

    std::size_t size() const { return points.size(); }
    const Rational& operator[](std::size_t i) const { return points[i]; }
};

inline TypeGrid make_grid(Vec points) {
    if (points.size() < 2) throw InputError("type grid needs at least two points");
    if (points.front() != 0 || points.back() != 1)
        throw InputError("type grid must span [0,1] inclusive");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i - 1] >= points[i]) throw InputError("type grid must be strictly increasing");
    return TypeGrid{std::move(points)};
}

struct StateSpace {
    std::vector<std::string> labels;
    std::size_t size() const { return labels.size(); }
};

// Single agent, quasilinear utility t * q(theta, s) - p(theta, s).
// Tables are type-major: q[type][state].
struct QuasilinearModel {
    TypeGrid grid;
    StateSpace states;
    Mat q;
    Mat p;

    std::size_t types() const { return grid.size(); }
    std::size_t state_count() const { return states.size(); }
    // Utility of true type t reporting theta when the state is s.
    Rational utility(std::size_t t, std::size_t theta, std::size_t s) const {
        return grid[t] * q[theta][s] - p[theta][s];
    }
};

inline void check_table(const Mat& table, std::size_t rows, std::size_t cols, const std::string& name) {
    if (table.size() != rows) throw InputError(name + ": expected " + std::to_string(rows) + " rows");
    for (const auto& row : table)
        if (row.size() != cols) throw InputError(name + ": expected " + std::to_string(cols) + " columns");
}

inline QuasilinearModel make_quasilinear(TypeGrid grid, StateSpace states, Mat q, Mat p) {
    const std::size_t n = grid.size(), m = states.size();
    if (m == 0) throw InputError("quasilinear model needs at least one state");
    check_table(q, n, m, "allocation table");
    check_table(p, n, m, "payment table");
    return QuasilinearModel{std::move(grid), std::move(states), std::move(q), std::move(p)};
}

// Multi-agent interdependent-value auction. Profile tables are flattened in
// row-major order with agent 0 slowest. All tables are per agent.
struct AuctionModel {
    std::vector<TypeGrid> grids;
    std::vector<Mat> v;   // v[i][profile] value of the good to agent i
    std::vector<Mat> dv;  // own-type derivative of v[i], nonnegative
    std::vector<Mat> q;   // allocation share, nonnegative
    std::vector<Mat> p;   // payment

    std::size_t agents() const { return grids.size(); }
    std::size_t profile_count() const {
        std::size_t n = 1;
        for (const auto& g : grids) n *= g.size();
        return n;
    }
};

namespace detail {

// Tables above are stored as Mat indexed [own report][opponent profile] per
// agent, where opponent profiles are flattened row-major over j != i.
inline std::size_t opponent_profile_count(const AuctionModel& m, std::size_t agent) {
    std::size_t n = 1;
    for (std::size_t j = 0; j < m.agents(); ++j)
        if (j != agent) n *= m.grids[j].size();
    return n;
}

}  // namespace detail

// Mixed-radix helpers over full type profiles, agent 0 slowest.
inline std::vector<std::size_t> profile_sizes(const AuctionModel& m) {
    std::vector<std::size_t> sizes;
    for (const auto& g : m.grids) sizes.push_back(g.size());
    return sizes;
}

inline std::vector<std::size_t> unflatten_profile(const std::vector<std::size_t>& sizes,
                                                  std::size_t index) {
    std::vector<std::size_t> profile(sizes.size(), 0);
    for (std::size_t i = sizes.size(); i-- > 0;) {
        profile[i] = index % sizes[i];
        index /= sizes[i];
    }
    return profile;
}

// Flat index of the opponents' coordinates, skipping `agent`, same ordering.
inline std::size_t opponent_index(const std::vector<std::size_t>& sizes,
                                  const std::vector<std::size_t>& profile, std::size_t agent) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i == agent) continue;
        idx = idx * sizes[i] + profile[i];
    }
    return idx;
}

inline AuctionModel make_auction(std::vector<TypeGrid> grids, std::vector<Mat> v, std::vector<Mat> dv,
                                 std::vector<Mat> q, std::vector<Mat> p) {
    AuctionModel model{std::move(grids), std::move(v), std::move(dv), std::move(q), std::move(p)};
    const std::size_t k = model.agents();
    if (k < 1) throw InputError("auction model needs at least one agent");
    if (model.v.size() != k || model.dv.size() != k || model.q.size() != k || model.p.size() != k)
        throw InputError("auction model: per-agent table count mismatch");
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t own = model.grids[i].size();
        const std::size_t opp = detail::opponent_profile_count(model, i);
        check_table(model.v[i], own, opp, "value table");
        check_table(model.dv[i], own, opp, "value derivative table");
        check_table(model.q[i], own, opp, "allocation table");
        check_table(model.p[i], own, opp, "payment table");
        for (const auto& row : model.dv[i])
            for (const auto& cell : row)
                if (cell < 0) throw InputError("value derivative table must be nonnegative");
        for (const auto& row : model.q[i])
            for (const auto& cell : row)
                if (cell < 0) throw InputError("allocation table must be nonnegative");
    }
    return model;
}

// Abstract outcome mechanism: outcome = phi(report, state), payoff
// u(outcome, true type, state) with explicit type-derivative table u2.
struct GeneralModel {
    TypeGrid grid;
    StateSpace states;
    std::vector<std::string> outcomes;
    std::vector<std::vector<std::size_t>> phi;  // phi[type][state] -> outcome id
    std::vector<Mat> u;                         // u[outcome][type][state]
    std::vector<Mat> u2;                        // same shape, nonnegative
    bool u2_from_finite_difference = false;

    std::size_t types() const { return grid.size(); }
    std::size_t state_count() const { return states.size(); }
    Rational utility(std::size_t t, std::size_t theta, std::size_t s) const {
        return u[phi[theta][s]][t][s];
    }
    Rational sensitivity(std::size_t t, std::size_t theta, std::size_t s) const {
        return u2[phi[theta][s]][t][s];
    }
};

inline GeneralModel make_general(TypeGrid grid, StateSpace states, std::vector<std::string> outcomes,
                                 std::vector<std::vector<std::size_t>> phi, std::vector<Mat> u,
                                 std::vector<Mat> u2, bool u2_from_finite_difference = false) {
    GeneralModel model{std::move(grid),     std::move(states), std::move(outcomes), std::move(phi),
                       std::move(u),        std::move(u2),     u2_from_finite_difference};
    const std::size_t n = model.types(), m = model.state_count(), o = model.outcomes.size();
    if (m == 0) throw InputError("general model needs at least one state");
    if (o == 0) throw InputError("general model needs at least one outcome");
    if (model.phi.size() != n) throw InputError("phi: wrong type count");
    for (const auto& row : model.phi) {
        if (row.size() != m) throw InputError("phi: wrong state count");
        for (auto id : row)
            if (id >= o) throw InputError("phi: outcome id out of range");
    }
    if (model.u.size() != o || model.u2.size() != o) throw InputError("u/u2: wrong outcome count");
    for (std::size_t k = 0; k < o; ++k) {
        check_table(model.u[k], n, m, "u[" + model.outcomes[k] + "]");
        check_table(model.u2[k], n, m, "u2[" + model.outcomes[k] + "]");
        for (const auto& row : model.u2[k])
            for (const auto& cell : row)
                if (cell < 0) throw InputError("u2 must be nonnegative");
    }
    return model;
}

// Central finite difference of u along the type grid, one-sided at the ends.
// Flagged on the model: a fallback for inputs that lack an explicit u2.
inline std::vector<Mat> derive_u2_central_difference(const TypeGrid& grid, const std::vector<Mat>& u) {
    const std::size_t n = grid.size();
    std::vector<Mat> u2(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        const std::size_t m = u[k].empty() ? 0 : u[k][0].size();
        u2[k].assign(n, Vec(m, Rational(0)));
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t lo = t == 0 ? 0 : t - 1;
            const std::size_t hi = t + 1 == n ? t : t + 1;
            for (std::size_t s = 0; s < m; ++s)
                u2[k][t][s] = (u[k][hi][s] - u[k][lo][s]) / (grid[hi] - grid[lo]);
        }
    }
    return u2;
}

// Message game on top of the same state space: gamma maps message and state
// to an outcome; a strategy maps each type to a message.
struct IndirectMechanism {
    TypeGrid grid;
    StateSpace states;
    std::vector<std::string> outcomes;
    std::vector<std::string> messages;
    std::vector<std::vector<std::size_t>> gamma;  // gamma[message][state] -> outcome id
    std::vector<std::size_t> strategy;            // strategy[type] -> message id
    std::vector<Mat> u;                           // u[outcome][type][state]
    std::vector<Mat> u2;
};

inline IndirectMechanism make_indirect(TypeGrid grid, StateSpace states,
                                       std::vector<std::string> outcomes,
                                       std::vector<std::string> messages,
                                       std::vector<std::vector<std::size_t>> gamma,
                                       std::vector<std::size_t> strategy, std::vector<Mat> u,
                                       std::vector<Mat> u2) {
    IndirectMechanism g{std::move(grid), std::move(states),   std::move(outcomes), std::move(messages),
                        std::move(gamma), std::move(strategy), std::move(u),        std::move(u2)};
    const std::size_t n = g.grid.size(), m = g.states.size(), o = g.outcomes.size();
    if (g.messages.empty()) throw InputError("indirect mechanism needs messages");
    if (g.gamma.size() != g.messages.size()) throw InputError("gamma: wrong message count");
    for (const auto& row : g.gamma) {
        if (row.size() != m) throw InputError("gamma: wrong state count");
        for (auto id : row)
            if (id >= o) throw InputError("gamma: outcome id out of range");
    }
    if (g.strategy.size() != n) throw InputError("strategy: wrong type count");
    for (auto msg : g.strategy)
        if (msg >= g.messages.size()) throw InputError("strategy: message id out of range");
    if (g.u.size() != o || g.u2.size() != o) throw InputError("u/u2: wrong outcome count");
    for (std::size_t k = 0; k < o; ++k) {
        check_table(g.u[k], n, m, "u[" + g.outcomes[k] + "]");
        check_table(g.u2[k], n, m, "u2[" + g.outcomes[k] + "]");
    }
    return g;
}

// One agent's slice of an auction as a GeneralModel: states are opponent
// profiles, outcomes are the distinct (share, payment) pairs the tables
// realize, u = v * share - payment, u2 = dv * share.
inline GeneralModel agent_view(const AuctionModel& auction, std::size_t agent) {
    if (agent >= auction.agents()) throw InputError("agent_view: no such agent");
    const std::size_t own = auction.grids[agent].size();
    const std::size_t opp = detail::opponent_profile_count(auction, agent);

    std::vector<std::pair<Rational, Rational>> outcome_values;
    std::vector<std::vector<std::size_t>> phi(own, std::vector<std::size_t>(opp, 0));
    for (std::size_t theta = 0; theta < own; ++theta) {
        for (std::size_t s = 0; s < opp; ++s) {
            const std::pair<Rational, Rational> key{auction.q[agent][theta][s],
                                                    auction.p[agent][theta][s]};
            std::size_t id = 0;
            for (; id < outcome_values.size(); ++id)
                if (outcome_values[id] == key) break;
            if (id == outcome_values.size()) outcome_values.push_back(key);
            phi[theta][s] = id;
        }
    }

    std::vector<std::string> labels;
    std::vector<Mat> u(outcome_values.size()), u2(outcome_values.size());
    for (std::size_t k = 0; k < outcome_values.size(); ++k) {
        labels.push_back("q=" + to_string(outcome_values[k].first) +
                         ",p=" + to_string(outcome_values[k].second));
        u[k].assign(own, Vec(opp, Rational(0)));
        u2[k].assign(own, Vec(opp, Rational(0)));
        for (std::size_t t = 0; t < own; ++t) {
            for (std::size_t s = 0; s < opp; ++s) {
                u[k][t][s] = auction.v[agent][t][s] * outcome_values[k].first -
                             outcome_values[k].second;
                u2[k][t][s] = auction.dv[agent][t][s] * outcome_values[k].first;
            }
        }
    }

    StateSpace opp_states;
    for (std::size_t s = 0; s < opp; ++s) opp_states.labels.push_back("opp" + std::to_string(s));
    return make_general(auction.grids[agent], std::move(opp_states), std::move(labels),
                        std::move(phi), std::move(u), std::move(u2));
}

}  // namespace rmd
