#pragma once

// Seeded random instance generators shared by the property suite and the
// integration gate. Everything routes through rmdtest::Rng so a fixed seed
// reproduces the exact same instances on any platform.

#include "test_support.hpp"

#include "rmd/beliefs.hpp"
#include "rmd/extraction.hpp"
#include "rmd/models.hpp"

#include <cstddef>
#include <vector>

namespace rmdtest {

// Exact distribution over m states: nonnegative numerators normalized by
// their sum. Never the zero vector.
inline rmd::Vec random_distribution(Rng& rng, std::size_t m) {
    rmd::Vec pi(m);
    rmd::Rational total(0);
    while (total == 0) {
        total = 0;
        for (auto& x : pi) {
            x = rmd::Rational(rng.pick(0, 4));
            total += x;
        }
    }
    for (auto& x : pi) x /= total;
    return pi;
}

// Strictly increasing grid of n >= 2 points spanning [0, 1] with random
// interior spacing.
inline rmd::TypeGrid random_grid(Rng& rng, std::size_t n) {
    rmd::Vec points;
    rmd::Rational at(0);
    for (std::size_t t = 0; t < n; ++t) {
        points.push_back(at);
        at += rmd::make_rational(rng.pick(1, 3), rng.pick(1, 4));
    }
    const rmd::Rational span = points.back();
    for (auto& x : points) x /= span;
    return rmd::make_grid(std::move(points));
}

// One convex belief set over m states, drawn from the shapes the loader
// accepts: the full simplex, a contamination ball, or a small hull.
inline rmd::BeliefPolytope random_belief_set(Rng& rng, std::size_t m) {
    switch (rng.pick(0, 3)) {
        case 0:
            return rmd::full_simplex(m);
        case 1: {
            rmd::ContaminationSpec spec;
            spec.reference = random_distribution(rng, m);
            spec.epsilon = rmd::make_rational(rng.pick(0, 3), 4);
            return rmd::make_contamination(spec);
        }
        default: {
            const std::size_t k = static_cast<std::size_t>(rng.pick(1, 3));
            rmd::Mat points;
            for (std::size_t i = 0; i < k; ++i) points.push_back(random_distribution(rng, m));
            return rmd::from_vertices(points);
        }
    }
}

inline rmd::BeliefMap random_belief_map(Rng& rng, std::size_t n, std::size_t m) {
    rmd::BeliefMap map;
    for (std::size_t t = 0; t < n; ++t) map.push_back(random_belief_set(rng, m));
    return map;
}

// A point inside a belief set, found by optimizing a random direction.
inline rmd::Vec random_member(Rng& rng, const rmd::BeliefPolytope& set) {
    rmd::Vec direction(set.states);
    for (auto& d : direction) d = rmd::Rational(rng.pick(-3, 3));
    return rmd::support_min(set, std::move(direction)).arg;
}

// Allocation-and-payment mechanism with allocations in [0, 1] and small
// rational payments. Not incentive compatible by construction; the draws
// cover passing and failing instances alike.
inline rmd::QuasilinearModel random_quasilinear(Rng& rng, std::size_t n, std::size_t m) {
    rmd::TypeGrid grid = random_grid(rng, n);
    std::vector<std::string> labels;
    for (std::size_t s = 0; s < m; ++s) labels.push_back("s" + std::to_string(s));
    rmd::Mat q(n, rmd::Vec(m)), p(n, rmd::Vec(m));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t s = 0; s < m; ++s) {
            q[t][s] = rmd::make_rational(rng.pick(0, 4), 4);
            p[t][s] = rng.rational(-2, 2, 3);
        }
    return rmd::make_quasilinear(std::move(grid), rmd::StateSpace{std::move(labels)},
                                 std::move(q), std::move(p));
}

// Valuations plus one belief set per type. Values are strictly increasing so
// upward deviations are always tempting.
inline rmd::ExtractionInstance random_extraction(Rng& rng, std::size_t n, std::size_t m) {
    rmd::Vec values;
    rmd::Rational at(rng.pick(0, 2));
    for (std::size_t t = 0; t < n; ++t) {
        values.push_back(at);
        at += rmd::make_rational(rng.pick(1, 4), rng.pick(1, 3));
    }
    return rmd::make_extraction_instance(std::move(values), random_belief_map(rng, n, m));
}

// Message game with a random outcome rule and a random pure strategy.
inline rmd::IndirectMechanism random_indirect(Rng& rng, std::size_t n, std::size_t m,
                                              std::size_t outcomes, std::size_t messages) {
    rmd::TypeGrid grid = random_grid(rng, n);
    std::vector<std::string> state_labels, outcome_labels, message_labels;
    for (std::size_t s = 0; s < m; ++s) state_labels.push_back("s" + std::to_string(s));
    for (std::size_t k = 0; k < outcomes; ++k) outcome_labels.push_back("o" + std::to_string(k));
    for (std::size_t k = 0; k < messages; ++k) message_labels.push_back("m" + std::to_string(k));
    std::vector<std::vector<std::size_t>> gamma(messages, std::vector<std::size_t>(m));
    for (auto& row : gamma)
        for (auto& cell : row)
            cell = static_cast<std::size_t>(rng.pick(0, static_cast<long long>(outcomes - 1)));
    std::vector<std::size_t> strategy(n);
    for (auto& msg : strategy)
        msg = static_cast<std::size_t>(rng.pick(0, static_cast<long long>(messages - 1)));
    std::vector<rmd::Mat> u(outcomes, rmd::Mat(n, rmd::Vec(m))), u2 = u;
    for (std::size_t k = 0; k < outcomes; ++k)
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t s = 0; s < m; ++s) {
                u[k][t][s] = rng.rational(-2, 2, 2);
                u2[k][t][s] = rmd::make_rational(rng.pick(0, 2), 2);
            }
    return rmd::make_indirect(std::move(grid), rmd::StateSpace{std::move(state_labels)},
                              std::move(outcome_labels), std::move(message_labels),
                              std::move(gamma), std::move(strategy), std::move(u), std::move(u2));
}

}  // namespace rmdtest
