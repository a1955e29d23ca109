#pragma once

// Shared hand-verified fixtures: a split-belief posted-price mechanism, a
// discretized second-price auction with envelope-exact payments, a
// discretized first-price auction, and small screening instances.

#include "rmd/beliefs.hpp"
#include "rmd/envelope.hpp"
#include "rmd/extraction.hpp"
#include "rmd/models.hpp"

#include <initializer_list>

namespace rmdtest {

inline rmd::Rational rat(const char* s) { return rmd::parse_rational(s); }

inline rmd::Vec vec(std::initializer_list<const char*> xs) {
    rmd::Vec v;
    for (const char* x : xs) v.push_back(rmd::parse_rational(x));
    return v;
}

// Constant allocation q = 1 with a payment discount c for low reports in
// state 1 and a penalty in state 2; low types believe state 2 is likely,
// high types believe state 1 is likely, with disjoint contamination sets.
inline rmd::QuasilinearModel split_market_model() {
    using namespace rmd;
    TypeGrid grid = make_grid(vec({"0", "1/4", "1/2", "3/4", "1"}));
    StateSpace states{{"1", "2"}};
    Mat q(5, Vec(2, Rational(1)));
    Mat p;
    for (int i = 0; i < 3; ++i) p.push_back(vec({"1/2", "-1"}));
    for (int i = 0; i < 2; ++i) p.push_back(vec({"0", "0"}));
    return make_quasilinear(std::move(grid), std::move(states), std::move(q), std::move(p));
}

inline rmd::BeliefMap split_market_beliefs() {
    using namespace rmd;
    const auto low = make_contamination({vec({"0", "1"}), rat("1/6")});
    const auto high = make_contamination({vec({"1", "0"}), rat("1/6")});
    return BeliefMap{low, low, low, high, high};
}

// Two-bidder private-value auction on the grid {0, 1/2, 1} with tie-split
// shares. Payments follow the threshold/envelope formula
// p(t,s) = t q(t,s) - Trapezoid(q(.,s), 0..t), making the grid envelope
// identity exact with zero rent at the bottom type.
inline rmd::AuctionModel second_price_auction() {
    using namespace rmd;
    std::vector<TypeGrid> grids{make_grid(vec({"0", "1/2", "1"})),
                                make_grid(vec({"0", "1/2", "1"}))};
    Mat v(3, Vec(3)), dv(3, Vec(3, Rational(1))), q(3, Vec(3)), p(3, Vec(3));
    for (std::size_t t = 0; t < 3; ++t)
        for (std::size_t s = 0; s < 3; ++s) v[t][s] = grids[0][t];
    for (std::size_t t = 0; t < 3; ++t) {
        for (std::size_t s = 0; s < 3; ++s) {
            if (t > s) q[t][s] = 1;
            else if (t == s) q[t][s] = rat("1/2");
            else q[t][s] = 0;
        }
    }
    // Columns are opponent types; rows own reports.
    p[0] = vec({"0", "0", "0"});
    p[1] = vec({"1/8", "1/8", "0"});
    p[2] = vec({"1/8", "1/2", "3/8"});
    return make_auction(grids, {v, v}, {dv, dv}, {q, q}, {p, p});
}

// Same allocation, but winners with a positive share pay their full bid
// b(t) = t/2.
inline rmd::AuctionModel first_price_auction() {
    using namespace rmd;
    AuctionModel base = second_price_auction();
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t t = 0; t < 3; ++t) {
            for (std::size_t s = 0; s < 3; ++s) {
                base.p[i][t][s] =
                    base.q[i][t][s] > 0 ? base.grids[i][t] / 2 : Rational(0);
            }
        }
    }
    return base;
}

// Per-agent belief maps: contamination around the uniform opponent-type
// distribution, one set per own type.
inline std::vector<rmd::BeliefMap> auction_uniform_beliefs(const rmd::Rational& eps) {
    using namespace rmd;
    const auto set = make_contamination({vec({"1/3", "1/3", "1/3"}), eps});
    return {BeliefMap{set, set, set}, BeliefMap{set, set, set}};
}

// Three types with distinct point beliefs in general position, values 0,1,2.
inline rmd::ExtractionInstance correlated_point_instance() {
    using namespace rmd;
    BeliefMap beliefs{
        make_contamination({vec({"2/3", "1/6", "1/6"}), Rational(0)}),
        make_contamination({vec({"1/6", "2/3", "1/6"}), Rational(0)}),
        make_contamination({vec({"1/6", "1/6", "2/3"}), Rational(0)}),
    };
    return make_extraction_instance(vec({"0", "1", "2"}), std::move(beliefs));
}

// Two types, both maximally ambiguous over two states, values 0 and 1.
inline rmd::ExtractionInstance common_ambiguity_instance() {
    using namespace rmd;
    BeliefMap beliefs{full_simplex(2), full_simplex(2)};
    return make_extraction_instance(vec({"0", "1"}), std::move(beliefs));
}

// Two types with contaminated Dirac beliefs at opposite corners.
inline rmd::ExtractionInstance contaminated_corners_instance(const rmd::Rational& eps) {
    using namespace rmd;
    BeliefMap beliefs{make_contamination({vec({"1", "0"}), eps}),
                      make_contamination({vec({"0", "1"}), eps})};
    return make_extraction_instance(vec({"0", "1"}), std::move(beliefs));
}

// Re-verifies a reported mixture violation by direct substitution: weights
// form a distribution, every active selection lies in its type's belief set,
// the mixture matches the weighted sum, and it lands in the anchor's set.
inline bool verify_pi_violation(const rmd::ExtractionInstance& inst,
                                const rmd::PiViolation& v) {
    using namespace rmd;
    if (v.anchor >= inst.types() || v.mu.size() != inst.types()) return false;
    Rational mass(0);
    Vec mixture(inst.states, Rational(0));
    for (std::size_t t = 0; t < inst.types(); ++t) {
        if (v.mu[t] < 0) return false;
        mass += v.mu[t];
        if (is_zero(v.mu[t])) continue;
        if (!contains(inst.beliefs[t], v.selections[t])) return false;
        for (std::size_t s = 0; s < inst.states; ++s)
            mixture[s] += v.mu[t] * v.selections[t][s];
    }
    if (mass != 1) return false;
    if (v.mu[v.anchor] == 1) return false;  // the degenerate representation
    if (mixture != v.mixture) return false;
    return contains(inst.beliefs[v.anchor], mixture);
}

}  // namespace rmdtest
