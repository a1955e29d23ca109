#pragma once

#include "rmd/linalg.hpp"
#include "rmd/rational.hpp"

#include <algorithm>
#include <cstddef>

namespace rmd {

// Enumeration guards: brute force over constraint subsets is exponential, so
// requests beyond this envelope raise CapabilityError instead of running for
// hours. Dimensions/rows cover every desk-scale instance in the test corpus.
inline constexpr std::size_t kMaxEnumerationDim = 8;
inline constexpr std::size_t kMaxEnumerationRows = 24;

// All vertices of {x : ineq_a x <= ineq_b, eq_a x = eq_b}, deduplicated and
// sorted lexicographically. Brute force: every subset of inequality rows that
// completes the equality system to full rank contributes a candidate basic
// solution, kept when it satisfies all inequalities.
inline Mat enumerate_vertices(const Mat& ineq_a, const Vec& ineq_b, const Mat& eq_a, const Vec& eq_b) {
    const std::size_t rows = ineq_a.size();
    if (rows != ineq_b.size() || eq_a.size() != eq_b.size())
        throw std::logic_error("enumerate_vertices: shape mismatch");
    const std::size_t dim = rows ? ineq_a[0].size() : (eq_a.empty() ? 0 : eq_a[0].size());
    if (dim > kMaxEnumerationDim)
        throw CapabilityError("vertex enumeration limited to dimension " +
                              std::to_string(kMaxEnumerationDim));
    if (rows + eq_a.size() > kMaxEnumerationRows)
        throw CapabilityError("vertex enumeration limited to " +
                              std::to_string(kMaxEnumerationRows) + " rows");
    if (dim == 0) return {};

    Mat eq_system = eq_a;
    Vec eq_rhs = eq_b;
    {
        // Reduce equalities once; inconsistent equalities mean an empty set.
        Mat aug(eq_a.size(), Vec(dim + 1));
        for (std::size_t i = 0; i < eq_a.size(); ++i) {
            for (std::size_t j = 0; j < dim; ++j) aug[i][j] = eq_a[i][j];
            aug[i][dim] = eq_b[i];
        }
        const auto pivots = rref(aug);
        if (!pivots.empty() && pivots.back() == dim) return {};
        eq_system.assign(pivots.size(), Vec(dim));
        eq_rhs.assign(pivots.size(), Rational(0));
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            for (std::size_t j = 0; j < dim; ++j) eq_system[i][j] = aug[i][j];
            eq_rhs[i] = aug[i][dim];
        }
    }
    const std::size_t base_rank = eq_system.size();
    if (base_rank > dim) return {};
    const std::size_t need = dim - base_rank;

    Mat vertices;
    auto satisfies_all = [&](const Vec& x) {
        for (std::size_t i = 0; i < rows; ++i)
            if (dot(ineq_a[i], x) > ineq_b[i]) return false;
        return true;
    };

    // Recursive subset walk with prefix rank pruning: a partial selection
    // whose rows are dependent on the running system cannot become a basis.
    std::vector<std::size_t> chosen;
    auto walk = [&](auto&& self, std::size_t start, const Mat& system, const Vec& system_rhs) -> void {
        if (chosen.size() == need) {
            const auto x = solve_unique(system, system_rhs);
            if (x && satisfies_all(*x)) vertices.push_back(*x);
            return;
        }
        for (std::size_t r = start; r < rows; ++r) {
            Mat next = system;
            next.push_back(ineq_a[r]);
            if (rank(next) != system.size() + 1) continue;
            Vec next_rhs = system_rhs;
            next_rhs.push_back(ineq_b[r]);
            chosen.push_back(r);
            self(self, r + 1, next, next_rhs);
            chosen.pop_back();
        }
    };
    if (need == 0) {
        const auto x = solve_unique(eq_system, eq_rhs);
        if (x && satisfies_all(*x)) vertices.push_back(*x);
    } else {
        walk(walk, 0, eq_system, eq_rhs);
    }

    std::sort(vertices.begin(), vertices.end(), lex_less);
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return vertices;
}

}  // namespace rmd
