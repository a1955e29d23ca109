#pragma once

#include "rmd/rational.hpp"

#include <cstddef>
#include <optional>

namespace rmd {

// Reduced row echelon form, in place. Returns the pivot column per pivot row.
inline std::vector<std::size_t> rref(Mat& m) {
    std::vector<std::size_t> pivot_cols;
    if (m.empty()) return pivot_cols;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[r], m[pivot]);
        const Rational inv = m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] /= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            const Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivot_cols.push_back(c);
        ++r;
    }
    return pivot_cols;
}

inline std::size_t rank(Mat m) { return rref(m).size(); }

// Unique solution of a (possibly overdetermined) consistent system, or
// nullopt when the system is singular or inconsistent.
inline std::optional<Vec> solve_unique(const Mat& a, const Vec& b) {
    if (a.size() != b.size()) throw std::logic_error("solve_unique: size mismatch");
    if (a.empty()) return Vec{};
    const std::size_t cols = a[0].size();
    Mat aug(a.size(), Vec(cols + 1));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
        aug[i][cols] = b[i];
    }
    const auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;  // inconsistent
    if (pivots.size() != cols) return std::nullopt;                     // underdetermined
    Vec x(cols);
    for (std::size_t i = 0; i < cols; ++i) x[i] = aug[i][cols];
    return x;
}

// Basis (as rows) of {x : m x = 0}. Deterministic: free columns in order.
inline Mat null_space_basis(Mat m, std::size_t cols) {
    if (m.empty()) m.push_back(Vec(cols, Rational(0)));
    const auto pivots = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    Mat basis;
    for (std::size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        Vec v(cols, Rational(0));
        v[free_col] = 1;
        for (std::size_t pr = 0; pr < pivots.size(); ++pr)
            v[pivots[pr]] = -m[pr][free_col];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Affine rank = rank of differences against the first point.
// affine dimension = affine_rank; a single point has affine rank 0.
inline std::size_t affine_rank(const Mat& points) {
    if (points.size() <= 1) return 0;
    Mat diffs;
    diffs.reserve(points.size() - 1);
    for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(sub(points[i], points[0]));
    return rank(std::move(diffs));
}

}  // namespace rmd
