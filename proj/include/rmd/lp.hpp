#pragma once

#include "rmd/rational.hpp"

#include <cassert>
#include <cstddef>
#include <optional>

namespace rmd {

enum class Rel { le, eq, ge };
enum class Sense { minimize, maximize };
enum class LpStatus { optimal, infeasible, unbounded };

inline const char* to_cstring(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "?";
}

struct LpRow {
    Vec coeffs;
    Rel rel = Rel::le;
    Rational rhs;
};

// Exact LP. Bounds are optional per variable; unbounded variables are free.
struct LpProblem {
    Sense sense = Sense::minimize;
    Vec objective;
    std::vector<LpRow> rows;
    std::vector<std::optional<Rational>> lower;
    std::vector<std::optional<Rational>> upper;

    explicit LpProblem(std::size_t vars = 0)
        : objective(vars, Rational(0)), lower(vars), upper(vars) {}

    static LpProblem minimize(Vec obj) {
        LpProblem p(obj.size());
        p.objective = std::move(obj);
        p.sense = Sense::minimize;
        return p;
    }
    static LpProblem maximize(Vec obj) {
        LpProblem p(obj.size());
        p.objective = std::move(obj);
        p.sense = Sense::maximize;
        return p;
    }

    std::size_t vars() const { return objective.size(); }

    void add_row(Vec coeffs, Rel rel, Rational rhs) {
        if (coeffs.size() != vars()) throw std::logic_error("LpProblem: row arity mismatch");
        rows.push_back(LpRow{std::move(coeffs), rel, std::move(rhs)});
    }
    void add_le(Vec coeffs, Rational rhs) { add_row(std::move(coeffs), Rel::le, std::move(rhs)); }
    void add_ge(Vec coeffs, Rational rhs) { add_row(std::move(coeffs), Rel::ge, std::move(rhs)); }
    void add_eq(Vec coeffs, Rational rhs) { add_row(std::move(coeffs), Rel::eq, std::move(rhs)); }
    void set_lower(std::size_t var, Rational v) { lower.at(var) = std::move(v); }
    void set_upper(std::size_t var, Rational v) { upper.at(var) = std::move(v); }
};

// Duals follow the convention value == sum_i dual[i] * rhs[i] (+ bound duals
// against their bound values). minimize: dual <= 0 on <=-rows, >= 0 on
// >=-rows; maximize: mirrored. Equality rows are unrestricted.
struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Rational value;
    Vec primal;
    Vec dual;              // one multiplier per problem row
    Vec bound_dual_lower;  // one per variable, 0 where absent
    Vec bound_dual_upper;
    std::vector<std::size_t> basis;  // basic column ids of the internal standard form

    bool optimal() const { return status == LpStatus::optimal; }
};

namespace detail {

// Dense exact tableau over the standard form min c.w, A w = b, w >= 0,
// b >= 0. Bland's rule in both phases: entering = lowest-index column with
// negative reduced cost, leaving = among minimum-ratio rows the one whose
// basic variable has the lowest column index. Guarantees termination and a
// deterministic basis.
class SimplexTableau {
  public:
    SimplexTableau(Mat matrix, Vec rhs, std::size_t structural_cols)
        : m_(matrix.size()), structural_(structural_cols) {
        // Column layout: structural | artificial (one per row) | inverse block.
        total_ = structural_ + m_ + m_;
        tab_ = std::move(matrix);
        for (std::size_t i = 0; i < m_; ++i) {
            tab_[i].resize(total_, Rational(0));
            tab_[i][structural_ + i] = 1;        // artificial
            tab_[i][structural_ + m_ + i] = 1;   // inverse block
        }
        b_ = std::move(rhs);
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) basis_[i] = structural_ + i;
    }

    // Phase 1: minimize the sum of artificials. Returns true when feasible.
    bool run_phase1() {
        Vec cost(total_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i) cost[structural_ + i] = 1;
        rebuild_reduced_costs(cost);
        const bool bounded = iterate(cost, structural_ + m_);
        assert(bounded);
        (void)bounded;
        if (objective_value_ != 0) return false;
        evict_artificials();
        return true;
    }

    // Phase 2 over structural costs. Returns false on unboundedness.
    bool run_phase2(const Vec& structural_cost) {
        Vec cost(total_, Rational(0));
        for (std::size_t j = 0; j < structural_; ++j) cost[j] = structural_cost[j];
        rebuild_reduced_costs(cost);
        return iterate(cost, structural_);
    }

    const Vec& rhs() const { return b_; }
    const std::vector<std::size_t>& basis() const { return basis_; }
    std::size_t rows() const { return m_; }

    Rational primal_of_column(std::size_t col) const {
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] == col) return b_[i];
        return Rational(0);
    }

    // y_j = c_B . (B^-1 column j), the equality-row duals of the final basis.
    Vec duals(const Vec& structural_cost) const {
        Vec y(m_, Rational(0));
        for (std::size_t j = 0; j < m_; ++j) {
            Rational acc = 0;
            for (std::size_t i = 0; i < m_; ++i) {
                const std::size_t bc = basis_[i];
                if (bc < structural_) acc += structural_cost[bc] * tab_[i][structural_ + m_ + j];
            }
            y[j] = acc;
        }
        return y;
    }

  private:
    void rebuild_reduced_costs(const Vec& cost) {
        reduced_ = cost;
        objective_value_ = 0;
        for (std::size_t i = 0; i < m_; ++i) {
            const Rational cb = cost[basis_[i]];
            if (cb == 0) continue;
            objective_value_ += cb * b_[i];
            for (std::size_t j = 0; j < total_; ++j) reduced_[j] -= cb * tab_[i][j];
        }
    }

    // Entering columns are restricted to indices < entering_limit so phase 2
    // can bar artificials; the inverse block is never eligible.
    bool iterate(const Vec& cost, std::size_t entering_limit) {
        (void)cost;
        for (;;) {
            std::size_t enter = total_;
            for (std::size_t j = 0; j < entering_limit; ++j) {
                if (reduced_[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == total_) return true;
            std::size_t leave = m_;
            Rational best_ratio;
            for (std::size_t i = 0; i < m_; ++i) {
                if (tab_[i][enter] <= 0) continue;
                const Rational ratio = b_[i] / tab_[i][enter];
                if (leave == m_ || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m_) return false;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const Rational inv = tab_[row][col];
        for (std::size_t j = 0; j < total_; ++j) tab_[row][j] /= inv;
        b_[row] /= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row || tab_[i][col] == 0) continue;
            const Rational f = tab_[i][col];
            for (std::size_t j = 0; j < total_; ++j) tab_[i][j] -= f * tab_[row][j];
            b_[i] -= f * b_[row];
        }
        if (reduced_[col] != 0) {
            const Rational f = reduced_[col];
            for (std::size_t j = 0; j < total_; ++j) reduced_[j] -= f * tab_[row][j];
            objective_value_ += f * b_[row];
        }
        basis_[row] = col;
    }

    // Pivot basic artificials (all at zero after a feasible phase 1) out of
    // the basis where possible. A row whose structural part is entirely zero
    // is redundant; its artificial stays basic at zero and can never move.
    void evict_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < structural_ || basis_[i] >= structural_ + m_) continue;
            assert(b_[i] == 0);
            for (std::size_t j = 0; j < structural_; ++j) {
                if (tab_[i][j] != 0) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    std::size_t m_ = 0, structural_ = 0, total_ = 0;
    Mat tab_;
    Vec b_;
    Vec reduced_;
    Rational objective_value_;
    std::vector<std::size_t> basis_;
};

}  // namespace detail

// Deterministic exact solve. Bounds are materialized as trailing rows before
// solving, every variable is split x = x+ - x-, then two-phase simplex runs
// with Bland's rule. Identical input yields an identical solution object.
inline LpSolution solve_lp(const LpProblem& problem) {
    const std::size_t n = problem.vars();
    struct RowRef {
        Vec coeffs;
        Rel rel;
        Rational rhs;
        // Where the dual of this materialized row is reported.
        enum class Kind { user, lower_bound, upper_bound } kind;
        std::size_t index;
    };
    std::vector<RowRef> all_rows;
    all_rows.reserve(problem.rows.size() + 2 * n);
    for (std::size_t r = 0; r < problem.rows.size(); ++r)
        all_rows.push_back({problem.rows[r].coeffs, problem.rows[r].rel, problem.rows[r].rhs,
                            RowRef::Kind::user, r});
    for (std::size_t j = 0; j < n; ++j) {
        if (problem.lower[j]) {
            Vec e(n, Rational(0));
            e[j] = 1;
            all_rows.push_back({std::move(e), Rel::ge, *problem.lower[j], RowRef::Kind::lower_bound, j});
        }
        if (problem.upper[j]) {
            Vec e(n, Rational(0));
            e[j] = 1;
            all_rows.push_back({std::move(e), Rel::le, *problem.upper[j], RowRef::Kind::upper_bound, j});
        }
    }

    const bool maximize = problem.sense == Sense::maximize;
    const std::size_t m = all_rows.size();

    // Structural columns: x+ / x- pairs, then one slack or surplus per
    // inequality row.
    std::size_t extras = 0;
    for (const auto& row : all_rows)
        if (row.rel != Rel::eq) ++extras;
    const std::size_t structural = 2 * n + extras;

    Mat matrix(m, Vec(structural, Rational(0)));
    Vec rhs(m);
    std::vector<int> sigma(m, 1);
    std::size_t next_extra = 2 * n;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& row = all_rows[i];
        Rel rel = row.rel;
        Rational b = row.rhs;
        int flip = 1;
        if (b < 0) {
            flip = -1;
            b = -b;
            if (rel == Rel::le) rel = Rel::ge;
            else if (rel == Rel::ge) rel = Rel::le;
        }
        sigma[i] = flip;
        for (std::size_t j = 0; j < n; ++j) {
            const Rational c = row.coeffs[j] * flip;
            matrix[i][2 * j] = c;
            matrix[i][2 * j + 1] = -c;
        }
        rhs[i] = b;
        if (row.rel != Rel::eq) {
            matrix[i][next_extra] = (rel == Rel::le) ? Rational(1) : Rational(-1);
            ++next_extra;
        }
    }

    Vec cost(structural, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        const Rational c = maximize ? -problem.objective[j] : problem.objective[j];
        cost[2 * j] = c;
        cost[2 * j + 1] = -c;
    }

    detail::SimplexTableau tableau(std::move(matrix), std::move(rhs), structural);

    LpSolution out;
    if (!tableau.run_phase1()) {
        out.status = LpStatus::infeasible;
        return out;
    }
    if (!tableau.run_phase2(cost)) {
        out.status = LpStatus::unbounded;
        return out;
    }

    out.status = LpStatus::optimal;
    out.primal.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        out.primal[j] = tableau.primal_of_column(2 * j) - tableau.primal_of_column(2 * j + 1);
    out.value = dot(out.primal, problem.objective);

    const Vec y = tableau.duals(cost);
    out.dual.assign(problem.rows.size(), Rational(0));
    out.bound_dual_lower.assign(n, Rational(0));
    out.bound_dual_upper.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        Rational mu = y[i] * sigma[i];
        if (maximize) mu = -mu;
        switch (all_rows[i].kind) {
            case RowRef::Kind::user: out.dual[all_rows[i].index] = mu; break;
            case RowRef::Kind::lower_bound: out.bound_dual_lower[all_rows[i].index] = mu; break;
            case RowRef::Kind::upper_bound: out.bound_dual_upper[all_rows[i].index] = mu; break;
        }
    }
    out.basis = tableau.basis();
    return out;
}

}  // namespace rmd
