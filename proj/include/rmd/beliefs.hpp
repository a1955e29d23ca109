#pragma once

#include "rmd/linalg.hpp"
#include "rmd/lp.hpp"
#include "rmd/rational.hpp"
#include "rmd/vertex_enum.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace rmd {

// Closed convex belief set over a finite state space, stored as extra
// H-rep rows {pi : a pi <= b} on top of the implicit probability simplex
// (sum pi = 1, pi >= 0). Instances are nonempty by construction.
struct BeliefPolytope {
    std::size_t states = 0;
    Mat a;
    Vec b;
    bool from_hull = false;  // built by convexifying a point list

    std::size_t rows() const { return a.size(); }
};

struct ContaminationSpec {
    Vec reference;
    Rational epsilon;
};

using BeliefMap = std::vector<BeliefPolytope>;

inline void validate_distribution(const Vec& pi, const std::string& what) {
    for (const auto& v : pi)
        if (v < 0) throw InputError(what + ": negative probability");
    if (sum(pi) != 1) throw InputError(what + ": probabilities do not sum to 1");
}

namespace detail {

inline LpProblem polytope_lp(const BeliefPolytope& p, Vec objective, Sense sense) {
    LpProblem lp(p.states);
    lp.sense = sense;
    lp.objective = std::move(objective);
    for (std::size_t i = 0; i < p.rows(); ++i) lp.add_le(p.a[i], p.b[i]);
    Vec ones(p.states, Rational(1));
    lp.add_eq(ones, 1);
    for (std::size_t j = 0; j < p.states; ++j) lp.set_lower(j, Rational(0));
    return lp;
}

}  // namespace detail

// Nullopt when the rows cut the simplex down to nothing.
inline std::optional<BeliefPolytope> try_make_polytope(std::size_t states, Mat a, Vec b) {
    if (states == 0) throw InputError("belief polytope needs at least one state");
    if (a.size() != b.size()) throw InputError("belief polytope: row/rhs mismatch");
    for (const auto& row : a)
        if (row.size() != states) throw InputError("belief polytope: row arity mismatch");
    BeliefPolytope p{states, std::move(a), std::move(b), false};
    const auto probe = solve_lp(detail::polytope_lp(p, Vec(states, Rational(0)), Sense::minimize));
    if (probe.status != LpStatus::optimal) return std::nullopt;
    return p;
}

inline BeliefPolytope make_polytope(std::size_t states, Mat a, Vec b) {
    auto p = try_make_polytope(states, std::move(a), std::move(b));
    if (!p) throw InputError("belief polytope is empty");
    return *p;
}

inline BeliefPolytope full_simplex(std::size_t states) {
    return make_polytope(states, {}, {});
}

// Epsilon-contamination around a reference belief: mixtures
// (1-eps) ref + eps q over all q in the simplex, i.e. the rows
// pi_s >= (1-eps) ref_s per state.
inline BeliefPolytope make_contamination(const ContaminationSpec& spec) {
    validate_distribution(spec.reference, "contamination reference");
    if (spec.epsilon < 0 || spec.epsilon > 1) throw InputError("contamination epsilon outside [0,1]");
    const std::size_t m = spec.reference.size();
    Mat a;
    Vec b;
    const Rational keep = Rational(1) - spec.epsilon;
    for (std::size_t s = 0; s < m; ++s) {
        Vec row(m, Rational(0));
        row[s] = -1;
        a.push_back(std::move(row));
        b.push_back(-keep * spec.reference[s]);
    }
    return make_polytope(m, std::move(a), std::move(b));
}

struct SupportResult {
    Rational value;
    Vec arg;  // an optimal belief, vertex-deterministic
};

// Exact support function extrema over the polytope. Always attained:
// the set is a nonempty compact subset of the simplex.
inline SupportResult support_max(const BeliefPolytope& p, Vec direction) {
    const auto s = solve_lp(detail::polytope_lp(p, std::move(direction), Sense::maximize));
    if (s.status != LpStatus::optimal) throw std::logic_error("support_max on empty polytope");
    return {s.value, s.primal};
}

inline SupportResult support_min(const BeliefPolytope& p, Vec direction) {
    const auto s = solve_lp(detail::polytope_lp(p, std::move(direction), Sense::minimize));
    if (s.status != LpStatus::optimal) throw std::logic_error("support_min on empty polytope");
    return {s.value, s.primal};
}

inline bool contains(const BeliefPolytope& p, const Vec& pi) {
    if (pi.size() != p.states) return false;
    for (const auto& v : pi)
        if (v < 0) return false;
    if (sum(pi) != 1) return false;
    for (std::size_t i = 0; i < p.rows(); ++i)
        if (dot(p.a[i], pi) > p.b[i]) return false;
    return true;
}

inline std::optional<BeliefPolytope> intersect(const BeliefPolytope& p, const BeliefPolytope& q) {
    if (p.states != q.states) throw InputError("intersect: state spaces differ");
    Mat a = p.a;
    Vec b = p.b;
    a.insert(a.end(), q.a.begin(), q.a.end());
    b.insert(b.end(), q.b.begin(), q.b.end());
    return try_make_polytope(p.states, std::move(a), std::move(b));
}

// Guarded geometric realization, for oracles and diagnostics.
inline Mat polytope_vertices(const BeliefPolytope& p) {
    Mat ineq = p.a;
    Vec rhs = p.b;
    for (std::size_t s = 0; s < p.states; ++s) {
        Vec row(p.states, Rational(0));
        row[s] = -1;
        ineq.push_back(std::move(row));
        rhs.push_back(Rational(0));
    }
    Mat eq{Vec(p.states, Rational(1))};
    Vec eqb{Rational(1)};
    return enumerate_vertices(ineq, rhs, eq, eqb);
}

struct DimensionReport {
    bool full = false;
    std::size_t affine_dim = 0;
    // full: states-many affinely independent member beliefs.
    Mat independent_points;
    // not full: nonzero direction g with pi . g == 0 across the set,
    // normalized to a primitive integer vector.
    Vec flat_direction;
};

// Affine dimension by greedy point growth: walk support extrema along
// directions orthogonal to the affine span found so far until nothing
// varies. Full dimension means affine dimension states-1, the finite-state
// reading of "only g = 0 has zero expectation everywhere".
inline DimensionReport has_full_dimension(const BeliefPolytope& p) {
    const std::size_t m = p.states;
    DimensionReport report;
    Mat pts{support_min(p, Vec(m, Rational(0))).arg};
    for (;;) {
        Mat diffs;
        for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
        const Mat normals = null_space_basis(diffs, m);
        bool grew = false;
        for (const auto& h : normals) {
            const Rational base = dot(h, pts[0]);
            const auto hi = support_max(p, h);
            if (hi.value != base) {
                pts.push_back(hi.arg);
                grew = true;
                break;
            }
            const auto lo = support_min(p, h);
            if (lo.value != base) {
                pts.push_back(lo.arg);
                grew = true;
                break;
            }
        }
        if (!grew) break;
    }
    report.affine_dim = pts.size() - 1;
    report.full = report.affine_dim == m - 1;
    if (report.full) {
        report.independent_points = std::move(pts);
        return report;
    }
    Mat diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
    const Mat normals = null_space_basis(diffs, m);
    const Vec ones(m, Rational(1));
    for (const auto& h : normals) {
        // pi . h is constant on the set; recenter so the constant is zero.
        Vec g = sub(h, scale(ones, dot(h, pts[0])));
        if (!is_zero(g)) {
            report.flat_direction = primitive_direction(g);
            break;
        }
    }
    report.independent_points = std::move(pts);
    return report;
}

// Exact nesting test for epsilon-contamination pairs on m >= 2 states:
// inner is a subset of outer iff the retained mass dominates statewise,
// (1-eps_in) ref_in_s >= (1-eps_out) ref_out_s for every s.
inline bool contamination_nested(const ContaminationSpec& inner, const ContaminationSpec& outer) {
    if (inner.reference.size() != outer.reference.size())
        throw InputError("contamination_nested: state spaces differ");
    if (inner.reference.size() < 2)
        throw InputError("contamination_nested needs at least two states");
    validate_distribution(inner.reference, "inner reference");
    validate_distribution(outer.reference, "outer reference");
    const Rational keep_in = Rational(1) - inner.epsilon;
    const Rational keep_out = Rational(1) - outer.epsilon;
    for (std::size_t s = 0; s < inner.reference.size(); ++s)
        if (keep_in * inner.reference[s] < keep_out * outer.reference[s]) return false;
    return true;
}

// Canonical irredundant row form modulo the simplex: LP-redundant rows are
// dropped, each survivor is shifted so its smallest coefficient is zero
// (using sum pi = 1), scaled to primitive integers, then rows are sorted.
// Equal canonical forms certify equal belief sets.
inline Mat canonical_rows(const BeliefPolytope& p) {
    const std::size_t m = p.states;
    std::vector<bool> alive(p.rows(), true);
    for (std::size_t k = 0; k < p.rows(); ++k) {
        LpProblem lp(m);
        lp.sense = Sense::maximize;
        lp.objective = p.a[k];
        for (std::size_t i = 0; i < p.rows(); ++i)
            if (alive[i] && i != k) lp.add_le(p.a[i], p.b[i]);
        lp.add_eq(Vec(m, Rational(1)), 1);
        for (std::size_t j = 0; j < m; ++j) lp.set_lower(j, Rational(0));
        const auto s = solve_lp(lp);
        if (s.status == LpStatus::optimal && s.value <= p.b[k]) alive[k] = false;
    }
    Mat rows;
    for (std::size_t k = 0; k < p.rows(); ++k) {
        if (!alive[k]) continue;
        Rational shift = p.a[k][0];
        for (const auto& c : p.a[k]) shift = std::min(shift, c);
        Vec row(m + 1);
        for (std::size_t j = 0; j < m; ++j) row[j] = p.a[k][j] - shift;
        row[m] = p.b[k] - shift;
        row = primitive_direction(row);
        bool trivial = true;
        for (std::size_t j = 0; j < m; ++j)
            if (row[j] != 0) trivial = false;
        if (!trivial) rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), lex_less);
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

inline bool same_belief_set(const BeliefPolytope& p, const BeliefPolytope& q) {
    if (p.states != q.states) return false;
    return canonical_rows(p) == canonical_rows(q);
}

// Convex hull of finitely many beliefs, as an H-rep polytope. Facets within
// the hull's affine span are found by brute force over point subsets; the
// span itself is pinned with equality row pairs. Guarded like vertex
// enumeration. The result records hull provenance.
inline BeliefPolytope from_vertices(const Mat& points) {
    if (points.empty()) throw InputError("from_vertices: no points");
    const std::size_t m = points[0].size();
    if (m > kMaxEnumerationDim)
        throw CapabilityError("hull construction limited to dimension " +
                              std::to_string(kMaxEnumerationDim));
    if (points.size() > 16) throw CapabilityError("hull construction limited to 16 points");
    for (const auto& pt : points) {
        if (pt.size() != m) throw InputError("from_vertices: mixed dimensions");
        validate_distribution(pt, "hull point");
    }

    Mat a;
    Vec b;
    Mat diffs;
    for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(sub(points[i], points[0]));
    const std::size_t r = diffs.empty() ? 0 : rank(diffs);

    // Affine span: every orthogonal direction (other than the simplex
    // normal) becomes an equality, written as two inequality rows.
    const Vec ones(m, Rational(1));
    for (const auto& h : null_space_basis(diffs, m)) {
        Vec g = sub(h, scale(ones, dot(h, points[0])));
        if (is_zero(g)) continue;  // simplex normal direction
        g = primitive_direction(g);
        a.push_back(g);
        b.push_back(Rational(0));
        a.push_back(scale(g, Rational(-1)));
        b.push_back(Rational(0));
    }

    if (r >= 1) {
        // Facet candidates: subsets of r points spanning an (r-1)-flat.
        std::vector<std::size_t> idx(r);
        auto emit_candidate = [&](const std::vector<std::size_t>& subset) {
            Mat sub_diffs;
            for (std::size_t i = 1; i < subset.size(); ++i)
                sub_diffs.push_back(sub(points[subset[i]], points[subset[0]]));
            if (!sub_diffs.empty() && rank(sub_diffs) != r - 1) return;
            // Normal: orthogonal to the subset's flat, inside the hull span.
            Mat sys = sub_diffs;
            for (const auto& h : null_space_basis(diffs, m)) sys.push_back(h);
            for (const auto& g : null_space_basis(sys, m)) {
                if (is_zero(g)) continue;
                const Rational c = dot(g, points[subset[0]]);
                bool all_le = true, all_ge = true;
                for (const auto& pt : points) {
                    const Rational v = dot(g, pt);
                    if (v > c) all_le = false;
                    if (v < c) all_ge = false;
                }
                if (all_le) {
                    a.push_back(g);
                    b.push_back(c);
                }
                if (all_ge) {
                    a.push_back(scale(g, Rational(-1)));
                    b.push_back(-c);
                }
            }
        };
        std::vector<std::size_t> subset;
        auto walk = [&](auto&& self, std::size_t start) -> void {
            if (subset.size() == r) {
                emit_candidate(subset);
                return;
            }
            for (std::size_t i = start; i < points.size(); ++i) {
                subset.push_back(i);
                self(self, i + 1);
                subset.pop_back();
            }
        };
        walk(walk, 0);
    }

    BeliefPolytope hull = make_polytope(m, std::move(a), std::move(b));
    // Compact the representation; correctness is unchanged.
    const Mat canon = canonical_rows(hull);
    Mat ca;
    Vec cb;
    for (const auto& row : canon) {
        ca.push_back(Vec(row.begin(), row.end() - 1));
        cb.push_back(row.back());
    }
    BeliefPolytope out = make_polytope(m, std::move(ca), std::move(cb));
    out.from_hull = true;
    return out;
}

struct OverlapEntry {
    std::vector<std::size_t> window;  // type indices feeding the intersection
    bool nonempty = false;
    bool full_dimension = false;
    std::size_t affine_dim = 0;
};

struct OverlapProfile {
    std::size_t window = 1;
    std::vector<OverlapEntry> entries;
    bool overlapping = false;        // every windowed intersection nonempty
    bool fully_overlapping = false;  // ... and full-dimensional
    bool common_belief = false;      // one belief consistent with every type
    bool independent = false;        // identical belief sets across types
    std::optional<Vec> common_point;
    std::optional<std::size_t> first_empty_window;
};

// Grid-window overlap structure: the finite analogue of checking a
// neighborhood of each type. window = 1 means adjacent types.
inline OverlapProfile overlap_profile(const BeliefMap& beliefs, std::size_t window = 1) {
    if (beliefs.empty()) throw InputError("overlap_profile: no types");
    if (window == 0) throw InputError("overlap_profile: window must be >= 1");
    const std::size_t n = beliefs.size();
    OverlapProfile profile;
    profile.window = window;
    profile.overlapping = true;
    profile.fully_overlapping = true;
    for (std::size_t i = 0; i < n; ++i) {
        OverlapEntry entry;
        const std::size_t lo = i >= window ? i - window : 0;
        const std::size_t hi = std::min(n - 1, i + window);
        std::optional<BeliefPolytope> inter = beliefs[lo];
        entry.window.push_back(lo);
        for (std::size_t j = lo + 1; j <= hi; ++j) {
            entry.window.push_back(j);
            if (inter) inter = intersect(*inter, beliefs[j]);
        }
        if (inter) {
            entry.nonempty = true;
            const auto dim = has_full_dimension(*inter);
            entry.full_dimension = dim.full;
            entry.affine_dim = dim.affine_dim;
        } else {
            profile.overlapping = false;
            if (!profile.first_empty_window) profile.first_empty_window = i;
        }
        profile.fully_overlapping = profile.fully_overlapping && entry.full_dimension;
        profile.entries.push_back(std::move(entry));
    }

    std::optional<BeliefPolytope> all = beliefs[0];
    for (std::size_t i = 1; i < n && all; ++i) all = intersect(*all, beliefs[i]);
    if (all) {
        profile.common_belief = true;
        profile.common_point = support_min(*all, Vec(all->states, Rational(0))).arg;
    }

    profile.independent = true;
    const Mat canon0 = canonical_rows(beliefs[0]);
    for (std::size_t i = 1; i < n && profile.independent; ++i)
        profile.independent = canonical_rows(beliefs[i]) == canon0;

    return profile;
}

}  // namespace rmd
