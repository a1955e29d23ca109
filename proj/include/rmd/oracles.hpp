#pragma once

#include "rmd/beliefs.hpp"
#include "rmd/extraction.hpp"
#include "rmd/vertex_enum.hpp"

#include <optional>
#include <vector>

namespace rmd {

// Budgets for the deliberately slow reference implementations.
struct OracleBudget {
    std::size_t max_types = 3;
    std::size_t max_states = 3;
    std::size_t mu_resolution = 64;
};

struct BruteWorstCase {
    Rational min_value;
    Rational max_value;
    Vec argmin;
    Vec argmax;
};

// Extrema of pi . w by direct evaluation at every enumerated vertex; a linear
// objective on a polytope peaks at a vertex, so this is exact.
inline BruteWorstCase brute_worst_case(const BeliefPolytope& p, const Vec& w) {
    if (w.size() != p.states) throw InputError("direction arity mismatch");
    const Mat vertices = polytope_vertices(p);
    if (vertices.empty()) throw std::logic_error("belief polytope without vertices");
    BruteWorstCase out{dot(vertices[0], w), dot(vertices[0], w), vertices[0], vertices[0]};
    for (const auto& v : vertices) {
        const Rational val = dot(v, w);
        if (val < out.min_value) {
            out.min_value = val;
            out.argmin = v;
        }
        if (val > out.max_value) {
            out.max_value = val;
            out.argmax = v;
        }
    }
    return out;
}

// Reference solution of the transfer-perturbation program: every robust
// constraint is expanded over the vertices of the relevant belief set, giving
// a plain LP in (c, z) with one row per vertex. No multiplier certificates
// are involved, so this path is independent of the production dualization.
inline Rational brute_vse(const ExtractionInstance& inst,
                          const OracleBudget& budget = OracleBudget{}) {
    const std::size_t n = inst.types(), m = inst.states;
    if (n > budget.max_types)
        throw CapabilityError("reference program limited to " + std::to_string(budget.max_types) +
                              " types");
    if (m > budget.max_states)
        throw CapabilityError("reference program limited to " + std::to_string(budget.max_states) +
                              " states");

    std::vector<Mat> verts(n);
    for (std::size_t t = 0; t < n; ++t) verts[t] = polytope_vertices(inst.beliefs[t]);

    const std::size_t cv = 0;
    const auto zvar = [m](std::size_t t, std::size_t s) { return 1 + t * m + s; };
    Vec objective(1 + n * m, Rational(0));
    objective[cv] = 1;
    LpProblem lp = LpProblem::minimize(std::move(objective));

    for (std::size_t t = 0; t < n; ++t) {
        for (const auto& pi : verts[t]) {
            // Worst-case payment cap: pi . z(t) <= c at every vertex.
            Vec row(1 + n * m, Rational(0));
            for (std::size_t s = 0; s < m; ++s) row[zvar(t, s)] = pi[s];
            row[cv] = -1;
            lp.add_le(std::move(row), Rational(0));
            // Deviation floor: v(t) - v(o) - pi . z(o) <= c at every vertex.
            for (std::size_t o = 0; o < n; ++o) {
                Vec r(1 + n * m, Rational(0));
                for (std::size_t s = 0; s < m; ++s) r[zvar(o, s)] = -pi[s];
                r[cv] = -1;
                lp.add_le(std::move(r), inst.values[o] - inst.values[t]);
            }
        }
    }

    LpSolution sol = solve_lp(lp);
    if (!sol.optimal()) throw std::logic_error("reference program must be solvable");
    return sol.value;
}

struct BrutePiViolation {
    std::size_t anchor = 0;
    Vec mu;
    Mat selections;
    Vec mixture;
};

// One-sided grid search for an independence violation: mixing weights run
// over the mu grid at the given resolution, selections over belief-set
// vertices; membership of the mixture is checked by direct arithmetic. A
// hit certifies failure; silence proves nothing.
inline std::optional<BrutePiViolation> brute_pi(const ExtractionInstance& inst,
                                                const OracleBudget& budget = OracleBudget{}) {
    const std::size_t n = inst.types(), m = inst.states;
    if (n > budget.max_types)
        throw CapabilityError("reference search limited to " + std::to_string(budget.max_types) +
                              " types");
    if (m > budget.max_states)
        throw CapabilityError("reference search limited to " + std::to_string(budget.max_states) +
                              " states");
    const std::size_t R = budget.mu_resolution;

    std::vector<Mat> verts(n);
    for (std::size_t t = 0; t < n; ++t) verts[t] = polytope_vertices(inst.beliefs[t]);

    // Enumerate compositions of R into n nonnegative parts.
    std::vector<std::size_t> parts(n, 0);
    std::optional<BrutePiViolation> found;

    std::vector<std::size_t> pick(n, 0);
    const auto try_mu = [&](const std::vector<std::size_t>& counts) {
        Vec mu(n);
        for (std::size_t t = 0; t < n; ++t) mu[t] = make_rational(counts[t], R);
        // Walk every vertex selection for the active types.
        std::vector<std::size_t> active;
        for (std::size_t t = 0; t < n; ++t)
            if (counts[t] > 0) active.push_back(t);
        const auto descend = [&](auto&& self, std::size_t d) -> bool {
            if (d == active.size()) {
                Vec mixture(m, Rational(0));
                for (std::size_t t : active)
                    for (std::size_t s = 0; s < m; ++s)
                        mixture[s] += mu[t] * verts[t][pick[t]][s];
                for (std::size_t anchor = 0; anchor < n; ++anchor) {
                    if (counts[anchor] == R) continue;  // degenerate representation
                    if (!contains(inst.beliefs[anchor], mixture)) continue;
                    BrutePiViolation v;
                    v.anchor = anchor;
                    v.mu = mu;
                    v.selections.assign(n, Vec(m, Rational(0)));
                    for (std::size_t t : active) v.selections[t] = verts[t][pick[t]];
                    v.mixture = std::move(mixture);
                    found = std::move(v);
                    return true;
                }
                return false;
            }
            const std::size_t t = active[d];
            for (pick[t] = 0; pick[t] < verts[t].size(); ++pick[t])
                if (self(self, d + 1)) return true;
            return false;
        };
        return descend(descend, 0);
    };

    const auto compose = [&](auto&& self, std::size_t t, std::size_t left) -> bool {
        if (t + 1 == n) {
            parts[t] = left;
            return try_mu(parts);
        }
        for (std::size_t k = 0; k <= left; ++k) {
            parts[t] = k;
            if (self(self, t + 1, left - k)) return true;
        }
        return false;
    };
    compose(compose, 0, R);
    return found;
}

}  // namespace rmd
