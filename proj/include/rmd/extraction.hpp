#pragma once

#include "rmd/beliefs.hpp"
#include "rmd/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rmd {

// One screening problem: a value per type and a belief set per type, all
// over the same state space.
struct ExtractionInstance {
    std::size_t states = 0;
    Vec values;
    BeliefMap beliefs;

    std::size_t types() const { return values.size(); }
};

inline ExtractionInstance make_extraction_instance(Vec values, BeliefMap beliefs) {
    if (values.empty()) throw InputError("extraction instance needs at least one type");
    if (beliefs.size() != values.size())
        throw InputError("extraction instance: one belief set per type required");
    const std::size_t m = beliefs.front().states;
    for (const auto& set : beliefs)
        if (set.states != m) throw InputError("extraction instance: state count mismatch");
    return ExtractionInstance{m, std::move(values), std::move(beliefs)};
}

// State-contingent payment vectors, one per type.
struct Menu {
    Mat contracts;
};

// ---------------------------------------------------------------------------
// Probabilistic independence: no belief of any anchor type may be reachable
// as a nontrivial mixture of selections from the types' belief sets. The
// bilinear mixture mu_t * pi(t) is linearized by x_t = mu_t * pi(t).

struct PiViolation {
    std::size_t anchor = 0;
    Vec mu;          // mixing weights over types
    Mat selections;  // selections[t] in the t-th belief set (zero row when mu[t]=0)
    Vec mixture;     // sum_t x_t, a member of the anchor's belief set
};

struct PiReport {
    bool pass = false;
    Vec anchor_scores;  // per anchor: largest feasible 1 - mu_anchor (0 = independent)
    std::optional<PiViolation> violation;
};

namespace detail {

struct PiAnchorResult {
    Rational score;
    std::optional<PiViolation> violation;
};

inline PiAnchorResult pi_anchor_probe(const ExtractionInstance& inst, std::size_t anchor) {
    const std::size_t n = inst.types(), m = inst.states;
    const auto xvar = [m](std::size_t t, std::size_t s) { return t * m + s; };
    const std::size_t mu0 = n * m;

    Vec objective(n * m + n, Rational(0));
    objective[mu0 + anchor] = 1;
    LpProblem lp = LpProblem::minimize(objective);
    for (std::size_t j = 0; j < n * m + n; ++j) lp.set_lower(j, Rational(0));

    for (std::size_t t = 0; t < n; ++t) {
        const auto& set = inst.beliefs[t];
        for (std::size_t k = 0; k < set.a.size(); ++k) {
            Vec row(n * m + n, Rational(0));
            for (std::size_t s = 0; s < m; ++s) row[xvar(t, s)] = set.a[k][s];
            row[mu0 + t] = -set.b[k];
            lp.add_le(std::move(row), Rational(0));
        }
        Vec mass(n * m + n, Rational(0));
        for (std::size_t s = 0; s < m; ++s) mass[xvar(t, s)] = 1;
        mass[mu0 + t] = -1;
        lp.add_eq(std::move(mass), Rational(0));
    }
    Vec total(n * m + n, Rational(0));
    for (std::size_t t = 0; t < n; ++t) total[mu0 + t] = 1;
    lp.add_eq(std::move(total), Rational(1));

    const auto& anchor_set = inst.beliefs[anchor];
    for (std::size_t k = 0; k < anchor_set.a.size(); ++k) {
        Vec row(n * m + n, Rational(0));
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t s = 0; s < m; ++s) row[xvar(t, s)] = anchor_set.a[k][s];
        lp.add_le(std::move(row), anchor_set.b[k]);
    }

    LpSolution sol = solve_lp(lp);
    if (!sol.optimal()) throw std::logic_error("independence probe should always be solvable");

    PiAnchorResult out{Rational(1) - sol.value, std::nullopt};
    if (out.score > 0) {
        PiViolation v;
        v.anchor = anchor;
        v.mu.assign(n, Rational(0));
        v.selections.assign(n, Vec(m, Rational(0)));
        v.mixture.assign(m, Rational(0));
        for (std::size_t t = 0; t < n; ++t) {
            v.mu[t] = sol.primal[mu0 + t];
            for (std::size_t s = 0; s < m; ++s) {
                const Rational& x = sol.primal[xvar(t, s)];
                v.mixture[s] += x;
                if (!is_zero(v.mu[t])) v.selections[t][s] = x / v.mu[t];
            }
        }
        out.violation = std::move(v);
    }
    return out;
}

}  // namespace detail

inline PiReport check_probabilistic_independence(const ExtractionInstance& inst) {
    const std::size_t n = inst.types();
    std::vector<detail::PiAnchorResult> results(n);
    parallel_for(n, [&](std::size_t anchor) { results[anchor] = detail::pi_anchor_probe(inst, anchor); });

    PiReport report;
    report.pass = true;
    for (std::size_t anchor = 0; anchor < n; ++anchor) {
        report.anchor_scores.push_back(results[anchor].score);
        if (!is_zero(results[anchor].score)) {
            report.pass = false;
            if (!report.violation) report.violation = std::move(results[anchor].violation);
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Convex independence: each type's belief set must be disjoint from the
// convex hull of the union of the others. Membership is probed by a
// homogenized feasibility LP; on disjointness a separating state vector is
// recovered from a box-normalized gap-maximization LP.

struct CiSeparator {
    Vec g;           // separating state vector, entries in [-1, 1]
    Rational alpha;  // max of g . pi over the type's own set
    Rational gap;    // min over the others' hull minus alpha, strictly positive
};

struct CiTypeReport {
    bool independent = false;
    std::optional<Vec> witness;  // a point in the forbidden intersection
    std::optional<CiSeparator> separator;
};

struct CiReport {
    bool pass = false;
    std::vector<CiTypeReport> per_type;
};

namespace detail {

// Is some point of the target set expressible as a convex combination of
// points drawn one from each other set? Returns such a point if so.
inline std::optional<Vec> hull_intersection_point(const ExtractionInstance& inst, std::size_t i) {
    const std::size_t n = inst.types(), m = inst.states;
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j)
        if (j != i) others.push_back(j);

    const std::size_t vars = others.size() * (m + 1);
    const auto xvar = [m](std::size_t jidx, std::size_t s) { return jidx * m + s; };
    const auto muvar = [&](std::size_t jidx) { return others.size() * m + jidx; };

    LpProblem lp = LpProblem::minimize(Vec(vars, Rational(0)));
    for (std::size_t v = 0; v < vars; ++v) lp.set_lower(v, Rational(0));

    for (std::size_t jidx = 0; jidx < others.size(); ++jidx) {
        const auto& set = inst.beliefs[others[jidx]];
        for (std::size_t k = 0; k < set.a.size(); ++k) {
            Vec row(vars, Rational(0));
            for (std::size_t s = 0; s < m; ++s) row[xvar(jidx, s)] = set.a[k][s];
            row[muvar(jidx)] = -set.b[k];
            lp.add_le(std::move(row), Rational(0));
        }
        Vec mass(vars, Rational(0));
        for (std::size_t s = 0; s < m; ++s) mass[xvar(jidx, s)] = 1;
        mass[muvar(jidx)] = -1;
        lp.add_eq(std::move(mass), Rational(0));
    }
    Vec total(vars, Rational(0));
    for (std::size_t jidx = 0; jidx < others.size(); ++jidx) total[muvar(jidx)] = 1;
    lp.add_eq(std::move(total), Rational(1));

    const auto& own = inst.beliefs[i];
    for (std::size_t k = 0; k < own.a.size(); ++k) {
        Vec row(vars, Rational(0));
        for (std::size_t jidx = 0; jidx < others.size(); ++jidx)
            for (std::size_t s = 0; s < m; ++s) row[xvar(jidx, s)] = own.a[k][s];
        lp.add_le(std::move(row), own.b[k]);
    }

    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) return std::nullopt;
    Vec point(m, Rational(0));
    for (std::size_t jidx = 0; jidx < others.size(); ++jidx)
        for (std::size_t s = 0; s < m; ++s) point[s] += sol.primal[xvar(jidx, s)];
    return point;
}

// Maximal separation margin between the type's own set and the others' hull,
// with the direction vector confined to the unit box. The robust sides are
// expressed through auxiliary multipliers so the whole search is one LP.
inline CiSeparator separate_from_hull(const ExtractionInstance& inst, std::size_t i) {
    const std::size_t n = inst.types(), m = inst.states;
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j)
        if (j != i) others.push_back(j);

    // Layout: g (m) | a | b | y0 | y (r_i) | per other j: w0_j | w_j (r_j).
    const std::size_t g0 = 0, av = m, bv = m + 1, y0v = m + 2, yv = m + 3;
    const std::size_t ri = inst.beliefs[i].a.size();
    std::size_t cursor = yv + ri;
    std::vector<std::size_t> w0v(others.size()), wv(others.size());
    for (std::size_t jidx = 0; jidx < others.size(); ++jidx) {
        w0v[jidx] = cursor++;
        wv[jidx] = cursor;
        cursor += inst.beliefs[others[jidx]].a.size();
    }
    const std::size_t vars = cursor;

    Vec objective(vars, Rational(0));
    objective[bv] = 1;
    objective[av] = -1;
    LpProblem lp = LpProblem::maximize(std::move(objective));
    for (std::size_t s = 0; s < m; ++s) {
        lp.set_lower(g0 + s, Rational(-1));
        lp.set_upper(g0 + s, Rational(1));
    }
    for (std::size_t k = 0; k < ri; ++k) lp.set_lower(yv + k, Rational(0));
    for (std::size_t jidx = 0; jidx < others.size(); ++jidx)
        for (std::size_t k = 0; k < inst.beliefs[others[jidx]].a.size(); ++k)
            lp.set_lower(wv[jidx] + k, Rational(0));

    // Own side: max over the type's set of g . pi is at most a.
    {
        const auto& set = inst.beliefs[i];
        Vec row(vars, Rational(0));
        row[y0v] = 1;
        for (std::size_t k = 0; k < ri; ++k) row[yv + k] = set.b[k];
        row[av] = -1;
        lp.add_le(std::move(row), Rational(0));
        for (std::size_t s = 0; s < m; ++s) {
            Vec r(vars, Rational(0));
            r[g0 + s] = 1;
            r[y0v] = -1;
            for (std::size_t k = 0; k < ri; ++k) r[yv + k] = -set.a[k][s];
            lp.add_le(std::move(r), Rational(0));
        }
    }
    // Other side: min over each other set of g . pi is at least b.
    for (std::size_t jidx = 0; jidx < others.size(); ++jidx) {
        const auto& set = inst.beliefs[others[jidx]];
        Vec row(vars, Rational(0));
        row[bv] = 1;
        row[w0v[jidx]] = -1;
        for (std::size_t k = 0; k < set.a.size(); ++k) row[wv[jidx] + k] = set.b[k];
        lp.add_le(std::move(row), Rational(0));
        for (std::size_t s = 0; s < m; ++s) {
            Vec r(vars, Rational(0));
            r[w0v[jidx]] = 1;
            for (std::size_t k = 0; k < set.a.size(); ++k) r[wv[jidx] + k] = -set.a[k][s];
            r[g0 + s] = -1;
            lp.add_le(std::move(r), Rational(0));
        }
    }

    LpSolution sol = solve_lp(lp);
    if (!sol.optimal() || sol.value <= 0)
        throw std::logic_error("separation failed on a disjoint instance");

    CiSeparator sep;
    sep.g.assign(sol.primal.begin() + g0, sol.primal.begin() + g0 + m);
    sep.alpha = support_max(inst.beliefs[i], sep.g).value;
    bool first = true;
    Rational hull_min(0);
    for (std::size_t j : others) {
        const Rational v = support_min(inst.beliefs[j], sep.g).value;
        if (first || v < hull_min) hull_min = v;
        first = false;
    }
    sep.gap = hull_min - sep.alpha;
    if (sep.gap <= 0) throw std::logic_error("separator recomputation lost the gap");
    return sep;
}

}  // namespace detail

inline CiReport check_convex_independence(const ExtractionInstance& inst) {
    const std::size_t n = inst.types();
    CiReport report;
    report.per_type.resize(n);
    if (n == 1) {
        report.pass = true;
        report.per_type[0].independent = true;
        return report;
    }
    parallel_for(n, [&](std::size_t i) {
        CiTypeReport& r = report.per_type[i];
        if (auto point = detail::hull_intersection_point(inst, i)) {
            r.independent = false;
            r.witness = std::move(point);
        } else {
            r.independent = true;
            r.separator = detail::separate_from_hull(inst, i);
        }
    });
    report.pass = true;
    for (const auto& r : report.per_type) report.pass = report.pass && r.independent;
    return report;
}

// ---------------------------------------------------------------------------
// Menu auditing.

enum class MenuMode { full, weak_full, virtual_eps, robust_ic, robust_ir };

inline const char* to_cstring(MenuMode mode) {
    switch (mode) {
        case MenuMode::full: return "full";
        case MenuMode::weak_full: return "weak_full";
        case MenuMode::virtual_eps: return "virtual";
        case MenuMode::robust_ic: return "robust_ic";
        case MenuMode::robust_ir: return "robust_ir";
    }
    return "?";
}

struct MenuFailure {
    std::string clause;                // which requirement broke
    std::size_t type = 0;              // whose requirement
    std::optional<std::size_t> other;  // deviation target if relevant
    Vec belief;                        // extremal belief witnessing the failure
    Rational amount;                   // offending value
};

struct MenuReport {
    MenuMode mode = MenuMode::weak_full;
    bool pass = false;
    Rational eps;                 // bound used by the virtual mode
    Vec own_surplus_min;          // per type: min over beliefs of v - pi . c(t)
    Vec own_surplus_max;          // per type: max over beliefs of v - pi . c(t)
    std::vector<MenuFailure> failures;
};

inline MenuReport check_menu(const ExtractionInstance& inst, const Menu& menu, MenuMode mode,
                             const Rational& eps = Rational(0)) {
    const std::size_t n = inst.types(), m = inst.states;
    if (menu.contracts.size() != n) throw InputError("menu must cover every instance type");
    for (const auto& c : menu.contracts)
        if (c.size() != m) throw InputError("menu contract has wrong state count");
    if (mode == MenuMode::virtual_eps && eps < 0) throw InputError("virtual bound must be nonnegative");

    MenuReport report;
    report.mode = mode;
    report.eps = eps;
    report.own_surplus_min.assign(n, Rational(0));
    report.own_surplus_max.assign(n, Rational(0));

    std::vector<SupportResult> own_min(n), own_max(n);
    for (std::size_t t = 0; t < n; ++t) {
        own_max[t] = support_min(inst.beliefs[t], menu.contracts[t]);  // best case for surplus
        own_min[t] = support_max(inst.beliefs[t], menu.contracts[t]);  // worst case for surplus
        report.own_surplus_max[t] = inst.values[t] - own_max[t].value;
        report.own_surplus_min[t] = inst.values[t] - own_min[t].value;
    }

    const bool need_ir = mode == MenuMode::full || mode == MenuMode::weak_full ||
                         mode == MenuMode::virtual_eps || mode == MenuMode::robust_ir;
    const bool need_zero_top = mode == MenuMode::full;
    const bool need_deviation_cap =
        mode == MenuMode::full || mode == MenuMode::weak_full || mode == MenuMode::virtual_eps;
    const Rational own_cap = mode == MenuMode::virtual_eps ? eps : Rational(0);
    const Rational dev_cap = mode == MenuMode::virtual_eps ? eps : Rational(0);

    for (std::size_t t = 0; t < n; ++t) {
        if (need_ir && report.own_surplus_min[t] < 0)
            report.failures.push_back(MenuFailure{"own surplus below zero", t, std::nullopt,
                                                  own_min[t].arg, report.own_surplus_min[t]});
        if ((need_zero_top || mode == MenuMode::virtual_eps) && report.own_surplus_max[t] > own_cap)
            report.failures.push_back(MenuFailure{"own surplus above bound", t, std::nullopt,
                                                  own_max[t].arg, report.own_surplus_max[t]});
    }

    if (need_deviation_cap) {
        for (std::size_t t = 0; t < n; ++t) {
            for (std::size_t o = 0; o < n; ++o) {
                if (o == t) continue;
                SupportResult r = support_min(inst.beliefs[t], menu.contracts[o]);
                const Rational best_deviation = inst.values[t] - r.value;
                if (best_deviation > dev_cap)
                    report.failures.push_back(MenuFailure{"deviation surplus above bound", t, o,
                                                          std::move(r.arg), best_deviation});
            }
        }
    }

    if (mode == MenuMode::robust_ic) {
        for (std::size_t t = 0; t < n; ++t) {
            for (std::size_t o = 0; o < n; ++o) {
                if (o == t) continue;
                Vec diff(m);
                for (std::size_t s = 0; s < m; ++s)
                    diff[s] = menu.contracts[o][s] - menu.contracts[t][s];
                SupportResult r = support_min(inst.beliefs[t], diff);
                if (r.value < 0)
                    report.failures.push_back(MenuFailure{"profitable contract swap", t, o,
                                                          std::move(r.arg), r.value});
            }
        }
    }

    report.pass = report.failures.empty();
    return report;
}

// ---------------------------------------------------------------------------
// Menu construction from separators: each type is charged its value plus a
// scaled copy of its separating vector, centered so the type's own worst-case
// surplus is exactly zero while every deviation overshoots.

inline Menu build_extraction_menu(const ExtractionInstance& inst) {
    const std::size_t n = inst.types(), m = inst.states;
    if (n == 1) {
        Menu menu{{Vec(m, inst.values[0])}};
        return menu;
    }
    const CiReport ci = check_convex_independence(inst);
    if (!ci.pass) {
        std::string who;
        for (std::size_t i = 0; i < n; ++i)
            if (!ci.per_type[i].independent) {
                who = std::to_string(i);
                break;
            }
        throw CapabilityError("extraction not guaranteed: belief set of type " + who +
                              " meets the convex hull of the others");
    }
    const Rational vmax = *std::max_element(inst.values.begin(), inst.values.end());
    const Rational vmin = *std::min_element(inst.values.begin(), inst.values.end());
    const Rational spread = vmax - vmin + 1;

    Menu menu;
    menu.contracts.assign(n, Vec(m, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        const CiSeparator& sep = *ci.per_type[i].separator;
        const Rational beta = spread / sep.gap;
        for (std::size_t s = 0; s < m; ++s)
            menu.contracts[i][s] = inst.values[i] + beta * (sep.g[s] - sep.alpha);
    }
    if (!check_menu(inst, menu, MenuMode::weak_full).pass)
        throw std::logic_error("constructed menu failed its own audit");
    return menu;
}

// ---------------------------------------------------------------------------
// Transfer-perturbation program: minimize the worst constraint violation c
// over state-contingent perturbations z(t). Every robust max/min constraint
// is replaced by its exact multiplier certificate, giving one LP. The row
// multipliers map back to weights (lambda per type, nu per ordered pair)
// with total mass one and a matching dual objective.

struct VseSolution {
    Rational p_star;
    Mat z;       // optimal perturbation per type
    Vec lambda;  // weights of the worst-case-payment constraints
    Mat nu;      // weights of the deviation constraints, nu[t][other]
    Rational multiplier_mass;   // sum of all weights; equals one
    Rational dual_objective;    // sum of nu[t][o] * (v(t) - v(o)); equals p_star
};

inline VseSolution solve_vse(const ExtractionInstance& inst) {
    const std::size_t n = inst.types(), m = inst.states;

    // Layout: c | z(t,s) | per type t: y0_t, y_t | per pair (t,o): w0, w.
    const std::size_t cv = 0;
    const auto zvar = [m](std::size_t t, std::size_t s) { return 1 + t * m + s; };
    std::size_t cursor = 1 + n * m;
    std::vector<std::size_t> y0v(n), yv(n);
    for (std::size_t t = 0; t < n; ++t) {
        y0v[t] = cursor++;
        yv[t] = cursor;
        cursor += inst.beliefs[t].a.size();
    }
    std::vector<std::vector<std::size_t>> w0v(n, std::vector<std::size_t>(n)),
        wv(n, std::vector<std::size_t>(n));
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t o = 0; o < n; ++o) {
            w0v[t][o] = cursor++;
            wv[t][o] = cursor;
            cursor += inst.beliefs[t].a.size();
        }
    }
    const std::size_t vars = cursor;

    Vec objective(vars, Rational(0));
    objective[cv] = 1;
    LpProblem lp = LpProblem::minimize(std::move(objective));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t k = 0; k < inst.beliefs[t].a.size(); ++k) lp.set_lower(yv[t] + k, Rational(0));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t o = 0; o < n; ++o)
            for (std::size_t k = 0; k < inst.beliefs[t].a.size(); ++k)
                lp.set_lower(wv[t][o] + k, Rational(0));

    std::vector<std::size_t> worst_row(n);       // certificate rows for max pi . z(t) <= c
    std::vector<std::vector<std::size_t>> dev_row(n, std::vector<std::size_t>(n));

    for (std::size_t t = 0; t < n; ++t) {
        const auto& set = inst.beliefs[t];
        Vec row(vars, Rational(0));
        row[y0v[t]] = 1;
        for (std::size_t k = 0; k < set.a.size(); ++k) row[yv[t] + k] = set.b[k];
        row[cv] = -1;
        worst_row[t] = lp.rows.size();
        lp.add_le(std::move(row), Rational(0));
        for (std::size_t s = 0; s < m; ++s) {
            Vec r(vars, Rational(0));
            r[zvar(t, s)] = 1;
            r[y0v[t]] = -1;
            for (std::size_t k = 0; k < set.a.size(); ++k) r[yv[t] + k] = -set.a[k][s];
            lp.add_le(std::move(r), Rational(0));
        }
    }
    for (std::size_t t = 0; t < n; ++t) {
        const auto& set = inst.beliefs[t];
        for (std::size_t o = 0; o < n; ++o) {
            Vec row(vars, Rational(0));
            row[cv] = -1;
            row[w0v[t][o]] = -1;
            for (std::size_t k = 0; k < set.a.size(); ++k) row[wv[t][o] + k] = set.b[k];
            dev_row[t][o] = lp.rows.size();
            lp.add_le(std::move(row), inst.values[o] - inst.values[t]);
            for (std::size_t s = 0; s < m; ++s) {
                Vec r(vars, Rational(0));
                r[w0v[t][o]] = 1;
                for (std::size_t k = 0; k < set.a.size(); ++k) r[wv[t][o] + k] = -set.a[k][s];
                r[zvar(o, s)] = -1;
                lp.add_le(std::move(r), Rational(0));
            }
        }
    }

    LpSolution sol = solve_lp(lp);
    if (!sol.optimal()) throw std::logic_error("perturbation program must be solvable");

    VseSolution out;
    out.p_star = sol.value;
    out.z.assign(n, Vec(m, Rational(0)));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t s = 0; s < m; ++s) out.z[t][s] = sol.primal[zvar(t, s)];
    out.lambda.assign(n, Rational(0));
    out.nu.assign(n, Vec(n, Rational(0)));
    out.multiplier_mass = 0;
    out.dual_objective = 0;
    for (std::size_t t = 0; t < n; ++t) {
        out.lambda[t] = -sol.dual[worst_row[t]];
        out.multiplier_mass += out.lambda[t];
        for (std::size_t o = 0; o < n; ++o) {
            out.nu[t][o] = -sol.dual[dev_row[t][o]];
            out.multiplier_mass += out.nu[t][o];
            out.dual_objective += out.nu[t][o] * (inst.values[t] - inst.values[o]);
        }
    }
    if (out.p_star < 0) throw std::logic_error("negative optimum in the perturbation program");
    if (out.multiplier_mass != 1) throw std::logic_error("multiplier mass failed to normalize");
    if (out.dual_objective != out.p_star) throw std::logic_error("dual objective mismatch");
    return out;
}

// ---------------------------------------------------------------------------
// Virtual extraction menu: shift the optimal perturbation down by eps so own
// surplus lands in [0, 2 eps] and every deviation is capped by 2 eps.

inline Menu build_virtual_menu(const ExtractionInstance& inst, const Rational& eps) {
    if (eps <= 0) throw InputError("virtual extraction bound must be positive");
    const VseSolution sol = solve_vse(inst);
    if (sol.p_star > eps)
        throw CapabilityError("virtual extraction unavailable: optimum " + to_string(sol.p_star) +
                              " exceeds bound " + to_string(eps));
    Menu menu;
    menu.contracts.assign(inst.types(), Vec(inst.states, Rational(0)));
    for (std::size_t t = 0; t < inst.types(); ++t)
        for (std::size_t s = 0; s < inst.states; ++s)
            menu.contracts[t][s] = inst.values[t] + sol.z[t][s] - eps;
    if (!check_menu(inst, menu, MenuMode::virtual_eps, eps * 2).pass)
        throw std::logic_error("virtual menu failed its own audit");
    return menu;
}

// ---------------------------------------------------------------------------
// Collapse structure: types whose belief sets share a full-dimensional
// overlap must receive identical contracts in any robust-IC menu, so the
// full-dimension-overlap graph partitions the types.

struct CollapseReport {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::size_t> component;  // per type, ids numbered by first appearance
    std::size_t component_count = 0;
    bool single_contract_regime = false;
};

inline CollapseReport menu_collapse(const ExtractionInstance& inst,
                                    std::optional<std::size_t> window = std::nullopt) {
    const std::size_t n = inst.types();
    if (window && *window < 1) throw InputError("window must be at least 1");
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    CollapseReport report;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (window && j - i > *window) continue;
            std::optional<BeliefPolytope> cap = intersect(inst.beliefs[i], inst.beliefs[j]);
            if (!cap) continue;
            if (!has_full_dimension(*cap).full) continue;
            report.edges.emplace_back(i, j);
            parent[find(i)] = find(j);
        }
    }
    report.component.assign(n, 0);
    std::vector<std::size_t> ids(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (ids[root] == n) ids[root] = report.component_count++;
        report.component[i] = ids[root];
    }
    report.single_contract_regime = report.component_count == 1;
    return report;
}

// ---------------------------------------------------------------------------
// Best deterministic uniform price when the collapse graph is connected: the
// lowest value is the highest constant contract every type accepts. The flag
// records how the supplied designer belief relates to the lowest-value
// type's belief set.

enum class SingleContractCase { optimal, optimal_maxmin, hypotheses_not_met };

inline const char* to_cstring(SingleContractCase c) {
    switch (c) {
        case SingleContractCase::optimal: return "optimal";
        case SingleContractCase::optimal_maxmin: return "optimal_maxmin";
        case SingleContractCase::hypotheses_not_met: return "hypotheses_not_met";
    }
    return "?";
}

struct SingleContract {
    Rational level;    // constant state-contingent payment
    Rational revenue;  // sure revenue when every type accepts
    std::size_t lowest_type = 0;
    SingleContractCase applicability = SingleContractCase::hypotheses_not_met;
};

namespace detail {

inline bool polytope_subset(const BeliefPolytope& inner, const BeliefPolytope& outer) {
    for (std::size_t k = 0; k < outer.a.size(); ++k)
        if (support_max(inner, outer.a[k]).value > outer.b[k]) return false;
    return true;
}

}  // namespace detail

inline SingleContract optimal_single_contract(const ExtractionInstance& inst,
                                              const std::optional<BeliefPolytope>& designer) {
    const CollapseReport collapse = menu_collapse(inst, std::nullopt);
    if (!collapse.single_contract_regime)
        throw CapabilityError(
            "uniform-price analysis requires all belief sets in one full-dimensional overlap "
            "component; found " +
            std::to_string(collapse.component_count));

    SingleContract out;
    out.lowest_type = 0;
    for (std::size_t t = 1; t < inst.types(); ++t)
        if (inst.values[t] < inst.values[out.lowest_type]) out.lowest_type = t;
    out.level = inst.values[out.lowest_type];
    out.revenue = out.level;
    if (designer) {
        if (designer->states != inst.states)
            throw InputError("designer belief state count mismatch");
        const BeliefPolytope& lowest = inst.beliefs[out.lowest_type];
        if (detail::polytope_subset(*designer, lowest))
            out.applicability = SingleContractCase::optimal;
        else if (intersect(*designer, lowest))
            out.applicability = SingleContractCase::optimal_maxmin;
        else
            out.applicability = SingleContractCase::hypotheses_not_met;
    }
    return out;
}

// Point-belief convenience: a designer who holds a single distribution.
inline BeliefPolytope singleton_belief(const Vec& point) {
    validate_distribution(point, "designer belief");
    const std::size_t m = point.size();
    Mat a;
    Vec b;
    for (std::size_t s = 0; s < m; ++s) {
        Vec row(m, Rational(0));
        row[s] = 1;
        a.push_back(row);
        b.push_back(point[s]);
        row[s] = -1;
        a.push_back(std::move(row));
        b.push_back(-point[s]);
    }
    return make_polytope(m, std::move(a), std::move(b));
}

}  // namespace rmd
