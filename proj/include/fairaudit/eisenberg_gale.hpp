#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/outcome_space.hpp"
#include "fairaudit/simplex.hpp"

// Maximum Nash welfare over a polytope space: Frank-Wolfe with away steps on
// the (convex) feasible utility set, exact line search on the log objective.
// The linear subproblem "maximize sum_i u_i(y)/u_i(x)" doubles as the
// proportional-fairness certificate: its optimum divided by n is exactly the
// PF value of the current point, so termination is a certification, not a
// heuristic stopping rule.

namespace fairaudit {

struct EgResult {
    bool converged = false;
    std::vector<double> point;   // polytope coordinates
    UtilityVector utilities;
    double nash_welfare = 0.0;
    double pf_bound = kInf;      // certified pf_value <= pf_bound
    int iterations = 0;
};

namespace detail {

struct Atom {
    std::vector<double> x;
    UtilityVector w;
    double lambda = 0.0;
};

inline double line_search_log(const UtilityVector& w, const UtilityVector& d, double gamma_max) {
    // maximize sum log(w + gamma d) for gamma in [0, gamma_max]
    double hi = gamma_max;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (d[i] < 0.0) hi = std::min(hi, (w[i] - 1e-12) / -d[i]);
    if (hi <= 0.0) return 0.0;
    auto deriv = [&](double g) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += d[i] / (w[i] + g * d[i]);
        return s;
    };
    if (deriv(hi) >= 0.0) return hi;
    double lo = 0.0;
    if (deriv(lo) <= 0.0) return 0.0;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (deriv(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

inline EgResult eisenberg_gale_mnw(const PolytopeSpace& space, double pf_tol = 1e-7,
                                   int max_iters = 20000) {
    const int n = space.agents();
    require(n > 0, "empty agent set");

    // Per-agent maxima double as the starting vertices; every agent must be
    // able to attain positive utility somewhere.
    std::vector<detail::Atom> atoms;
    for (int i = 0; i < n; ++i) {
        LinearProgram lp = detail::polytope_lp(space, space.utility[i], {});
        LpSolution sol = solve_lp(lp);
        require(sol.status == LpStatus::Optimal, "polytope is infeasible or unbounded");
        require(sol.value > 0.0, "agent cannot attain positive utility in this polytope");
        atoms.push_back({sol.x, space.utilities_at(sol.x), 1.0 / n});
    }

    auto combine = [&]() {
        std::vector<double> x(space.num_vars, 0.0);
        UtilityVector w(n, 0.0);
        for (const auto& a : atoms) {
            for (int j = 0; j < space.num_vars; ++j) x[j] += a.lambda * a.x[j];
            for (int i = 0; i < n; ++i) w[i] += a.lambda * a.w[i];
        }
        return std::make_pair(std::move(x), std::move(w));
    };
    auto [x, w] = combine();

    EgResult res;
    for (int iter = 0; iter < max_iters; ++iter) {
        res.iterations = iter;
        std::vector<double> grad(space.num_vars, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < space.num_vars; ++j) grad[j] += space.utility[i][j] / w[i];
        LinearProgram lp = detail::polytope_lp(space, grad, {});
        LpSolution sol = solve_lp(lp);
        require(sol.status == LpStatus::Optimal, "Frank-Wolfe subproblem failed");
        res.pf_bound = sol.value / n;
        if (res.pf_bound <= 1.0 + pf_tol) {
            res.converged = true;
            break;
        }
        UtilityVector w_fw = space.utilities_at(sol.x);

        // Away atom: the active vertex with the worst gradient alignment.
        int away = -1;
        double away_score = kInf;
        for (std::size_t a = 0; a < atoms.size(); ++a) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += atoms[a].w[i] / w[i];
            if (atoms[a].lambda > 1e-12 && s < away_score) {
                away_score = s;
                away = static_cast<int>(a);
            }
        }
        double fw_gain = sol.value - n;
        double away_gain = n - away_score;
        UtilityVector d(n);
        if (away >= 0 && away_gain > fw_gain) {
            for (int i = 0; i < n; ++i) d[i] = w[i] - atoms[away].w[i];
            double gamma_max = atoms[away].lambda / (1.0 - atoms[away].lambda + 1e-15);
            double gamma = detail::line_search_log(w, d, gamma_max);
            for (auto& a : atoms) a.lambda *= 1.0 + gamma;
            atoms[away].lambda -= gamma;
        } else {
            for (int i = 0; i < n; ++i) d[i] = w_fw[i] - w[i];
            double gamma = detail::line_search_log(w, d, 1.0);
            for (auto& a : atoms) a.lambda *= 1.0 - gamma;
            bool merged = false;
            for (auto& a : atoms) {
                double diff = 0.0;
                for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(a.w[i] - w_fw[i]));
                if (diff < 1e-12) {
                    a.lambda += gamma;
                    merged = true;
                    break;
                }
            }
            if (!merged) atoms.push_back({sol.x, w_fw, gamma});
        }
        std::erase_if(atoms, [](const detail::Atom& a) { return a.lambda <= 1e-12; });
        std::tie(x, w) = combine();
    }

    res.point = std::move(x);
    res.utilities = std::move(w);
    res.nash_welfare = nash_welfare(res.utilities);
    return res;
}

// Cutting-plane style (1+eps)-PF solve: the same alternation of best-response
// LP and objective step, terminated as soon as the LP certifies the bound.
struct ApproxPfResult {
    bool certified = false;
    std::vector<double> point;
    UtilityVector utilities;
    double pf_bound = kInf;
};

inline ApproxPfResult approx_pf_solve(const PolytopeSpace& space, double epsilon,
                                      int max_iters = 20000) {
    require(epsilon > 0.0, "epsilon must be positive");
    EgResult eg = eisenberg_gale_mnw(space, epsilon, max_iters);
    ApproxPfResult res;
    res.certified = eg.converged && eg.pf_bound <= 1.0 + epsilon;
    res.point = std::move(eg.point);
    res.utilities = std::move(eg.utilities);
    res.pf_bound = eg.pf_bound;
    return res;
}

}  // namespace fairaudit
