#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/flow.hpp"
#include "fairaudit/model.hpp"
#include "fairaudit/simplex.hpp"

// Exact search over complete indivisible allocations: egalitarian and Nash
// optimization, leximin via iterated egalitarian rounds with frozen minima,
// and floor-constrained utility maximization (the workhorse behind harm-ratio
// audits at sizes where enumerating all n^m allocations is hopeless).

namespace fairaudit {

struct BnbCaps {
    int max_agents = 10;
    int max_goods = 20;
    // hard ceiling on search nodes; exhausting it raises ScaleCapError rather
    // than silently returning a non-optimal allocation
    long long node_budget = 40'000'000;
};

enum class AllocObjective { Egalitarian, Nash };

namespace detail {

struct GoodsSearch {
    const GoodsInstance& inst;
    std::vector<int> order;                   // good visit order
    std::vector<std::vector<double>> rest;    // rest[d][k]: value of goods order[d..] to k

    explicit GoodsSearch(const GoodsInstance& instance, std::vector<int> good_order)
        : inst(instance), order(std::move(good_order)) {
        int n = inst.n, m = inst.m;
        rest.assign(m + 1, std::vector<double>(n, 0.0));
        for (int d = m - 1; d >= 0; --d)
            for (int k = 0; k < n; ++k)
                rest[d][k] = rest[d + 1][k] + inst.value[k][order[d]];
    }
};

inline std::vector<int> goods_by_agent_value(const GoodsInstance& inst, int agent) {
    std::vector<int> order(inst.m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return inst.value[agent][a] > inst.value[agent][b];
    });
    return order;
}

inline std::vector<int> goods_by_max_value(const GoodsInstance& inst) {
    std::vector<double> peak(inst.m, 0.0);
    for (int g = 0; g < inst.m; ++g)
        for (int i = 0; i < inst.n; ++i) peak[g] = std::max(peak[g], inst.value[i][g]);
    std::vector<int> order(inst.m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return peak[a] > peak[b]; });
    return order;
}

inline void check_caps(const GoodsInstance& inst, const BnbCaps& caps) {
    if (inst.n > caps.max_agents || inst.m > caps.max_goods)
        throw ScaleCapError("instance exceeds branch-and-bound scale caps");
}

// Largest number of agents that can simultaneously receive a positively
// valued good (distinct goods): a bipartite matching bound for the Nash
// lexicographic tier.
inline int max_positive_agents(const GoodsInstance& inst) {
    int n = inst.n, m = inst.m;
    FlowNetwork net(n + m + 2);
    int source = n + m, sink = n + m + 1;
    for (int i = 0; i < n; ++i) net.add_arc(source, i, 1, 0.0);
    for (int g = 0; g < m; ++g) net.add_arc(n + g, sink, 1, 0.0);
    for (int i = 0; i < n; ++i)
        for (int g = 0; g < m; ++g)
            if (inst.value[i][g] > 0.0) net.add_arc(i, n + g, 1, 0.0);
    return static_cast<int>(net.max_flow(source, sink));
}

}  // namespace detail

struct FloorsMaxResult {
    double value = 0.0;
    std::vector<int> owners;  // owners[g] = agent holding good g
};

// Maximizes `target`'s utility over complete allocations subject to
// u_k >= floors[k] for every agent k with a finite floor (floors[k] = -inf
// frees agent k). Only solutions strictly above `give_up_below` are reported;
// returns nullopt when none exists (infeasible floors included).
//
// `lambda`, when supplied, are nonnegative floor multipliers (typically LP
// duals of the fractional relaxation); they power the Lagrangian node bound
//   u_t(part) + sum_k lambda_k (u_k(part) - f_k) + sum_{g left} phi_g,
// with phi_g = max(v_{t,g}, max_k lambda_k v_{k,g}), which is a valid upper
// bound for every completion at any lambda >= 0.
inline std::optional<FloorsMaxResult> goods_max_with_floors(
    const GoodsInstance& inst, int target, const std::vector<double>& floors,
    double give_up_below = -kInf, bool stop_at_positive = false,
    const std::vector<double>& lambda = {}) {
    require_dims(static_cast<int>(floors.size()) == inst.n, "floors size mismatch");
    const int n = inst.n, m = inst.m;
    std::vector<int> constrained;
    for (int k = 0; k < n; ++k)
        if (k != target && std::isfinite(floors[k])) constrained.push_back(k);

    const bool guided = !lambda.empty();
    std::vector<double> phi(m, 0.0);
    double lambda_floor_sum = 0.0;
    if (guided) {
        for (int g = 0; g < m; ++g) {
            phi[g] = inst.value[target][g];
            for (int k : constrained) phi[g] = std::max(phi[g], lambda[k] * inst.value[k][g]);
        }
        for (int k : constrained) lambda_floor_sum += lambda[k] * floors[k];
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    if (guided)
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return phi[a] > phi[b]; });
    else
        order = detail::goods_by_agent_value(inst, target);
    detail::GoodsSearch search(inst, order);
    std::vector<double> suffix_phi(m + 1, 0.0);
    for (int d = m - 1; d >= 0; --d) suffix_phi[d] = suffix_phi[d + 1] + phi[search.order[d]];

    double best = give_up_below;
    std::vector<int> best_owners;
    bool found = false;
    std::vector<int> owners(m, -1);
    std::vector<double> u(n, 0.0);
    std::vector<std::vector<std::pair<double, int>>> kid_buffer(m + 1);

    // linpart = u_target(partial) + sum_k lambda_k u_k(partial)
    auto dfs = [&](auto&& self, int depth, double linpart) -> bool {  // true aborts
        if (u[target] + search.rest[depth][target] <= best + 1e-12) return false;
        if (guided && linpart - lambda_floor_sum + suffix_phi[depth] <= best + 1e-12) return false;
        for (int k : constrained)
            if (u[k] + search.rest[depth][k] < floors[k] - kFloorTol) return false;
        if (depth == m) {
            best = u[target];
            best_owners = owners;
            found = true;
            return stop_at_positive && best > 0.0;
        }
        int g = search.order[depth];
        auto assign = [&](int k, double gain) -> bool {
            owners[g] = k;
            u[k] += inst.value[k][g];
            bool abort = self(self, depth + 1, linpart + gain);
            u[k] -= inst.value[k][g];
            owners[g] = -1;
            return abort;
        };
        if (guided) {
            // expand in ascending Lagrangian regret: the first dive lands on
            // the dual-greedy completion, which seeds a near-tight incumbent
            auto& kids = kid_buffer[depth];
            kids.clear();
            kids.emplace_back(phi[g] - inst.value[target][g], target);
            for (int k : constrained)
                if (inst.value[k][g] > 0.0 && u[k] < floors[k] - kFloorTol)
                    kids.emplace_back(phi[g] - lambda[k] * inst.value[k][g], k);
            std::sort(kids.begin(), kids.end());
            for (auto [regret, k] : kids) {
                double gain = k == target ? inst.value[target][g] : lambda[k] * inst.value[k][g];
                if (assign(k, gain)) return true;
            }
            return false;
        }
        if (assign(target, inst.value[target][g])) return true;
        for (int k : constrained)
            if (inst.value[k][g] > 0.0 && u[k] < floors[k] - kFloorTol)
                if (assign(k, 0.0)) return true;
        return false;
    };
    dfs(dfs, 0, 0.0);

    if (!found) return std::nullopt;
    return FloorsMaxResult{best, std::move(best_owners)};
}

// Fractional relaxation of the floor-constrained maximization: an upper bound
// on the integral optimum plus the floor duals that guide the exact search.
struct FloorsRelaxation {
    bool feasible = false;
    double bound = -kInf;
    std::vector<double> lambda;
};

inline FloorsRelaxation floors_relaxation(const GoodsInstance& inst, int target,
                                          const std::vector<double>& floors) {
    const int n = inst.n, m = inst.m;
    LinearProgram lp;
    lp.objective.assign(n * m, 0.0);
    for (int g = 0; g < m; ++g) lp.objective[target * m + g] = inst.value[target][g];
    lp.lower.assign(n * m, 0.0);
    lp.upper.assign(n * m, kInf);  // column sums already cap the shares at 1
    for (int g = 0; g < m; ++g) {
        LinearConstraint con;
        con.coeff.assign(n * m, 0.0);
        for (int k = 0; k < n; ++k) con.coeff[k * m + g] = 1.0;
        con.sense = Sense::Eq;
        con.rhs = 1.0;
        lp.constraints.push_back(std::move(con));
    }
    std::vector<int> floor_agents;
    for (int k = 0; k < n; ++k) {
        if (k == target || !std::isfinite(floors[k])) continue;
        LinearConstraint con;
        con.coeff.assign(n * m, 0.0);
        for (int g = 0; g < m; ++g) con.coeff[k * m + g] = inst.value[k][g];
        con.sense = Sense::Ge;
        con.rhs = floors[k];
        lp.constraints.push_back(std::move(con));
        floor_agents.push_back(k);
    }
    LpSolution sol = solve_lp(lp);
    FloorsRelaxation rel;
    if (sol.status == LpStatus::Infeasible) return rel;
    rel.feasible = true;
    if (sol.status != LpStatus::Optimal) {
        rel.bound = inst.row_sum(target);  // solver stall: fall back to the trivial cap
        return rel;
    }
    rel.bound = sol.value;
    rel.lambda.assign(n, 0.0);
    // internal rows: each of the m equalities expands to two, then one row per
    // floor in declaration order
    for (std::size_t t = 0; t < floor_agents.size(); ++t)
        rel.lambda[floor_agents[t]] = std::max(0.0, sol.le_duals[2 * m + t]);
    return rel;
}

namespace detail {

// Egalitarian core shared by the Egal rule, leximin rounds, and ties: maximize
// min utility over `objective_agents` subject to floors on the rest.
inline std::optional<FloorsMaxResult> egal_with_floors(const GoodsInstance& inst,
                                                       const std::vector<int>& objective_agents,
                                                       const std::vector<double>& floors,
                                                       long long node_budget = -1) {
    const int n = inst.n, m = inst.m;
    detail::GoodsSearch search(inst, detail::goods_by_max_value(inst));
    std::vector<int> constrained;
    for (int k = 0; k < n; ++k)
        if (std::isfinite(floors[k])) constrained.push_back(k);
    std::vector<bool> is_objective(n, false);
    for (int k : objective_agents) is_objective[k] = true;
    const int nf = static_cast<int>(objective_agents.size());

    // mean-capacity bound: the objective group can share at most its current
    // total plus the per-good best value any of its members assigns
    std::vector<double> group_rest(m + 1, 0.0);
    for (int d = m - 1; d >= 0; --d) {
        double peak = 0.0;
        for (int k : objective_agents)
            peak = std::max(peak, inst.value[k][search.order[d]]);
        group_rest[d] = group_rest[d + 1] + peak;
    }

    double best = -kInf;
    std::vector<int> best_owners;
    bool found = false;

    // greedy seed: each good to the poorest objective agent valuing it
    if (constrained.empty() && nf > 0) {
        std::vector<int> greedy(m, 0);
        std::vector<double> gu(n, 0.0);
        for (int g : search.order) {
            int pick = -1;
            for (int k : objective_agents)
                if (inst.value[k][g] > 0.0 && (pick < 0 || gu[k] < gu[pick])) pick = k;
            greedy[g] = pick < 0 ? 0 : pick;
            gu[greedy[g]] += inst.value[greedy[g]][g];
        }
        double value = kInf;
        for (int k : objective_agents) value = std::min(value, gu[k]);
        best = value;
        best_owners = greedy;
        found = true;
    }

    std::vector<int> owners(m, -1);
    std::vector<double> u(n, 0.0);
    std::vector<std::vector<std::pair<double, int>>> kid_buffer(m + 1);
    long long nodes_left = node_budget < 0 ? (1LL << 62) : node_budget;

    auto dfs = [&](auto&& self, int depth) -> void {
        if (--nodes_left < 0)
            throw ScaleCapError("egalitarian search exceeded its node budget");
        if (nf > 0) {
            double ub = kInf, total = 0.0;
            for (int k : objective_agents) {
                ub = std::min(ub, u[k] + search.rest[depth][k]);
                total += u[k];
            }
            ub = std::min(ub, (total + group_rest[depth]) / nf);
            if (ub <= best + 1e-12) return;
        }
        for (int k : constrained)
            if (u[k] + search.rest[depth][k] < floors[k] - kFloorTol) return;
        if (depth == m) {
            double value = kInf;
            for (int k : objective_agents) value = std::min(value, u[k]);
            if (nf == 0) value = 0.0;
            if (!found || value > best + 1e-12) {
                best = value;
                best_owners = owners;
                found = true;
            }
            return;
        }
        int g = search.order[depth];
        auto& kids = kid_buffer[depth];
        kids.clear();
        for (int k = 0; k < n; ++k) {
            bool wanted = inst.value[k][g] > 0.0 &&
                          (is_objective[k] ||
                           (std::isfinite(floors[k]) && u[k] < floors[k] - kFloorTol));
            if (!wanted) continue;
            kids.emplace_back(u[k], k);  // poorest first
        }
        if (kids.empty()) {
            owners[g] = 0;  // nobody needs it; park it on agent 0
            u[0] += inst.value[0][g];
            self(self, depth + 1);
            u[0] -= inst.value[0][g];
            owners[g] = -1;
            return;
        }
        std::stable_sort(kids.begin(), kids.end());
        for (std::size_t c = 0; c < kids.size(); ++c) {
            int k = kids[c].second;
            owners[g] = k;
            u[k] += inst.value[k][g];
            self(self, depth + 1);
            u[k] -= inst.value[k][g];
        }
        owners[g] = -1;
    };
    dfs(dfs, 0);
    if (!found) return std::nullopt;
    return FloorsMaxResult{best, std::move(best_owners)};
}

struct NashValue {
    int positive = 0;
    double log_product = -kInf;  // over positive-utility agents

    bool better_than(const NashValue& other) const {
        if (positive != other.positive) return positive > other.positive;
        return log_product > other.log_product + 1e-12;
    }
};

inline NashValue nash_value(const UtilityVector& u) {
    NashValue v;
    v.log_product = 0.0;
    for (double x : u)
        if (x > 0.0) {
            ++v.positive;
            v.log_product += std::log(x);
        }
    return v;
}

// Greedy + swap local search incumbent for the Nash search.
inline std::vector<int> nash_incumbent(const GoodsInstance& inst) {
    const int n = inst.n, m = inst.m;
    std::vector<int> owners(m, -1);
    std::vector<double> u(n, 0.0);
    auto marginal = [&](int k, int g) {
        // Lexicographic gain: making a zero agent positive dominates.
        double v = inst.value[k][g];
        if (v <= 0.0) return -kInf;
        return u[k] > 0.0 ? std::log1p(v / u[k]) : 1e6 + std::log(v);
    };
    std::vector<int> order = goods_by_max_value(inst);
    for (int g : order) {
        int pick = 0;
        double best = -kInf;
        for (int k = 0; k < n; ++k) {
            double gain = marginal(k, g);
            if (gain > best) {
                best = gain;
                pick = k;
            }
        }
        owners[g] = pick;
        u[pick] += inst.value[pick][g];
    }
    // Single-good reassignments and pairwise owner swaps until a local optimum.
    bool improved = true;
    NashValue cur = nash_value(u);
    while (improved) {
        improved = false;
        for (int g = 0; g < m; ++g) {
            int from = owners[g];
            for (int k = 0; k < n; ++k) {
                if (k == from) continue;
                u[from] -= inst.value[from][g];
                u[k] += inst.value[k][g];
                NashValue cand = nash_value(u);
                if (cand.better_than(cur)) {
                    owners[g] = k;
                    cur = cand;
                    improved = true;
                    from = k;
                } else {
                    u[k] -= inst.value[k][g];
                    u[from] += inst.value[from][g];
                }
            }
        }
        for (int g = 0; g < m; ++g) {
            for (int h = g + 1; h < m; ++h) {
                int a = owners[g], b = owners[h];
                if (a == b) continue;
                u[a] += inst.value[a][h] - inst.value[a][g];
                u[b] += inst.value[b][g] - inst.value[b][h];
                NashValue cand = nash_value(u);
                if (cand.better_than(cur)) {
                    owners[g] = b;
                    owners[h] = a;
                    cur = cand;
                    improved = true;
                } else {
                    u[a] -= inst.value[a][h] - inst.value[a][g];
                    u[b] -= inst.value[b][g] - inst.value[b][h];
                }
            }
        }
    }
    return owners;
}

// Fractional Nash optimum of a goods instance by Frank-Wolfe with exact line
// search; linear subproblems over the assignment polytope have a closed form
// (send each good to the agent with the best weighted value). Returns the
// fractional utilities; the duality gap certificate is folded into them by
// running until the gap is tiny.
inline UtilityVector fractional_nash_utilities(const GoodsInstance& inst, int iters = 400) {
    const int n = inst.n, m = inst.m;
    std::vector<std::vector<double>> x(n, std::vector<double>(m, 1.0 / n));
    UtilityVector u(n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int g = 0; g < m; ++g) u[k] += x[k][g] * inst.value[k][g];
    UtilityVector vertex_u(n, 0.0);
    std::vector<int> target(m, 0);
    for (int it = 0; it < iters; ++it) {
        for (int g = 0; g < m; ++g) {
            int pick = 0;
            double score = -1.0;
            for (int k = 0; k < n; ++k) {
                if (u[k] <= 0.0) continue;
                double s = inst.value[k][g] / u[k];
                if (s > score) {
                    score = s;
                    pick = k;
                }
            }
            target[g] = pick;
        }
        std::fill(vertex_u.begin(), vertex_u.end(), 0.0);
        for (int g = 0; g < m; ++g) vertex_u[target[g]] += inst.value[target[g]][g];
        double gap = 0.0;
        for (int k = 0; k < n; ++k)
            if (u[k] > 0.0) gap += (vertex_u[k] - u[k]) / u[k];
        if (gap < 1e-7 * n) break;
        // line search on gamma over sum log((1-gamma) u + gamma vertex_u)
        double lo = 0.0, hi = 1.0;
        auto deriv = [&](double gamma) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                double mixed = (1 - gamma) * u[k] + gamma * vertex_u[k];
                if (mixed <= 1e-300) return -kInf;
                s += (vertex_u[k] - u[k]) / mixed;
            }
            return s;
        };
        if (deriv(1.0 - 1e-12) > 0.0) {
            hi = 1.0 - 1e-12;
        } else {
            for (int bs = 0; bs < 60; ++bs) {
                double mid = 0.5 * (lo + hi);
                (deriv(mid) > 0.0 ? lo : hi) = mid;
            }
            hi = 0.5 * (lo + hi);
        }
        for (int k = 0; k < n; ++k) {
            for (int g = 0; g < m; ++g) x[k][g] *= 1 - hi;
        }
        for (int g = 0; g < m; ++g) x[target[g]][g] += hi;
        for (int k = 0; k < n; ++k) {
            u[k] = 0.0;
            for (int g = 0; g < m; ++g) u[k] += x[k][g] * inst.value[k][g];
        }
    }
    return u;
}

inline std::vector<int> nash_bnb(const GoodsInstance& inst, long long node_budget = -1) {
    const int n = inst.n, m = inst.m;

    std::vector<int> inc_owners = nash_incumbent(inst);
    std::vector<double> inc_u(n, 0.0);
    for (int g = 0; g < m; ++g) inc_u[inc_owners[g]] += inst.value[inc_owners[g]][g];
    NashValue best = nash_value(inc_u);
    std::vector<int> best_owners = inc_owners;

    const int reachable = max_positive_agents(inst);
    const bool full_tier = reachable == n && best.positive == n;

    // Weights from the fractional Nash optimum: concavity gives
    //   sum log u  <=  sum log u* - n + sum_k u_k / u*_k
    // for every allocation, and the per-good price pi_g = max_k v_kg / u*_k
    // makes the root bound collapse to the fractional optimum. The linear part
    // updates in O(1) per branching decision.
    std::vector<double> weight(n, 0.0);
    double tangent_base = 0.0;
    UtilityVector ustar;
    if (full_tier) {
        ustar = fractional_nash_utilities(inst);
        for (int k = 0; k < n; ++k) {
            double w = std::max(ustar[k], 1e-12);
            weight[k] = 1.0 / w;
            tangent_base += std::log(w);
        }
        tangent_base -= n;
    }
    std::vector<double> price(m, 0.0);
    for (int g = 0; g < m; ++g)
        for (int k = 0; k < n; ++k)
            price[g] = std::max(price[g], full_tier ? inst.value[k][g] * weight[k] : 0.0);

    // visit expensive goods first
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    if (full_tier)
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return price[a] > price[b]; });
    else
        order = goods_by_max_value(inst);
    GoodsSearch search(inst, order);
    std::vector<double> suffix_price(m + 1, 0.0);
    for (int d = m - 1; d >= 0; --d) suffix_price[d] = suffix_price[d + 1] + price[order[d]];

    std::vector<int> owners(m, -1);
    std::vector<double> u(n, 0.0);
    std::vector<std::vector<std::pair<double, int>>> kid_buffer(m + 1);
    long long nodes_left = node_budget < 0 ? (1LL << 62) : node_budget;

    auto dfs = [&](auto&& self, int depth, double linpart) -> void {
        if (--nodes_left < 0) throw ScaleCapError("Nash search exceeded its node budget");
        if (full_tier && best.positive == n) {
            if (tangent_base + linpart + suffix_price[depth] <= best.log_product + 1e-12) return;
        } else {
            int possible = 0;
            double optimistic_log = 0.0;
            for (int k = 0; k < n; ++k) {
                double cap = u[k] + search.rest[depth][k];
                if (cap > 0.0) {
                    ++possible;
                    optimistic_log += std::log(cap);
                }
            }
            if (possible < best.positive) return;
            if (possible == best.positive && optimistic_log <= best.log_product + 1e-12) return;
        }
        if (depth == m) {
            NashValue v = nash_value(u);
            if (v.better_than(best)) {
                best = v;
                best_owners = owners;
            }
            return;
        }
        int g = search.order[depth];
        auto& kids = kid_buffer[depth];
        kids.clear();
        for (int k = 0; k < n; ++k) {
            if (inst.value[k][g] <= 0.0) continue;
            // cheapest equilibrium regret first
            double key = full_tier ? price[g] - inst.value[k][g] * weight[k]
                                   : -(u[k] > 0.0 ? inst.value[k][g] / u[k] : kInf);
            kids.emplace_back(key, k);
        }
        if (kids.empty()) {
            owners[g] = 0;
            self(self, depth + 1, linpart);
            owners[g] = -1;
            return;
        }
        std::sort(kids.begin(), kids.end());
        for (auto [key, k] : kids) {
            owners[g] = k;
            u[k] += inst.value[k][g];
            // linpart carries sum_k u_k * weight_k; the suffix array already
            // drops price_g when depth advances
            self(self, depth + 1, full_tier ? linpart + inst.value[k][g] * weight[k] : linpart);
            u[k] -= inst.value[k][g];
        }
        owners[g] = -1;
    };
    dfs(dfs, 0, 0.0);
    return best_owners;
}

}  // namespace detail

// Exact optimizer over complete indivisible allocations. The Nash objective is
// lexicographic: first the number of agents with positive utility, then the
// product over those agents (zeros are unavoidable in discrete instances, so
// they must be representable rather than collapse every candidate to NW 0).
inline Allocation branch_and_bound_allocation(const GoodsInstance& inst, AllocObjective objective,
                                              const BnbCaps& caps = {}) {
    require(!inst.divisible, "branch and bound needs an indivisible instance");
    inst.validate();
    detail::check_caps(inst, caps);
    if (objective == AllocObjective::Nash)
        return Allocation::from_owners(detail::nash_bnb(inst, caps.node_budget), inst.n);
    std::vector<int> everyone(inst.n);
    std::iota(everyone.begin(), everyone.end(), 0);
    auto res = detail::egal_with_floors(inst, everyone, std::vector<double>(inst.n, -kInf),
                                        caps.node_budget);
    return Allocation::from_owners(res->owners, inst.n);
}

namespace detail {

// a >lex b on already-sorted vectors, with tolerance
inline bool lex_greater(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k] + tol) return true;
        if (a[k] < b[k] - tol) return false;
    }
    return false;
}

}  // namespace detail

// Exact leximin by branch and bound on the sorted utility vector directly.
// The bound is the sorted vector of per-agent caps u_k + rest_k: caps dominate
// every completion pointwise, and sorting preserves pointwise dominance, so a
// node whose sorted caps do not beat the incumbent lexicographically is dead.
// (Iterated egalitarian rounds with a single frozen minimum per round can
// return non-leximin outcomes when several agents are individually liftable
// but not jointly; the direct search avoids that trap.)
inline Allocation leximin_allocation(const GoodsInstance& inst, const BnbCaps& caps = {}) {
    require(!inst.divisible, "leximin needs an indivisible instance");
    inst.validate();
    detail::check_caps(inst, caps);
    const int n = inst.n, m = inst.m;
    detail::GoodsSearch search(inst, detail::goods_by_max_value(inst));

    std::vector<int> everyone(n);
    std::iota(everyone.begin(), everyone.end(), 0);
    auto egal = detail::egal_with_floors(inst, everyone, std::vector<double>(n, -kInf));
    std::vector<int> best_owners = egal->owners;
    std::vector<double> incumbent(n, 0.0);
    for (int g = 0; g < m; ++g) incumbent[best_owners[g]] += inst.value[best_owners[g]][g];
    std::sort(incumbent.begin(), incumbent.end());

    std::vector<int> owners(m, -1);
    std::vector<double> u(n, 0.0), scratch(n);
    auto dfs = [&](auto&& self, int depth) -> void {
        for (int k = 0; k < n; ++k) scratch[k] = u[k] + search.rest[depth][k];
        std::sort(scratch.begin(), scratch.end());
        if (!detail::lex_greater(scratch, incumbent, 1e-9)) return;
        if (depth == m) {
            scratch.assign(u.begin(), u.end());
            std::sort(scratch.begin(), scratch.end());
            if (detail::lex_greater(scratch, incumbent, 1e-9)) {
                incumbent = scratch;
                best_owners = owners;
            }
            return;
        }
        int g = search.order[depth];
        bool branched = false;
        for (int k = 0; k < n; ++k) {
            if (inst.value[k][g] <= 0.0) continue;
            branched = true;
            owners[g] = k;
            u[k] += inst.value[k][g];
            self(self, depth + 1);
            u[k] -= inst.value[k][g];
        }
        if (!branched) {
            owners[g] = 0;
            self(self, depth + 1);
        }
        owners[g] = -1;
    };
    dfs(dfs, 0);
    return Allocation::from_owners(best_owners, inst.n);
}

// Visits every complete indivisible allocation (owner vectors in base-n
// order); the exact oracle substrate for small instances.
template <typename Fn>
void for_each_allocation(int n, int m, Fn&& fn) {
    std::vector<int> owners(m, 0);
    while (true) {
        fn(const_cast<const std::vector<int>&>(owners));
        int g = 0;
        while (g < m) {
            if (++owners[g] < n) break;
            owners[g] = 0;
            ++g;
        }
        if (g == m) break;
    }
}

}  // namespace fairaudit
