#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "fairaudit/alloc_search.hpp"
#include "fairaudit/common.hpp"
#include "fairaudit/flow.hpp"
#include "fairaudit/knapsack.hpp"
#include "fairaudit/model.hpp"
#include "fairaudit/outcome_space.hpp"

// The decision rules compared in the experiments, for all three domains.
// Exact where tractable at desk scale, explicitly labeled heuristics beyond.

namespace fairaudit {

enum class SolveStatus { Exact, Heuristic, CompletedByGreedy };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Exact: return "exact";
        case SolveStatus::Heuristic: return "heuristic";
        default: return "completed-by-greedy";
    }
}

template <typename Outcome>
struct RuleResult {
    std::string rule;
    Outcome outcome;
    double objective = 0.0;
    SolveStatus status = SolveStatus::Exact;
    double runtime_sec = 0.0;
};

using GoodsRuleResult = RuleResult<Allocation>;
using PBRuleResult = RuleResult<BudgetSelection>;
using ReviewRuleResult = RuleResult<ReviewAssignment>;

namespace detail {

class StopWatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(clock::now() - start_).count();
    }

  private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Private goods rules

inline Allocation util_allocation(const GoodsInstance& inst) {
    std::vector<int> owner(inst.m, 0);
    for (int g = 0; g < inst.m; ++g) {
        int pick = 0;
        for (int i = 1; i < inst.n; ++i)
            if (inst.value[i][g] > inst.value[pick][g]) pick = i;
        owner[g] = pick;  // ties stay with the lowest agent index
    }
    return Allocation::from_owners(owner, inst.n);
}

// Cyclic picking in agent order; an agent whose remaining values are all zero
// still picks the lowest-index leftover good so the allocation stays complete.
inline Allocation rr_allocation(const GoodsInstance& inst,
                                const std::vector<int>& agent_order = {}) {
    std::vector<int> order = agent_order;
    if (order.empty()) {
        order.resize(inst.n);
        std::iota(order.begin(), order.end(), 0);
    }
    std::vector<int> owner(inst.m, -1);
    std::vector<bool> taken(inst.m, false);
    int left = inst.m;
    while (left > 0) {
        for (int i : order) {
            if (left == 0) break;
            int pick = -1;
            for (int g = 0; g < inst.m; ++g) {
                if (taken[g]) continue;
                if (pick < 0 || inst.value[i][g] > inst.value[i][pick]) pick = g;
            }
            owner[pick] = i;
            taken[pick] = true;
            --left;
        }
    }
    return Allocation::from_owners(owner, inst.n);
}

namespace detail {

// swap local search maximizing (min utility, total utility); the stand-in
// when the exact egalitarian search blows its node budget
inline Allocation egal_local_search(const GoodsInstance& inst) {
    const int n = inst.n, m = inst.m;
    std::vector<int> owners(m, 0);
    std::vector<double> u(n, 0.0);
    for (int g : goods_by_max_value(inst)) {
        int pick = -1;
        for (int k = 0; k < n; ++k)
            if (inst.value[k][g] > 0.0 && (pick < 0 || u[k] < u[pick])) pick = k;
        owners[g] = pick < 0 ? 0 : pick;
        u[owners[g]] += inst.value[owners[g]][g];
    }
    auto key = [&]() {
        return std::make_pair(*std::min_element(u.begin(), u.end()),
                              std::accumulate(u.begin(), u.end(), 0.0));
    };
    bool improved = true;
    auto cur = key();
    while (improved) {
        improved = false;
        for (int g = 0; g < m; ++g) {
            int from = owners[g];
            for (int k = 0; k < n; ++k) {
                if (k == from) continue;
                u[from] -= inst.value[from][g];
                u[k] += inst.value[k][g];
                auto cand = key();
                if (cand > cur) {
                    owners[g] = k;
                    from = k;
                    cur = cand;
                    improved = true;
                } else {
                    u[k] -= inst.value[k][g];
                    u[from] += inst.value[from][g];
                }
            }
        }
    }
    return Allocation::from_owners(owners, n);
}

}  // namespace detail

// Exact search first; if the node budget trips (hard correlated instances),
// fall back to local search and say so in the status.
inline GoodsRuleResult goods_rule_egal(const GoodsInstance& inst, const BnbCaps& caps = {}) {
    detail::StopWatch t;
    GoodsRuleResult res{"egal", {}, 0.0, SolveStatus::Exact, 0.0};
    try {
        res.outcome = branch_and_bound_allocation(inst, AllocObjective::Egalitarian, caps);
    } catch (const ScaleCapError&) {
        if (inst.n > caps.max_agents || inst.m > caps.max_goods) throw;
        res.outcome = detail::egal_local_search(inst);
        res.status = SolveStatus::Heuristic;
    }
    res.objective = egalitarian_welfare(utility_vector(inst, res.outcome));
    res.runtime_sec = t.seconds();
    return res;
}

inline GoodsRuleResult goods_rule_nash(const GoodsInstance& inst, const BnbCaps& caps = {}) {
    detail::StopWatch t;
    GoodsRuleResult res{"nash", {}, 0.0, SolveStatus::Exact, 0.0};
    try {
        res.outcome = branch_and_bound_allocation(inst, AllocObjective::Nash, caps);
    } catch (const ScaleCapError&) {
        if (inst.n > caps.max_agents || inst.m > caps.max_goods) throw;
        res.outcome = Allocation::from_owners(detail::nash_incumbent(inst), inst.n);
        res.status = SolveStatus::Heuristic;
    }
    res.objective = nash_welfare(utility_vector(inst, res.outcome));
    res.runtime_sec = t.seconds();
    return res;
}

inline std::vector<GoodsRuleResult> goods_rules(const GoodsInstance& inst,
                                                const BnbCaps& caps = {}) {
    std::vector<GoodsRuleResult> results;
    results.push_back(goods_rule_egal(inst, caps));
    results.push_back(goods_rule_nash(inst, caps));
    {
        detail::StopWatch t;
        Allocation a = util_allocation(inst);
        results.push_back({"util", a, utilitarian_welfare(utility_vector(inst, a)),
                           SolveStatus::Exact, t.seconds()});
    }
    {
        detail::StopWatch t;
        Allocation a = rr_allocation(inst);
        results.push_back({"rr", a, nash_welfare(utility_vector(inst, a)), SolveStatus::Exact,
                           t.seconds()});
    }
    return results;
}

// ---------------------------------------------------------------------------
// Participatory budgeting rules

namespace detail {

// Per-project utilitarian welfare contribution (raw utilities, no floor).
inline std::vector<double> pb_project_welfare(const PBInstance& inst) {
    std::vector<double> welfare(inst.num_projects(), 0.0);
    for (const auto& ballot : inst.ballots)
        for (int p : ballot)
            welfare[p] += inst.utility_model == PBUtilityModel::Approval ? 1.0
                                                                         : inst.projects[p].cost;
    return welfare;
}

inline std::vector<std::vector<int>> pb_approvers(const PBInstance& inst) {
    std::vector<std::vector<int>> approvers(inst.num_projects());
    for (int v = 0; v < inst.num_voters(); ++v)
        for (int p : inst.ballots[v]) approvers[p].push_back(v);
    return approvers;
}

inline BudgetSelection greedy_complete(const PBInstance& inst, BudgetSelection sel) {
    std::vector<double> welfare = pb_project_welfare(inst);
    std::vector<bool> funded(inst.num_projects(), false);
    double spent = 0.0;
    for (int p : sel.funded) {
        funded[p] = true;
        spent += inst.projects[p].cost;
    }
    std::vector<int> order(inst.num_projects());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return welfare[a] > welfare[b]; });
    for (int p : order) {
        if (funded[p] || !inst.fundable(p)) continue;
        if (spent + inst.projects[p].cost > inst.budget + kFloorTol) continue;
        funded[p] = true;
        spent += inst.projects[p].cost;
    }
    BudgetSelection out;
    for (int p = 0; p < inst.num_projects(); ++p)
        if (funded[p]) out.funded.push_back(p);
    return out;
}

// Scan every budget-feasible subset, keeping the objective maximizer; ties go
// to the lexicographically smallest funded set.
template <typename Objective>
BudgetSelection pb_scan_best(const PBInstance& inst, const EnumerationCaps& caps, Objective&& f) {
    EnumeratedSpace space = enumerate_budget_feasible(inst, caps);
    double best = -kInf;
    std::uint64_t best_mask = 0;
    bool have = false;
    auto lex_smaller = [&](std::uint64_t a, std::uint64_t b) {
        // compare as sorted index lists: {0,2} < {1}
        for (int p = 0; p < inst.num_projects(); ++p) {
            bool ap = a >> p & 1, bp = b >> p & 1;
            if (ap != bp) return ap;
        }
        return false;
    };
    for (const auto& o : space.outcomes) {
        double score = f(o);
        if (!have || score > best + 1e-12 ||
            (score > best - 1e-12 && lex_smaller(o.payload, best_mask))) {
            best = score;
            best_mask = o.payload;
            have = true;
        }
    }
    BudgetSelection sel;
    for (int p = 0; p < inst.num_projects(); ++p)
        if (best_mask >> p & 1) sel.funded.push_back(p);
    return sel;
}

}  // namespace detail

inline PBRuleResult pb_global_util(const PBInstance& inst) {
    detail::StopWatch t;
    std::vector<double> welfare = detail::pb_project_welfare(inst);
    std::vector<double> costs(inst.num_projects());
    for (int p = 0; p < inst.num_projects(); ++p) costs[p] = inst.projects[p].cost;
    KnapsackResult res = knapsack_max_value(costs, welfare, inst.budget);
    BudgetSelection sel{res.chosen};
    // drop unfundable picks (cannot happen: cost > budget excludes itself)
    return {"global-u", sel, res.value, SolveStatus::Exact, t.seconds()};
}

inline PBRuleResult pb_greedy_util(const PBInstance& inst) {
    detail::StopWatch t;
    BudgetSelection sel = detail::greedy_complete(inst, {});
    std::vector<double> welfare = detail::pb_project_welfare(inst);
    double total = 0.0;
    for (int p : sel.funded) total += welfare[p];
    return {"greedy-u", sel, total, SolveStatus::Exact, t.seconds()};
}

inline PBRuleResult pb_nash(const PBInstance& inst, const EnumerationCaps& caps = {}) {
    detail::StopWatch t;
    BudgetSelection sel = detail::pb_scan_best(inst, caps, [&](const EnumeratedOutcome& o) {
        double log_sum = 0.0;
        for (double u : o.u) log_sum += std::log(u);  // floored utilities are positive
        return log_sum;
    });
    UtilityVector u = utility_vector(inst, sel);
    return {"nash", sel, nash_welfare(u), SolveStatus::Exact, t.seconds()};
}

inline double harmonic(int k) {
    double h = 0.0;
    for (int i = 1; i <= k; ++i) h += 1.0 / i;
    return h;
}

// Proportional approval voting: harmonic score of each voter's approved-and-
// funded count, regardless of the instance's utility model.
inline PBRuleResult pb_pav(const PBInstance& inst, const EnumerationCaps& caps = {}) {
    detail::StopWatch t;
    auto approvers = detail::pb_approvers(inst);
    BudgetSelection sel = detail::pb_scan_best(inst, caps, [&](const EnumeratedOutcome& o) {
        double score = 0.0;
        for (int v = 0; v < inst.num_voters(); ++v) {
            int count = 0;
            for (int p : inst.ballots[v])
                if (o.payload >> p & 1) ++count;
            score += harmonic(count);
        }
        return score;
    });
    return {"pav", sel, 0.0, SolveStatus::Exact, t.seconds()};
}

inline PBRuleResult pb_smooth_nash(const PBInstance& inst, const EnumerationCaps& caps = {}) {
    detail::StopWatch t;
    BudgetSelection sel = detail::pb_scan_best(inst, caps, [&](const EnumeratedOutcome& o) {
        double score = 0.0;
        for (int v = 0; v < inst.num_voters(); ++v) {
            double raw = 0.0;
            for (int p : inst.ballots[v])
                if (o.payload >> p & 1)
                    raw += inst.utility_model == PBUtilityModel::Approval ? 1.0
                                                                          : inst.projects[p].cost;
            score += std::log1p(raw);
        }
        return score;
    });
    return {"smooth-nash", sel, 0.0, SolveStatus::Exact, t.seconds()};
}

// Method of equal shares: equal endowments B/n, iteratively fund the project
// with the lowest effective price per utility, approvers paying in proportion
// to the utility they receive (capped by their remaining endowment).
inline PBRuleResult pb_mes(const PBInstance& inst, bool complete = true) {
    detail::StopWatch t;
    const int np = inst.num_projects(), nv = inst.num_voters();
    auto approvers = detail::pb_approvers(inst);
    std::vector<double> money(nv, inst.budget / nv);
    std::vector<bool> funded(np, false);
    auto unit_utility = [&](int p) {
        return inst.utility_model == PBUtilityModel::Approval ? 1.0 : inst.projects[p].cost;
    };
    while (true) {
        double best_rho = kInf;
        int best_p = -1;
        for (int p = 0; p < np; ++p) {
            if (funded[p] || !inst.fundable(p) || approvers[p].empty()) continue;
            double cost = inst.projects[p].cost;
            double u = unit_utility(p);
            double pot = 0.0;
            for (int v : approvers[p]) pot += money[v];
            if (pot < cost - 1e-12) continue;
            // waterfill: find min rho with sum_v min(money_v, rho*u) = cost
            std::vector<double> caps;
            caps.reserve(approvers[p].size());
            for (int v : approvers[p]) caps.push_back(money[v]);
            std::sort(caps.begin(), caps.end());
            double paid_full = 0.0;
            double rho = kInf;
            int k = static_cast<int>(caps.size());
            for (int exhausted = 0; exhausted < k; ++exhausted) {
                double candidate = (cost - paid_full) / (u * (k - exhausted));
                if (candidate * u <= caps[exhausted] + 1e-12) {
                    rho = candidate;
                    break;
                }
                paid_full += caps[exhausted];
            }
            if (!std::isfinite(rho)) continue;  // numerically exhausted
            if (rho < best_rho - 1e-12) {  // ascending p: ties keep the lowest id
                best_rho = rho;
                best_p = p;
            }
        }
        if (best_p < 0) break;
        double u = unit_utility(best_p);
        for (int v : approvers[best_p]) money[v] -= std::min(money[v], best_rho * u);
        funded[best_p] = true;
    }
    BudgetSelection sel;
    for (int p = 0; p < np; ++p)
        if (funded[p]) sel.funded.push_back(p);
    SolveStatus status = SolveStatus::Exact;
    if (complete) {
        BudgetSelection completed = detail::greedy_complete(inst, sel);
        if (completed.funded.size() != sel.funded.size()) status = SolveStatus::CompletedByGreedy;
        sel = std::move(completed);
    }
    return {"mes", sel, 0.0, status, t.seconds()};
}

// Sequential Phragmen: every voter accrues virtual money at unit rate; a
// project is bought as soon as its approvers jointly hold its cost, resetting
// them to zero. Projects that no longer fit the remaining budget are skipped.
inline PBRuleResult pb_phragmen(const PBInstance& inst, bool complete = true) {
    detail::StopWatch t;
    const int np = inst.num_projects(), nv = inst.num_voters();
    auto approvers = detail::pb_approvers(inst);
    std::vector<double> money(nv, 0.0);
    std::vector<bool> funded(np, false);
    double spent = 0.0;
    while (true) {
        double best_dt = kInf;
        int best_p = -1;
        for (int p = 0; p < np; ++p) {
            if (funded[p] || approvers[p].empty()) continue;
            double cost = inst.projects[p].cost;
            if (spent + cost > inst.budget + kFloorTol) continue;
            double held = 0.0;
            for (int v : approvers[p]) held += money[v];
            double dt = std::max(0.0, (cost - held) / approvers[p].size());
            if (dt < best_dt - 1e-12) {
                best_dt = dt;
                best_p = p;
            }
        }
        if (best_p < 0) break;
        for (double& m : money) m += best_dt;
        for (int v : approvers[best_p]) money[v] = 0.0;
        spent += inst.projects[best_p].cost;
        funded[best_p] = true;
    }
    BudgetSelection sel;
    for (int p = 0; p < np; ++p)
        if (funded[p]) sel.funded.push_back(p);
    SolveStatus status = SolveStatus::Exact;
    if (complete) {
        BudgetSelection completed = detail::greedy_complete(inst, sel);
        if (completed.funded.size() != sel.funded.size()) status = SolveStatus::CompletedByGreedy;
        sel = std::move(completed);
    }
    return {"phragmen", sel, 0.0, status, t.seconds()};
}

inline std::vector<PBRuleResult> pb_rules(const PBInstance& inst,
                                          const EnumerationCaps& caps = {},
                                          bool include_appendix_rules = true) {
    std::vector<PBRuleResult> results;
    results.push_back(pb_global_util(inst));
    results.push_back(pb_greedy_util(inst));
    results.push_back(pb_nash(inst, caps));
    results.push_back(pb_mes(inst));
    results.push_back(pb_phragmen(inst));
    if (include_appendix_rules) {
        results.push_back(pb_pav(inst, caps));
        results.push_back(pb_smooth_nash(inst, caps));
    }
    return results;
}

// ---------------------------------------------------------------------------
// Peer review rules

namespace detail {

struct ReviewFlowDecoder {
    FlowNetwork net;
    std::vector<std::vector<int>> arc;  // arc id per (paper, reviewer), -1 if conflicted
    int source, sink;

    ReviewFlowDecoder(const ReviewInstance& inst, double cost_scale)
        : net(2 * inst.n + 2),
          arc(inst.n, std::vector<int>(inst.n, -1)),
          source(2 * inst.n),
          sink(2 * inst.n + 1) {
        for (int p = 0; p < inst.n; ++p) net.add_arc(source, p, inst.load, 0.0);
        for (int r = 0; r < inst.n; ++r) net.add_arc(inst.n + r, sink, inst.load, 0.0);
        for (int p = 0; p < inst.n; ++p)
            for (int r = 0; r < inst.n; ++r)
                if (!inst.conflicted(p, r))
                    arc[p][r] = net.add_arc(p, inst.n + r, 1, -cost_scale * inst.similarity[p][r]);
    }

    ReviewAssignment decode(const ReviewInstance& inst) {
        ReviewAssignment a;
        a.assigned.assign(inst.n, {});
        for (int p = 0; p < inst.n; ++p)
            for (int r = 0; r < inst.n; ++r)
                if (arc[p][r] >= 0 && net.flow_on(arc[p][r]) == 1) a.assigned[p].push_back(r);
        return a;
    }
};

// Can the partial assignment be completed within loads and conflicts?
inline bool review_completable(const ReviewInstance& inst,
                               const std::vector<std::vector<int>>& partial) {
    const int n = inst.n;
    std::vector<int> paper_need(n, inst.load), reviewer_left(n, inst.load);
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    long long total_need = 0;
    for (int p = 0; p < n; ++p) {
        for (int r : partial[p]) {
            --paper_need[p];
            --reviewer_left[r];
            used[p][r] = true;
            if (reviewer_left[r] < 0) return false;
        }
        total_need += paper_need[p];
    }
    FlowNetwork net(2 * n + 2);
    int source = 2 * n, sink = 2 * n + 1;
    for (int p = 0; p < n; ++p)
        if (paper_need[p] > 0) net.add_arc(source, p, paper_need[p], 0.0);
    for (int r = 0; r < n; ++r)
        if (reviewer_left[r] > 0) net.add_arc(n + r, sink, reviewer_left[r], 0.0);
    for (int p = 0; p < n; ++p)
        for (int r = 0; r < n; ++r)
            if (!inst.conflicted(p, r) && !used[p][r]) net.add_arc(p, n + r, 1, 0.0);
    return net.max_flow(source, sink) == total_need;
}

template <typename Score>
ReviewAssignment review_exact_search(const ReviewInstance& inst, Score&& better) {
    const int n = inst.n;
    std::vector<std::vector<std::vector<int>>> bundles(n);
    for (int p = 0; p < n; ++p) {
        std::vector<int> allowed;
        for (int r = 0; r < n; ++r)
            if (!inst.conflicted(p, r)) allowed.push_back(r);
        std::vector<int> pick(inst.load);
        auto rec = [&](auto&& self, int start, int depth) -> void {
            if (depth == inst.load) {
                bundles[p].push_back(pick);
                return;
            }
            for (std::size_t q = start; q < allowed.size(); ++q) {
                pick[depth] = allowed[q];
                self(self, q + 1, depth + 1);
            }
        };
        rec(rec, 0, 0);
    }
    std::vector<int> reviewer_left(n, inst.load);
    std::vector<std::vector<int>> chosen(n);
    ReviewAssignment best;
    bool have = false;
    auto dfs = [&](auto&& self, int p) -> void {
        if (p == n) {
            ReviewAssignment cand{chosen};
            if (!have || better(cand, best)) {
                best = cand;
                have = true;
            }
            return;
        }
        for (const auto& bundle : bundles[p]) {
            bool ok = true;
            for (int r : bundle)
                if (reviewer_left[r] == 0) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            for (int r : bundle) --reviewer_left[r];
            chosen[p] = bundle;
            self(self, p + 1);
            for (int r : bundle) ++reviewer_left[r];
        }
        chosen[p].clear();
    };
    dfs(dfs, 0);
    require(have, "no feasible review assignment");
    return best;
}

template <typename Better>
ReviewAssignment review_local_search(const ReviewInstance& inst, ReviewAssignment start,
                                     Better&& better) {
    const int n = inst.n;
    ReviewAssignment cur = std::move(start);
    bool improved = true;
    while (improved) {
        improved = false;
        for (int p = 0; p < n && !improved; ++p) {
            for (int q = p + 1; q < n && !improved; ++q) {
                for (int a = 0; a < inst.load && !improved; ++a) {
                    for (int b = 0; b < inst.load && !improved; ++b) {
                        int ra = cur.assigned[p][a], rb = cur.assigned[q][b];
                        if (ra == rb) continue;
                        if (inst.conflicted(p, rb) || inst.conflicted(q, ra)) continue;
                        if (std::count(cur.assigned[p].begin(), cur.assigned[p].end(), rb))
                            continue;
                        if (std::count(cur.assigned[q].begin(), cur.assigned[q].end(), ra))
                            continue;
                        ReviewAssignment next = cur;
                        next.assigned[p][a] = rb;
                        next.assigned[q][b] = ra;
                        if (better(next, cur)) {
                            cur = std::move(next);
                            improved = true;
                        }
                    }
                }
            }
        }
    }
    for (auto& bundle : cur.assigned) std::sort(bundle.begin(), bundle.end());
    return cur;
}

}  // namespace detail

inline ReviewRuleResult review_tpms(const ReviewInstance& inst) {
    detail::StopWatch t;
    detail::ReviewFlowDecoder flow(inst, 1.0);
    auto res = flow.net.min_cost_flow(flow.source, flow.sink);
    require(res.flow == static_cast<long long>(inst.n) * inst.load,
            "review loads are infeasible");
    ReviewAssignment a = flow.decode(inst);
    return {"tpms", a, utilitarian_welfare(utility_vector(inst, a)), SolveStatus::Exact,
            t.seconds()};
}

// Cyclic single picks: each paper takes its best-scoring reviewer whose
// selection still leaves a feasible completion.
inline ReviewRuleResult review_rr(const ReviewInstance& inst) {
    detail::StopWatch t;
    const int n = inst.n;
    std::vector<std::vector<int>> partial(n);
    std::vector<int> reviewer_left(n, inst.load);
    for (int round = 0; round < inst.load; ++round) {
        for (int p = 0; p < n; ++p) {
            std::vector<int> candidates;
            for (int r = 0; r < n; ++r) {
                if (inst.conflicted(p, r) || reviewer_left[r] == 0) continue;
                if (std::count(partial[p].begin(), partial[p].end(), r)) continue;
                candidates.push_back(r);
            }
            std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
                return inst.similarity[p][a] > inst.similarity[p][b];
            });
            bool placed = false;
            for (int r : candidates) {
                partial[p].push_back(r);
                --reviewer_left[r];
                if (detail::review_completable(inst, partial)) {
                    placed = true;
                    break;
                }
                partial[p].pop_back();
                ++reviewer_left[r];
            }
            require(placed, "round robin could not keep the assignment feasible");
        }
    }
    for (auto& bundle : partial) std::sort(bundle.begin(), bundle.end());
    ReviewAssignment a{partial};
    return {"rr", a, utilitarian_welfare(utility_vector(inst, a)), SolveStatus::Exact,
            t.seconds()};
}

inline ReviewRuleResult review_nash(const ReviewInstance& inst, int exact_limit = 6) {
    detail::StopWatch t;
    auto log_nash = [&](const ReviewAssignment& a) {
        UtilityVector u = utility_vector(inst, a);
        double s = 0.0;
        for (double x : u) s += std::log(x);  // similarity floor keeps x positive
        return s;
    };
    if (inst.n <= exact_limit) {
        ReviewAssignment a = detail::review_exact_search(
            inst, [&](const ReviewAssignment& x, const ReviewAssignment& y) {
                return log_nash(x) > log_nash(y) + 1e-12;
            });
        return {"nash", a, nash_welfare(utility_vector(inst, a)), SolveStatus::Exact,
                t.seconds()};
    }
    ReviewAssignment a = detail::review_local_search(
        inst, review_tpms(inst).outcome,
        [&](const ReviewAssignment& x, const ReviewAssignment& y) {
            return log_nash(x) > log_nash(y) + 1e-12;
        });
    return {"nash", a, nash_welfare(utility_vector(inst, a)), SolveStatus::Heuristic,
            t.seconds()};
}

inline ReviewRuleResult review_leximin(const ReviewInstance& inst, int exact_limit = 6) {
    detail::StopWatch t;
    auto sorted_utils = [&](const ReviewAssignment& a) {
        UtilityVector u = utility_vector(inst, a);
        std::sort(u.begin(), u.end());
        return u;
    };
    auto better = [&](const ReviewAssignment& x, const ReviewAssignment& y) {
        UtilityVector a = sorted_utils(x), b = sorted_utils(y);
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k] > b[k] + 1e-12) return true;
            if (a[k] < b[k] - 1e-12) return false;
        }
        return false;
    };
    if (inst.n <= exact_limit) {
        ReviewAssignment a = detail::review_exact_search(inst, better);
        return {"leximin", a, egalitarian_welfare(utility_vector(inst, a)), SolveStatus::Exact,
                t.seconds()};
    }
    ReviewAssignment a = detail::review_local_search(inst, review_tpms(inst).outcome, better);
    return {"leximin", a, egalitarian_welfare(utility_vector(inst, a)), SolveStatus::Heuristic,
            t.seconds()};
}

inline std::vector<ReviewRuleResult> review_rules(const ReviewInstance& inst,
                                                  int exact_limit = 6) {
    std::vector<ReviewRuleResult> results;
    results.push_back(review_tpms(inst));
    results.push_back(review_nash(inst, exact_limit));
    results.push_back(review_leximin(inst, exact_limit));
    results.push_back(review_rr(inst));
    return results;
}

}  // namespace fairaudit
