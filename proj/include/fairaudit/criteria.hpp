#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/eisenberg_gale.hpp"
#include "fairaudit/model.hpp"
#include "fairaudit/outcome_space.hpp"

// Every fairness notion the library audits, over an OutcomeSpace. Ratio
// conventions are centralized here: positive/0 is +inf; 0/0 is a neutral 1
// inside group claims (the agent asserts nothing) and is excluded from the
// pairwise maxima. Reported harm values are suprema; a separate flag says
// whether a strict violation at level 1 was actually attained, which is the
// sound way to chain the hierarchy implications when ties sit exactly on the
// boundary.

namespace fairaudit {

struct HarmWitness {
    int improving = -1;                 // IHR's i (lowest improving agent for groups)
    int sacrificed = -1;                // IHR's j; -1 when a group T is recorded
    std::vector<int> improving_group;   // GHR's S
    std::vector<int> sacrificed_group;  // GHR's T
    std::string alternative;            // label of o'
    UtilityVector alternative_utilities;
    double ratio = 0.0;
};

// ---------------------------------------------------------------------------
// Individual harm ratio

struct IhrResult {
    double value = 0.0;
    std::optional<HarmWitness> witness;

    bool is_infinite() const { return is_inf(value); }
};

namespace detail {

inline UtilityVector owners_utilities(const GoodsInstance& inst, const std::vector<int>& owners) {
    UtilityVector u(inst.n, 0.0);
    for (int g = 0; g < inst.m; ++g) u[owners[g]] += inst.value[owners[g]][g];
    return u;
}

// Pairwise scan over an implicit indivisible-goods space. Every pair first
// gets a fractional-relaxation cap; pairs are then settled best-first with
// LP-dual-guided searches, so the scan stops as soon as the remaining caps
// cannot beat the incumbent claim. When the audited allocation itself is
// available, the bundle-transfer outcomes (agent i also takes j's bundle)
// seed the incumbent before any search runs.
inline IhrResult ihr_goods_exact(const GoodsInstance& inst, const UtilityVector& current,
                                 const Allocation* hint = nullptr) {
    const int n = inst.n;
    IhrResult res;
    if (hint) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                double grabbed = current[i] + bundle_value(inst, *hint, i, j);
                double claim;
                if (current[i] > 0.0)
                    claim = 0.5 * grabbed / current[i];
                else if (grabbed > kFloorTol)
                    claim = kInf;
                else
                    continue;
                if (claim <= res.value + 1e-15 && res.witness) continue;
                std::vector<int> owners(inst.m, -1);
                for (int g = 0; g < inst.m; ++g)
                    for (int k = 0; k < n; ++k)
                        if (hint->share[k][g] > 0.5) owners[g] = k == j ? i : k;
                res.value = claim;
                HarmWitness w;
                w.improving = i;
                w.sacrificed = j;
                w.alternative = "bundle-transfer";
                w.alternative_utilities = owners_utilities(inst, owners);
                w.ratio = claim;
                res.witness = w;
                if (res.is_infinite()) return res;
            }
        }
    }
    struct PairTask {
        int i, j;
        double cap;
        FloorsRelaxation rel;
        std::vector<double> floors;
    };
    std::vector<PairTask> tasks;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            PairTask task;
            task.i = i;
            task.j = j;
            task.floors.assign(current.begin(), current.end());
            task.floors[i] = -kInf;
            task.floors[j] = -kInf;
            task.rel = floors_relaxation(inst, i, task.floors);
            if (!task.rel.feasible) continue;
            if (current[i] > 0.0)
                task.cap = 0.5 * task.rel.bound / current[i];
            else if (task.rel.bound > kFloorTol)
                task.cap = kInf;
            else
                continue;  // nobody can ever lift agent i here
            tasks.push_back(std::move(task));
        }
    }
    std::stable_sort(tasks.begin(), tasks.end(), [](const PairTask& a, const PairTask& b) {
        if (a.cap != b.cap) return a.cap > b.cap;
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    for (const PairTask& task : tasks) {
        if (task.cap <= res.value + 1e-15) break;  // sorted: nothing can improve
        std::optional<FloorsMaxResult> r;
        double cand = 0.0;
        if (current[task.i] > 0.0) {
            r = goods_max_with_floors(inst, task.i, task.floors, 2.0 * res.value * current[task.i],
                                      false, task.rel.lambda);
            if (r) cand = 0.5 * r->value / current[task.i];
        } else {
            r = goods_max_with_floors(inst, task.i, task.floors, 0.0, true, task.rel.lambda);
            if (r) cand = kInf;
        }
        if (!r || cand <= res.value + 1e-15) continue;
        res.value = cand;
        HarmWitness w;
        w.improving = task.i;
        w.sacrificed = task.j;
        w.alternative = "bnb-allocation";
        w.alternative_utilities = owners_utilities(inst, r->owners);
        w.ratio = cand;
        res.witness = w;
        if (res.is_infinite()) break;
    }
    return res;
}

}  // namespace detail

// Implicit-goods entry point with the audited allocation as a search hint.
inline IhrResult ihr_goods(const GoodsInstance& inst, const Allocation& a) {
    UtilityVector current = utility_vector(inst, a);
    if (inst.n == 1) {
        IhrResult res;
        res.value = 0.5;
        return res;
    }
    return detail::ihr_goods_exact(inst, current, &a);
}

// value = max over ordered pairs i != j of (1/2) * V(i,j) / u_i(o), where
// V(i,j) maximizes i's utility over outcomes keeping everyone but i and j at
// their current utility. Pairs with u_i(o) = 0 and V = 0 assert nothing.
inline IhrResult ihr(const OutcomeSpace& space, const UtilityVector& current) {
    const int n = static_cast<int>(current.size());
    if (const auto* goods = std::get_if<GoodsExactSpace>(&space); goods && n > 1)
        return detail::ihr_goods_exact(goods->inst, current);
    IhrResult res;

    auto consider = [&](int i, int j, const std::optional<SpaceOptimum>& opt) {
        if (!opt) return false;  // infeasible floor system
        double cand;
        if (current[i] > 0.0)
            cand = 0.5 * opt->value / current[i];
        else if (opt->value > kFloorTol)
            cand = kInf;
        else
            return false;
        if (cand > res.value + 1e-15 || (!res.witness && cand >= res.value)) {
            res.value = cand;
            HarmWitness w;
            w.improving = i;
            w.sacrificed = j;
            w.alternative = opt->label;
            w.alternative_utilities = opt->utilities;
            w.ratio = cand;
            res.witness = w;
        }
        return is_inf(cand);
    };

    if (n == 1) {
        auto opt = max_utility_with_floors(space, 0, std::vector<double>(1, -kInf));
        consider(0, -1, opt);
        return res;
    }
    for (int i = 0; i < n && !res.is_infinite(); ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            std::vector<double> floors(current.begin(), current.end());
            floors[i] = -kInf;
            floors[j] = -kInf;
            if (consider(i, j, max_utility_with_floors(space, i, floors))) break;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Group harm ratio

struct GhrResult {
    double value = 1.0;
    // True when some (S, T, o') meets the level-1 conditions with a strict
    // inequality, i.e. the outcome is genuinely not 1-GHR even if the
    // supremum itself is exactly 1.
    bool strict_violation_at_one = false;
    std::optional<HarmWitness> witness;

    bool is_infinite() const { return is_inf(value); }
};

// Sort construction over an enumerated space: per alternative o', agents hurt
// by o' form T; the remaining agents, sorted by utility ratio, give the
// candidate claims (k/(k+|T|)) * r_(k) for every improving-group size k.
// Exhaustive (S,T) scans at small n validate this reconstruction.
class GhrScanner {
  public:
    GhrScanner(const EnumeratedSpace& space, const UtilityVector& current)
        : space_(space), current_(current), n_(static_cast<int>(current.size())) {
        best_.assign(n_ + 1, -kInf);
        best_outcome_.assign(n_ + 1, 0);
        best_t0_.assign(n_ + 1, 0);
        strict_at_.assign(n_ + 1, false);
        scan();
    }

    // max over candidates with k >= min_fraction * n
    GhrResult at_fraction(double min_fraction) const {
        GhrResult res;
        res.value = -kInf;
        int k_min = std::max(1, static_cast<int>(std::ceil(min_fraction * n_ - 1e-9)));
        int best_k = -1;
        for (int k = k_min; k <= n_; ++k) {
            if (best_[k] > res.value + 1e-15) {
                res.value = best_[k];
                best_k = k;
            }
            res.strict_violation_at_one = res.strict_violation_at_one || strict_at_[k];
        }
        if (best_k > 0) res.witness = build_witness(best_k);
        if (res.value == -kInf) res.value = 0.0;  // no candidate at this size
        return res;
    }

  private:
    void scan() {
        for (std::size_t idx = 0; idx < space_.outcomes.size(); ++idx) {
            const UtilityVector& w = space_.outcomes[idx].u;
            int t0 = 0;
            ratios_.clear();
            for (int i = 0; i < n_; ++i) {
                if (w[i] < current_[i] - kFloorTol)
                    ++t0;
                else
                    ratios_.push_back(safe_ratio(w[i], current_[i], 1.0));
            }
            std::sort(ratios_.begin(), ratios_.end(), std::greater<>());
            double top = ratios_.empty() ? 0.0 : ratios_.front();
            for (int k = 1; k <= static_cast<int>(ratios_.size()); ++k) {
                double scale = static_cast<double>(k) / (k + t0);
                double cand = scale * ratios_[k - 1];
                if (cand > best_[k] + 1e-15) {
                    best_[k] = cand;
                    best_outcome_[k] = idx;
                    best_t0_[k] = t0;
                }
                if (cand >= 1.0 - 1e-12 && scale * top > 1.0 + kStrictTol)
                    strict_at_[k] = true;
            }
        }
    }

    HarmWitness build_witness(int k) const {
        const auto& o = space_.outcomes[best_outcome_[k]];
        HarmWitness w;
        w.alternative = space_.label_of(best_outcome_[k]);
        w.alternative_utilities = o.u;
        w.ratio = best_[k];
        std::vector<std::pair<double, int>> keep;
        for (int i = 0; i < n_; ++i) {
            if (o.u[i] < current_[i] - kFloorTol)
                w.sacrificed_group.push_back(i);
            else
                keep.emplace_back(-safe_ratio(o.u[i], current_[i], 1.0), i);
        }
        std::stable_sort(keep.begin(), keep.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (int t = 0; t < k; ++t) w.improving_group.push_back(keep[t].second);
        std::sort(w.improving_group.begin(), w.improving_group.end());
        w.improving = w.improving_group.front();
        return w;
    }

    const EnumeratedSpace& space_;
    const UtilityVector& current_;
    int n_;
    std::vector<double> ratios_;
    std::vector<double> best_;
    std::vector<std::size_t> best_outcome_;
    std::vector<int> best_t0_;
    std::vector<bool> strict_at_;
};

inline GhrResult ghr(const EnumeratedSpace& space, const UtilityVector& current,
                     double min_group_fraction = 0.0) {
    return GhrScanner(space, current).at_fraction(min_group_fraction);
}

inline std::vector<GhrResult> ghr_curve(const EnumeratedSpace& space, const UtilityVector& current,
                                        const std::vector<double>& fractions) {
    GhrScanner scanner(space, current);
    std::vector<GhrResult> out;
    out.reserve(fractions.size());
    for (double f : fractions) out.push_back(scanner.at_fraction(f));
    return out;
}

// Exhaustive oracle: every pair of non-empty (S, T), overlap allowed, with the
// hurt set required to sit inside S union T. Feasible only for small n.
inline GhrResult ghr_exhaustive(const EnumeratedSpace& space, const UtilityVector& current,
                                double min_group_fraction = 0.0, int max_agents = 12) {
    const int n = static_cast<int>(current.size());
    if (n > max_agents) throw ScaleCapError("exhaustive (S,T) scan capped at 12 agents");
    const std::uint32_t full = (n >= 32) ? 0xffffffffu : ((1u << n) - 1);
    GhrResult res;
    res.value = -kInf;
    int k_min = std::max(1, static_cast<int>(std::ceil(min_group_fraction * n - 1e-9)));

    std::vector<double> ratio(n), minr(1u << n), maxr(1u << n);
    for (std::size_t idx = 0; idx < space.outcomes.size(); ++idx) {
        const UtilityVector& w = space.outcomes[idx].u;
        std::uint32_t hurt = 0;
        for (int i = 0; i < n; ++i) {
            ratio[i] = safe_ratio(w[i], current[i], 1.0);
            if (w[i] < current[i] - kFloorTol) hurt |= 1u << i;
        }
        minr[0] = kInf;
        maxr[0] = -kInf;
        for (std::uint32_t mask = 1; mask <= full; ++mask) {
            int low = std::countr_zero(mask);
            std::uint32_t rest = mask & (mask - 1);
            minr[mask] = std::min(minr[rest], ratio[low]);
            maxr[mask] = std::max(maxr[rest], ratio[low]);
        }
        for (std::uint32_t s = 1; s <= full; ++s) {
            int k = std::popcount(s);
            if (k < k_min) continue;
            for (std::uint32_t t = 1; t <= full; ++t) {
                std::uint32_t both = s | t;
                if (hurt & ~both) continue;  // someone outside S and T is hurt
                double scale = static_cast<double>(k) / std::popcount(both);
                double weakest = scale * minr[s];
                if (weakest >= 1.0 - 1e-12 && scale * maxr[s] > 1.0 + kStrictTol)
                    res.strict_violation_at_one = true;
                if (weakest > res.value + 1e-15) {
                    res.value = weakest;
                    HarmWitness wit;
                    wit.alternative = space.label_of(idx);
                    wit.alternative_utilities = w;
                    wit.ratio = weakest;
                    for (int i = 0; i < n; ++i) {
                        if (s >> i & 1) wit.improving_group.push_back(i);
                        if (t >> i & 1) wit.sacrificed_group.push_back(i);
                    }
                    wit.improving = wit.improving_group.front();
                    res.witness = wit;
                }
            }
        }
    }
    if (res.value == -kInf) res.value = 0.0;
    return res;
}

// Polytope spaces: one max-min LP per (S, T) pair.
inline GhrResult ghr(const PolytopeSpace& space, const UtilityVector& current,
                     double min_group_fraction = 0.0, int max_agents = 12) {
    const int n = static_cast<int>(current.size());
    if (n > max_agents) throw ScaleCapError("polytope GHR pair scan capped at 12 agents");
    const std::uint32_t full = (1u << n) - 1;
    GhrResult res;
    res.value = -kInf;
    int k_min = std::max(1, static_cast<int>(std::ceil(min_group_fraction * n - 1e-9)));
    OutcomeSpace wrapped = space;
    for (std::uint32_t s = 1; s <= full; ++s) {
        int k = std::popcount(s);
        if (k < k_min) continue;
        std::vector<int> group;
        for (int i = 0; i < n; ++i)
            if (s >> i & 1) group.push_back(i);
        for (std::uint32_t t = 1; t <= full; ++t) {
            std::uint32_t both = s | t;
            double scale = static_cast<double>(k) / std::popcount(both);
            std::vector<double> floors(n, -kInf);
            for (int i = 0; i < n; ++i)
                if (!(both >> i & 1)) floors[i] = current[i];
            auto opt = max_min_scaled_utility(wrapped, group, scale, floors, current);
            if (!opt) continue;
            if (opt->value > res.value + 1e-15) {
                res.value = opt->value;
                HarmWitness wit;
                wit.alternative = opt->label;
                wit.alternative_utilities = opt->utilities;
                wit.ratio = opt->value;
                for (int i = 0; i < n; ++i) {
                    if (s >> i & 1) wit.improving_group.push_back(i);
                    if (t >> i & 1) wit.sacrificed_group.push_back(i);
                }
                wit.improving = wit.improving_group.front();
                res.witness = wit;
            }
            if (opt->value > 1.0 + kStrictTol) res.strict_violation_at_one = true;
        }
    }
    if (res.value == -kInf) res.value = 0.0;
    return res;
}

inline GhrResult ghr(const OutcomeSpace& space, const UtilityVector& current,
                     double min_group_fraction = 0.0) {
    if (const auto* en = std::get_if<EnumeratedSpace>(&space))
        return ghr(*en, current, min_group_fraction);
    if (const auto* poly = std::get_if<PolytopeSpace>(&space))
        return ghr(*poly, current, min_group_fraction);
    throw std::invalid_argument("GHR is not available on implicit goods spaces");
}

// Equal-sized group harm ratio: the GHR sup restricted to |S| = |T|.
inline double eghr(const EnumeratedSpace& space, const UtilityVector& current,
                   int max_agents = 12) {
    const int n = static_cast<int>(current.size());
    if (n > max_agents) throw ScaleCapError("EGHR pair scan capped at 12 agents");
    const std::uint32_t full = (1u << n) - 1;
    double value = -kInf;
    std::vector<double> ratio(n), minr(1u << n);
    for (const auto& outcome : space.outcomes) {
        const UtilityVector& w = outcome.u;
        std::uint32_t hurt = 0;
        for (int i = 0; i < n; ++i) {
            ratio[i] = safe_ratio(w[i], current[i], 1.0);
            if (w[i] < current[i] - kFloorTol) hurt |= 1u << i;
        }
        minr[0] = kInf;
        for (std::uint32_t mask = 1; mask <= full; ++mask)
            minr[mask] = std::min(minr[mask & (mask - 1)], ratio[std::countr_zero(mask)]);
        for (std::uint32_t s = 1; s <= full; ++s) {
            int k = std::popcount(s);
            for (std::uint32_t t = 1; t <= full; ++t) {
                if (std::popcount(t) != k) continue;
                std::uint32_t both = s | t;
                if (hurt & ~both) continue;
                double cand = static_cast<double>(k) / std::popcount(both) * minr[s];
                value = std::max(value, cand);
            }
        }
    }
    return value == -kInf ? 0.0 : value;
}

// ---------------------------------------------------------------------------
// Proportional fairness, core, proportionality, Pareto

// max over o' of the mean utility ratio; +inf as soon as an agent at zero can
// get positive utility somewhere.
inline double pf_value(const OutcomeSpace& space, const UtilityVector& current) {
    const int n = static_cast<int>(current.size());
    if (const auto* en = std::get_if<EnumeratedSpace>(&space)) {
        double best = -kInf;
        for (const auto& o : en->outcomes) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                double r = safe_ratio(o.u[i], current[i], 1.0);
                if (is_inf(r)) {
                    sum = kInf;
                    break;
                }
                sum += r;
            }
            best = std::max(best, sum / n);
        }
        return best;
    }
    if (const auto* poly = std::get_if<PolytopeSpace>(&space)) {
        std::vector<double> weights(poly->num_vars, 0.0);
        int degenerate = 0;
        for (int i = 0; i < n; ++i) {
            if (current[i] > 0.0) {
                for (int j = 0; j < poly->num_vars; ++j)
                    weights[j] += poly->utility[i][j] / current[i];
                continue;
            }
            auto best_i = max_utility_with_floors(space, i, std::vector<double>(n, -kInf));
            if (best_i && best_i->value > kFloorTol) return kInf;
            ++degenerate;  // nobody can ever lift this agent; ratio pinned to 1
        }
        LinearProgram lp = detail::polytope_lp(*poly, weights, {});
        LpSolution sol = solve_lp(lp);
        require(sol.status == LpStatus::Optimal, "PF LP did not solve");
        return (sol.value + degenerate) / n;
    }
    const auto& goods = std::get<GoodsExactSpace>(space).inst;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        if (current[i] <= 0.0) return kInf;  // some good is worth something to i
    for (int g = 0; g < goods.m; ++g) {
        double peak = 0.0;
        for (int i = 0; i < n; ++i) peak = std::max(peak, goods.value[i][g] / current[i]);
        sum += peak;
    }
    return sum / n;
}

struct CoreResult {
    bool ok = true;
    std::vector<int> blocking_group;
    std::string alternative;
};

// Blocking coalition scan; enumerated backends check every S against every
// alternative with subset-min/max ratio tables.
inline CoreResult core_check(const OutcomeSpace& space, const UtilityVector& current,
                             int max_agents = 12) {
    const int n = static_cast<int>(current.size());
    if (n > max_agents) throw ScaleCapError("core scan capped at 12 agents");
    CoreResult res;
    if (const auto* en = std::get_if<EnumeratedSpace>(&space)) {
        const std::uint32_t full = (1u << n) - 1;
        std::vector<double> ratio(n), minr(1u << n), maxr(1u << n);
        for (std::size_t idx = 0; idx < en->outcomes.size(); ++idx) {
            const UtilityVector& w = en->outcomes[idx].u;
            for (int i = 0; i < n; ++i) ratio[i] = safe_ratio(w[i], current[i], 1.0);
            minr[0] = kInf;
            maxr[0] = -kInf;
            for (std::uint32_t mask = 1; mask <= full; ++mask) {
                std::uint32_t rest = mask & (mask - 1);
                int low = std::countr_zero(mask);
                minr[mask] = std::min(minr[rest], ratio[low]);
                maxr[mask] = std::max(maxr[rest], ratio[low]);
            }
            for (std::uint32_t s = 1; s <= full; ++s) {
                double scale = static_cast<double>(std::popcount(s)) / n;
                if (scale * minr[s] >= 1.0 - 1e-12 && scale * maxr[s] > 1.0 + kStrictTol) {
                    res.ok = false;
                    res.alternative = en->label_of(idx);
                    for (int i = 0; i < n; ++i)
                        if (s >> i & 1) res.blocking_group.push_back(i);
                    return res;
                }
            }
        }
        return res;
    }
    const auto* poly = std::get_if<PolytopeSpace>(&space);
    require(poly != nullptr, "core check needs an enumerated or polytope backend");
    OutcomeSpace wrapped = *poly;
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t s = 1; s <= full; ++s) {
        std::vector<int> group;
        for (int i = 0; i < n; ++i)
            if (s >> i & 1) group.push_back(i);
        double scale = static_cast<double>(group.size()) / n;
        auto opt = max_min_scaled_utility(wrapped, group, scale, std::vector<double>(n, -kInf),
                                          current);
        if (opt && opt->value > 1.0 + kStrictTol) {
            res.ok = false;
            res.blocking_group = group;
            res.alternative = opt->label;
            return res;
        }
    }
    return res;
}

// min over agents of u_i(o) / ((1/n) max_{o'} u_i(o')); at least 1 means
// proportional, 0 means an agent with positive potential got nothing.
inline double prop_ratio(const OutcomeSpace& space, const UtilityVector& current) {
    const int n = static_cast<int>(current.size());
    double worst = kInf;
    for (int i = 0; i < n; ++i) {
        double peak;
        if (const auto* goods = std::get_if<GoodsExactSpace>(&space)) {
            peak = goods->inst.row_sum(i);
        } else {
            auto opt = max_utility_with_floors(space, i, std::vector<double>(n, -kInf));
            require(opt.has_value(), "unconstrained maximum must exist");
            peak = opt->value;
        }
        if (peak <= 0.0) continue;  // the proportionality constraint is vacuous
        worst = std::min(worst, current[i] / (peak / n));
    }
    return worst;
}

struct ParetoResult {
    bool ok = true;
    std::string dominator;
    UtilityVector dominator_utilities;
};

inline ParetoResult pareto_check(const OutcomeSpace& space, const UtilityVector& current) {
    const int n = static_cast<int>(current.size());
    ParetoResult res;
    if (const auto* en = std::get_if<EnumeratedSpace>(&space)) {
        for (std::size_t idx = 0; idx < en->outcomes.size(); ++idx) {
            const UtilityVector& w = en->outcomes[idx].u;
            bool weak = true, strict = false;
            for (int i = 0; i < n && weak; ++i) {
                if (w[i] < current[i] - kFloorTol) weak = false;
                if (w[i] > current[i] + kStrictTol) strict = true;
            }
            if (weak && strict) {
                res.ok = false;
                res.dominator = en->label_of(idx);
                res.dominator_utilities = w;
                return res;
            }
        }
        return res;
    }
    if (const auto* poly = std::get_if<PolytopeSpace>(&space)) {
        // maximize total utility above the current floors; any surplus means a
        // dominating point exists.
        std::vector<double> total(poly->num_vars, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < poly->num_vars; ++j) total[j] += poly->utility[i][j];
        std::vector<double> floors(current.begin(), current.end());
        LinearProgram lp = detail::polytope_lp(*poly, total, floors);
        LpSolution sol = solve_lp(lp);
        require(sol.status == LpStatus::Optimal, "Pareto LP did not solve");
        double base = std::accumulate(current.begin(), current.end(), 0.0);
        if (sol.value > base + 1e-7) {
            res.ok = false;
            res.dominator = "lp-point";
            res.dominator_utilities = poly->utilities_at(sol.x);
        }
        return res;
    }
    const auto& goods = std::get<GoodsExactSpace>(space);
    for (int i = 0; i < n; ++i) {
        std::vector<double> floors(current.begin(), current.end());
        floors[i] = -kInf;
        FloorsRelaxation rel = floors_relaxation(goods.inst, i, floors);
        if (!rel.feasible || rel.bound <= current[i] + kStrictTol) continue;
        auto r = goods_max_with_floors(goods.inst, i, floors, current[i] + kStrictTol, true,
                                       rel.lambda);
        if (r) {
            res.ok = false;
            res.dominator = "bnb-allocation";
            res.dominator_utilities = detail::owners_utilities(goods.inst, r->owners);
            return res;
        }
    }
    return res;
}

// NW(outcome) / max NW over the space; 1 when the whole space sits at NW 0.
inline double nw_ratio(const OutcomeSpace& space, const UtilityVector& current) {
    double peak = 0.0;
    if (const auto* en = std::get_if<EnumeratedSpace>(&space)) {
        for (const auto& o : en->outcomes) peak = std::max(peak, nash_welfare(o.u));
    } else if (const auto* poly = std::get_if<PolytopeSpace>(&space)) {
        peak = eisenberg_gale_mnw(*poly).nash_welfare;
    } else {
        const auto& goods = std::get<GoodsExactSpace>(space);
        Allocation best = branch_and_bound_allocation(goods.inst, AllocObjective::Nash,
                                                      BnbCaps{16, 40});
        peak = nash_welfare(utility_vector(goods.inst, best));
    }
    double own = nash_welfare(current);
    if (peak <= 0.0) return 1.0;
    return own / peak;
}

// ---------------------------------------------------------------------------
// Private goods: envy-freeness, envy ratio, group fairness

struct EnvyResult {
    bool ok = true;
    int envious = -1;
    int envied = -1;
};

inline EnvyResult envy_free_check(const GoodsInstance& inst, const Allocation& a) {
    EnvyResult res;
    for (int i = 0; i < inst.n; ++i) {
        double own = bundle_value(inst, a, i, i);
        for (int j = 0; j < inst.n; ++j) {
            if (bundle_value(inst, a, i, j) > own + kStrictTol) {
                res.ok = false;
                res.envious = i;
                res.envied = j;
                return res;
            }
        }
    }
    return res;
}

// per = (1/2)(1 + max_{i,j} u_i(A_j)/u_i(A_i)); positive/0 -> inf, 0/0 -> 1.
inline double private_envy_ratio(const GoodsInstance& inst, const Allocation& a) {
    double peak = -kInf;
    for (int i = 0; i < inst.n; ++i) {
        double own = bundle_value(inst, a, i, i);
        for (int j = 0; j < inst.n; ++j)
            peak = std::max(peak, safe_ratio(bundle_value(inst, a, i, j), own, 1.0));
    }
    return 0.5 * (1.0 + peak);
}

enum class GfVerdict { Ok, Violation, NotEvaluated };

struct GroupFairResult {
    GfVerdict verdict = GfVerdict::Ok;
    std::vector<int> takers;
    std::vector<int> givers;
};

// Group fairness on finite redistributions: for groups S and T, every way of
// dividing T's goods among S, scaled by |S|/|T|. Exponential in T's bundle
// size, so only evaluated at toy scale.
inline GroupFairResult group_fair_check(const GoodsInstance& inst, const Allocation& a,
                                        int max_agents = 5, int max_goods = 8) {
    GroupFairResult res;
    if (inst.divisible || inst.n > max_agents || inst.m > max_goods) {
        res.verdict = GfVerdict::NotEvaluated;
        return res;
    }
    const int n = inst.n;
    std::vector<int> owner(inst.m, -1);
    for (int g = 0; g < inst.m; ++g)
        for (int i = 0; i < n; ++i)
            if (a.share[i][g] > 0.5) owner[g] = i;
    UtilityVector current = utility_vector(inst, a);

    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t t = 1; t <= full; ++t) {
        std::vector<int> pool;  // goods owned by T
        for (int g = 0; g < inst.m; ++g)
            if (t >> owner[g] & 1) pool.push_back(g);
        for (std::uint32_t s = 1; s <= full; ++s) {
            std::vector<int> takers;
            for (int i = 0; i < n; ++i)
                if (s >> i & 1) takers.push_back(i);
            double scale = static_cast<double>(std::popcount(s)) / std::popcount(t);
            // enumerate assignments of pool goods to takers
            std::vector<double> u(takers.size(), 0.0);
            std::vector<int> pick(pool.size(), 0);
            bool done = pool.empty();
            auto violates = [&]() {
                bool weak = true, strict = false;
                for (std::size_t q = 0; q < takers.size(); ++q) {
                    double r = scale * safe_ratio(u[q], current[takers[q]], 1.0);
                    if (r < 1.0 - 1e-12) weak = false;
                    if (r > 1.0 + kStrictTol) strict = true;
                }
                return weak && strict;
            };
            if (done && violates()) {
                res.verdict = GfVerdict::Violation;
            } else {
                for (std::size_t q = 0; q < takers.size() && !pool.empty(); ++q) u[q] = 0.0;
                for (int g : pool) u[0] += inst.value[takers[0]][g];
                while (!pool.empty()) {
                    if (violates()) {
                        res.verdict = GfVerdict::Violation;
                        break;
                    }
                    std::size_t d = 0;
                    while (d < pool.size()) {
                        int g = pool[d];
                        u[pick[d]] -= inst.value[takers[pick[d]]][g];
                        if (++pick[d] < static_cast<int>(takers.size())) {
                            u[pick[d]] += inst.value[takers[pick[d]]][g];
                            break;
                        }
                        pick[d] = 0;
                        u[0] += inst.value[takers[0]][g];
                        ++d;
                    }
                    if (d == pool.size()) break;
                }
            }
            if (res.verdict == GfVerdict::Violation) {
                res.takers = takers;
                for (int i = 0; i < n; ++i)
                    if (t >> i & 1) res.givers.push_back(i);
                return res;
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Peer review: shuffle envy ratio

// Half the best multiplicative gain paper i can get by re-splitting its own
// and paper j's reviewer bundles, all other papers fixed. The identity split
// is always available, so the value is at least 1/2.
inline double shuffle_envy_ratio(const ReviewInstance& inst, const ReviewAssignment& a) {
    UtilityVector current = utility_vector(inst, a);
    const int load = inst.load;
    double best = 0.5;
    for (int i = 0; i < inst.n; ++i) {
        for (int j = 0; j < inst.n; ++j) {
            if (i == j) continue;
            std::vector<int> combined = a.assigned[i];
            combined.insert(combined.end(), a.assigned[j].begin(), a.assigned[j].end());
            const int total = static_cast<int>(combined.size());
            double best_take = -kInf;
            for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
                if (std::popcount(mask) != load) continue;
                bool ok = true;
                double take = 0.0;
                std::vector<int> mine, theirs;
                for (int q = 0; q < total && ok; ++q) {
                    if (mask >> q & 1) {
                        if (inst.conflicted(i, combined[q])) ok = false;
                        mine.push_back(combined[q]);
                        take += inst.similarity[i][combined[q]];
                    } else {
                        if (inst.conflicted(j, combined[q])) ok = false;
                        theirs.push_back(combined[q]);
                    }
                }
                if (!ok) continue;
                std::sort(mine.begin(), mine.end());
                std::sort(theirs.begin(), theirs.end());
                if (std::adjacent_find(mine.begin(), mine.end()) != mine.end()) continue;
                if (std::adjacent_find(theirs.begin(), theirs.end()) != theirs.end()) continue;
                best_take = std::max(best_take, take);
            }
            if (best_take > -kInf)
                best = std::max(best, 0.5 * safe_ratio(best_take, current[i], 1.0));
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Witness replay

// A witness must reproduce its claim from the recorded alternative alone:
// floors respected, ratio matched.
inline bool replay_witness(const UtilityVector& current, const HarmWitness& w) {
    const int n = static_cast<int>(current.size());
    const UtilityVector& alt = w.alternative_utilities;
    if (static_cast<int>(alt.size()) != n) return false;
    if (!w.improving_group.empty()) {
        std::vector<bool> exempt(n, false);
        for (int i : w.improving_group) exempt[i] = true;
        for (int i : w.sacrificed_group) exempt[i] = true;
        for (int k = 0; k < n; ++k)
            if (!exempt[k] && alt[k] < current[k] - kFloorTol) return false;
        double scale = static_cast<double>(w.improving_group.size());
        std::vector<bool> member(n, false);
        for (int i : w.improving_group) member[i] = true;
        int union_size = 0;
        for (int k = 0; k < n; ++k)
            if (member[k] || std::count(w.sacrificed_group.begin(), w.sacrificed_group.end(), k))
                ++union_size;
        scale /= union_size;
        double weakest = kInf;
        for (int i : w.improving_group)
            weakest = std::min(weakest, scale * safe_ratio(alt[i], current[i], 1.0));
        if (is_inf(w.ratio)) return is_inf(weakest);
        return std::abs(weakest - w.ratio) <= 1e-9 * std::max(1.0, std::abs(w.ratio));
    }
    // pairwise witness
    for (int k = 0; k < n; ++k) {
        if (k == w.improving || k == w.sacrificed) continue;
        if (alt[k] < current[k] - kFloorTol) return false;
    }
    double got = 0.5 * safe_ratio(alt[w.improving], current[w.improving], 0.0);
    if (is_inf(w.ratio)) return is_inf(got);
    return std::abs(got - w.ratio) <= 1e-9 * std::max(1.0, std::abs(w.ratio));
}

}  // namespace fairaudit
