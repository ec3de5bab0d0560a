#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fairaudit/common.hpp"

// Domain types shared by every other module: divisible/indivisible goods
// division, participatory budgeting, reviewer assignment, and the generic
// finite utility table. All types are immutable value types after
// construction; every operation here is pure.

namespace fairaudit {

// ---------------------------------------------------------------------------
// Private goods division

struct GoodsInstance {
    int n = 0;  // agents
    int m = 0;  // goods
    std::vector<std::vector<double>> value;  // n x m, value[i][g] >= 0
    bool divisible = false;

    void validate() const {
        require_dims(static_cast<int>(value.size()) == n, "valuation row count != n");
        for (const auto& row : value) {
            require_dims(static_cast<int>(row.size()) == m, "valuation column count != m");
            bool any_positive = false;
            for (double v : row) {
                require(v >= 0.0, "negative valuation");
                any_positive = any_positive || v > 0.0;
            }
            // An agent with an all-zero row is degenerate and should have been
            // dropped from the instance up front.
            require(any_positive, "agent values nothing");
        }
    }

    double row_sum(int i) const {
        return std::accumulate(value[i].begin(), value[i].end(), 0.0);
    }
};

struct Allocation {
    // share[i][g]: fraction of good g held by agent i; every column sums to 1
    // (all goods are fully allocated), and entries are 0/1 for indivisible
    // instances.
    std::vector<std::vector<double>> share;

    int agents() const { return static_cast<int>(share.size()); }
    int goods() const { return share.empty() ? 0 : static_cast<int>(share[0].size()); }

    void validate(const GoodsInstance& inst) const {
        require_dims(agents() == inst.n && goods() == inst.m, "allocation shape mismatch");
        for (int g = 0; g < inst.m; ++g) {
            double col = 0.0;
            for (int i = 0; i < inst.n; ++i) {
                double s = share[i][g];
                require(s >= -kFloorTol && s <= 1.0 + kFloorTol, "share outside [0,1]");
                if (!inst.divisible)
                    require(std::abs(s) < 1e-9 || std::abs(s - 1.0) < 1e-9,
                            "fractional share in indivisible instance");
                col += s;
            }
            require(std::abs(col - 1.0) < 1e-7, "good not fully allocated");
        }
    }

    static Allocation zeros(int n, int m) {
        Allocation a;
        a.share.assign(n, std::vector<double>(m, 0.0));
        return a;
    }

    // Indivisible helper: owner[g] = agent receiving good g.
    static Allocation from_owners(const std::vector<int>& owner, int n) {
        Allocation a = zeros(n, static_cast<int>(owner.size()));
        for (std::size_t g = 0; g < owner.size(); ++g) a.share[owner[g]][g] = 1.0;
        return a;
    }
};

// Agent i's value for the bundle held by agent j under allocation a.
inline double bundle_value(const GoodsInstance& inst, const Allocation& a, int i, int j) {
    double total = 0.0;
    for (int g = 0; g < inst.m; ++g) total += a.share[j][g] * inst.value[i][g];
    return total;
}

// Rescales every agent's row to sum to `target`, preserving relative values.
inline GoodsInstance normalize_valuations(const GoodsInstance& inst, double target) {
    require(target > 0.0, "normalization target must be positive");
    GoodsInstance out = inst;
    for (int i = 0; i < inst.n; ++i) {
        double s = inst.row_sum(i);
        require(s > 0.0, "cannot normalize an all-zero valuation row");
        for (int g = 0; g < inst.m; ++g) out.value[i][g] = inst.value[i][g] * target / s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Participatory budgeting

enum class PBUtilityModel { Approval, Cost };

struct PBProject {
    std::string id;
    double cost = 0.0;
};

struct PBInstance {
    std::vector<PBProject> projects;
    double budget = 0.0;
    std::vector<std::vector<int>> ballots;  // per voter: approved project indices
    PBUtilityModel utility_model = PBUtilityModel::Approval;
    // Utility floor substituted when a voter has no approved project funded;
    // 1e-2 for approval utilities and 1e-3 * budget for cost utilities.
    double epsilon_floor = 1e-2;

    static double default_floor(PBUtilityModel model, double budget) {
        return model == PBUtilityModel::Approval ? 1e-2 : 1e-3 * budget;
    }

    int num_projects() const { return static_cast<int>(projects.size()); }
    int num_voters() const { return static_cast<int>(ballots.size()); }
    bool fundable(int p) const { return projects[p].cost <= budget + kFloorTol; }

    void validate() const {
        require(budget >= 0.0, "negative budget");
        require(epsilon_floor > 0.0, "epsilon floor must be positive");
        require(!ballots.empty(), "no voters");
        for (const auto& b : ballots) {
            require(!b.empty(), "empty ballot");
            for (int p : b) require(p >= 0 && p < num_projects(), "ballot references unknown project");
        }
        for (const auto& p : projects) require(p.cost >= 0.0, "negative project cost");
    }
};

struct BudgetSelection {
    std::vector<int> funded;  // sorted project indices

    void validate(const PBInstance& inst) const {
        double total = 0.0;
        for (int p : funded) {
            require(p >= 0 && p < inst.num_projects(), "funded set references unknown project");
            total += inst.projects[p].cost;
        }
        require(total <= inst.budget + 1e-6, "funded set exceeds budget");
    }

    double total_cost(const PBInstance& inst) const {
        double total = 0.0;
        for (int p : funded) total += inst.projects[p].cost;
        return total;
    }
};

// ---------------------------------------------------------------------------
// Peer review

struct ReviewInstance {
    int n = 0;                                  // papers == reviewers
    std::vector<std::vector<double>> similarity;  // n x n, clamped to [floor, 1]
    std::set<std::pair<int, int>> conflicts;    // (paper, reviewer), self-pairs included
    int load = 3;
    double score_floor = 1e-3;

    static ReviewInstance make(int n, std::vector<std::vector<double>> sim,
                               std::set<std::pair<int, int>> extra_conflicts = {},
                               int load = 3, double score_floor = 1e-3) {
        ReviewInstance inst;
        inst.n = n;
        inst.similarity = std::move(sim);
        inst.conflicts = std::move(extra_conflicts);
        inst.load = load;
        inst.score_floor = score_floor;
        require(score_floor > 0.0, "score floor must be positive");
        require_dims(static_cast<int>(inst.similarity.size()) == n, "similarity row count");
        for (auto& row : inst.similarity) {
            require_dims(static_cast<int>(row.size()) == n, "similarity column count");
            for (double& s : row) s = std::clamp(s, score_floor, 1.0);
        }
        for (int i = 0; i < n; ++i) inst.conflicts.insert({i, i});
        return inst;
    }

    bool conflicted(int paper, int reviewer) const {
        return conflicts.count({paper, reviewer}) > 0;
    }
};

struct ReviewAssignment {
    std::vector<std::vector<int>> assigned;  // per paper: sorted reviewer ids

    void validate(const ReviewInstance& inst) const {
        require_dims(static_cast<int>(assigned.size()) == inst.n, "assignment size mismatch");
        std::vector<int> reviewer_load(inst.n, 0);
        for (int p = 0; p < inst.n; ++p) {
            require(static_cast<int>(assigned[p].size()) == inst.load, "wrong bundle size");
            std::set<int> distinct(assigned[p].begin(), assigned[p].end());
            require(static_cast<int>(distinct.size()) == inst.load, "duplicate reviewer on paper");
            for (int r : assigned[p]) {
                require(r >= 0 && r < inst.n, "unknown reviewer");
                require(!inst.conflicted(p, r), "conflicted pair used");
                ++reviewer_load[r];
            }
        }
        for (int r = 0; r < inst.n; ++r)
            require(reviewer_load[r] == inst.load, "reviewer load violated");
    }
};

// ---------------------------------------------------------------------------
// Generic finite utility table

struct FiniteUtilityTable {
    std::vector<std::pair<std::string, UtilityVector>> outcomes;

    void validate() const {
        require(!outcomes.empty(), "utility table needs at least one outcome");
        std::size_t n = outcomes.front().second.size();
        for (const auto& [label, u] : outcomes) {
            require_dims(u.size() == n, "utility vectors differ in length");
            for (double x : u) require(x >= 0.0, "negative utility");
        }
    }

    int agents() const { return static_cast<int>(outcomes.front().second.size()); }
};

// ---------------------------------------------------------------------------
// Induced utility vectors

inline UtilityVector utility_vector(const GoodsInstance& inst, const Allocation& a) {
    a.validate(inst);
    UtilityVector u(inst.n, 0.0);
    for (int i = 0; i < inst.n; ++i) u[i] = bundle_value(inst, a, i, i);
    return u;
}

inline double pb_utility(const PBInstance& inst, const std::vector<bool>& funded_mask, int voter) {
    double raw = 0.0;
    for (int p : inst.ballots[voter]) {
        if (!funded_mask[p]) continue;
        raw += inst.utility_model == PBUtilityModel::Approval ? 1.0 : inst.projects[p].cost;
    }
    return raw > 0.0 ? raw : inst.epsilon_floor;
}

inline UtilityVector utility_vector(const PBInstance& inst, const BudgetSelection& sel) {
    sel.validate(inst);
    std::vector<bool> funded_mask(inst.num_projects(), false);
    for (int p : sel.funded) funded_mask[p] = true;
    UtilityVector u(inst.num_voters(), 0.0);
    for (int i = 0; i < inst.num_voters(); ++i) u[i] = pb_utility(inst, funded_mask, i);
    return u;
}

inline UtilityVector utility_vector(const ReviewInstance& inst, const ReviewAssignment& a) {
    a.validate(inst);
    UtilityVector u(inst.n, 0.0);
    for (int p = 0; p < inst.n; ++p)
        for (int r : a.assigned[p]) u[p] += inst.similarity[p][r];
    return u;
}

// Geometric mean of utilities; zero as soon as any agent is at zero.
inline double nash_welfare(const UtilityVector& u) {
    if (u.empty()) return 0.0;
    double log_sum = 0.0;
    for (double x : u) {
        if (x <= 0.0) return 0.0;
        log_sum += std::log(x);
    }
    return std::exp(log_sum / static_cast<double>(u.size()));
}

inline double utilitarian_welfare(const UtilityVector& u) {
    return std::accumulate(u.begin(), u.end(), 0.0);
}

inline double egalitarian_welfare(const UtilityVector& u) {
    return u.empty() ? 0.0 : *std::min_element(u.begin(), u.end());
}

}  // namespace fairaudit
