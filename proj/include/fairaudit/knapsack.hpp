#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fairaudit/common.hpp"

namespace fairaudit {

struct KnapsackResult {
    double value = 0.0;
    std::vector<int> chosen;  // sorted item indices
};

namespace detail {

// Rescale real costs to integers. Pabulib costs are integral already; generic
// rationals get a decimal scale, capped so the DP table stays small.
inline bool integerize(const std::vector<double>& costs, double budget,
                       std::vector<std::int64_t>& icosts, std::int64_t& ibudget) {
    for (double scale : {1.0, 10.0, 100.0, 1000.0, 1e4, 1e5, 1e6}) {
        if (budget * scale > 2e7) return false;
        bool ok = true;
        icosts.clear();
        for (double c : costs) {
            double scaled = c * scale;
            if (std::abs(scaled - std::round(scaled)) > 1e-6 * std::max(1.0, scaled)) {
                ok = false;
                break;
            }
            icosts.push_back(static_cast<std::int64_t>(std::llround(scaled)));
        }
        if (ok) {
            ibudget = static_cast<std::int64_t>(std::floor(budget * scale + 1e-9));
            return true;
        }
    }
    return false;
}

inline KnapsackResult knapsack_enumerate(const std::vector<double>& costs,
                                         const std::vector<double>& values, double budget) {
    int n = static_cast<int>(costs.size());
    require(n <= 30, "knapsack fallback enumeration limited to 30 items");
    KnapsackResult best;
    best.value = -1.0;
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double cost = 0.0, value = 0.0;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) {
                cost += costs[i];
                value += values[i];
            }
        if (cost > budget + 1e-9) continue;
        // Lexicographically smallest index set on value ties: a set containing
        // earlier indices compares smaller.
        auto lex_smaller = [&](std::uint32_t a, std::uint32_t b) {
            for (int i = 0; i < n; ++i) {
                bool ai = a >> i & 1, bi = b >> i & 1;
                if (ai != bi) return ai;
            }
            return false;
        };
        if (value > best.value + 1e-12 ||
            (value > best.value - 1e-12 && lex_smaller(mask, best_mask))) {
            best.value = value;
            best_mask = mask;
        }
    }
    best.chosen.clear();
    for (int i = 0; i < n; ++i)
        if (best_mask >> i & 1) best.chosen.push_back(i);
    if (best.value < 0.0) best.value = 0.0;
    return best;
}

}  // namespace detail

// Exact 0/1 knapsack. Ties between optimal subsets break toward the
// lexicographically smallest index set.
inline KnapsackResult knapsack_max_value(const std::vector<double>& costs,
                                         const std::vector<double>& values, double budget) {
    require_dims(costs.size() == values.size(), "knapsack cost/value size mismatch");
    for (double c : costs) require(c >= 0.0, "negative knapsack cost");
    for (double v : values) require(v >= 0.0, "negative knapsack value");
    int n = static_cast<int>(costs.size());
    if (n == 0) return {};

    std::vector<std::int64_t> icosts;
    std::int64_t ibudget = 0;
    if (!detail::integerize(costs, budget, icosts, ibudget))
        return detail::knapsack_enumerate(costs, values, budget);

    // Suffix DP: best[i][b] = max value using items i.. within capacity b.
    // Walking forward and preferring inclusion yields the lexicographically
    // smallest optimal subset.
    std::size_t width = static_cast<std::size_t>(ibudget) + 1;
    std::vector<std::vector<double>> best(n + 1, std::vector<double>(width, 0.0));
    for (int i = n - 1; i >= 0; --i) {
        for (std::int64_t b = 0; b <= ibudget; ++b) {
            double skip = best[i + 1][b];
            double take = icosts[i] <= b ? values[i] + best[i + 1][b - icosts[i]] : -1.0;
            best[i][b] = std::max(skip, take);
        }
    }
    KnapsackResult res;
    res.value = best[0][ibudget];
    std::int64_t b = ibudget;
    for (int i = 0; i < n; ++i) {
        if (icosts[i] <= b &&
            values[i] + best[i + 1][b - icosts[i]] >= best[i][b] - 1e-9) {
            res.chosen.push_back(i);
            b -= icosts[i];
        }
    }
    return res;
}

}  // namespace fairaudit
