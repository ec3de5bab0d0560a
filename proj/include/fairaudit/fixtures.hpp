#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/model.hpp"

// Worked instances and hardness gadgets used as reusable test fixtures:
// the lower-triangular divisible instance whose EF allocation hides an n/2
// harm ratio, the two-outcome table separating 1-IHR from proportionality,
// the tight Nash-welfare-approximation table, and the 3-Partition reduction
// gadget with its circled allocation.

namespace fairaudit {

struct Fig1Fixture {
    GoodsInstance instance;
    Allocation blue;  // divides good 1 equally, gives good j to agent j
    Allocation red;   // gives good i to agent i (i != 2), splits good 2 among agents 3..n
};

// Agent i values goods 1..i at 1 (1-based); n >= 3, divisible.
inline Fig1Fixture fig1_instance(int n) {
    require(n >= 3, "fig1 instance needs n >= 3");
    Fig1Fixture fix;
    fix.instance.n = n;
    fix.instance.m = n;
    fix.instance.divisible = true;
    fix.instance.value.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int g = 0; g <= i; ++g) fix.instance.value[i][g] = 1.0;

    fix.blue = Allocation::zeros(n, n);
    for (int i = 0; i < n; ++i) fix.blue.share[i][0] = 1.0 / n;
    for (int j = 1; j < n; ++j) fix.blue.share[j][j] = 1.0;

    fix.red = Allocation::zeros(n, n);
    fix.red.share[0][0] = 1.0;
    for (int i = 2; i < n; ++i) {
        fix.red.share[i][i] = 1.0;
        fix.red.share[i][1] = 1.0 / (n - 2);
    }
    return fix;
}

// Two outcomes, three agents: (1,1,0) against (0.1,0.1,1). The first outcome
// is 1-IHR yet gives agent 3 a zero approximation of proportionality.
inline FiniteUtilityTable example33_space() {
    FiniteUtilityTable table;
    table.outcomes.push_back({"o", {1.0, 1.0, 0.0}});
    table.outcomes.push_back({"o'", {0.1, 0.1, 1.0}});
    return table;
}

// Tightness instance for the Nash welfare approximation of 1-GHR outcomes:
// u_i(o) = i/(ceil(n/2)+i) + eps for i <= floor(n/2), 1+eps above, against
// the all-ones outcome o*.
inline FiniteUtilityTable thm43_instance(int n, double eps) {
    require(n >= 2, "thm43 instance needs n >= 2");
    require(eps > 0.0 && eps < 0.5, "eps must lie in (0, 1/2)");
    int half_up = (n + 1) / 2;
    int half_down = n / 2;
    FiniteUtilityTable table;
    UtilityVector u(n, 0.0);
    for (int i = 1; i <= n; ++i)
        u[i - 1] = i <= half_down ? static_cast<double>(i) / (half_up + i) + eps : 1.0 + eps;
    table.outcomes.push_back({"o", std::move(u)});
    table.outcomes.push_back({"o*", UtilityVector(n, 1.0)});
    return table;
}

inline double nw_approx_bound(int n) {
    // binom(n, floor(n/2))^(-1/n)
    double log_binom = std::lgamma(n + 1.0) - std::lgamma(n / 2 + 1.0) - std::lgamma(n - n / 2 + 1.0);
    return std::exp(-log_binom / n);
}

// ---------------------------------------------------------------------------
// 3-Partition gadget

struct ThreePartitionGadget {
    GoodsInstance instance;
    Allocation circled;  // the allocation whose 1-IHR status encodes the 3-Partition answer
    int d = 0;
    double eps = 0.0;
    // agent blocks
    int y_begin = 0, z_begin = 0, w1 = 0, w2 = 0;
    // good blocks: G1..G5 then the lone extra good
    int g1 = 0, g2 = 0, g3 = 0, g4 = 0, g5 = 0, g_star = 0;
};

// Numbers c (|c| = 3d, each in (1/4, 1/2)) become the Z agents' values for the
// G1 goods; m = 11d+1 goods, n = 4d+2 agents.
inline ThreePartitionGadget three_partition_gadget(const std::vector<double>& c, double eps = 0.1) {
    require(!c.empty() && c.size() % 3 == 0, "need a multiset of 3d numbers");
    require(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
    for (double x : c) require(x > 0.25 && x < 0.5, "3-Partition numbers must lie in (1/4, 1/2)");
    const int d = static_cast<int>(c.size()) / 3;
    ThreePartitionGadget gadget;
    gadget.d = d;
    gadget.eps = eps;
    const int n = 4 * d + 2;
    const int m = 11 * d + 1;
    gadget.y_begin = 0;
    gadget.z_begin = 3 * d;
    gadget.w1 = 4 * d;
    gadget.w2 = 4 * d + 1;
    gadget.g1 = 0;
    gadget.g2 = 3 * d;
    gadget.g3 = 4 * d;
    gadget.g4 = 5 * d;
    gadget.g5 = 8 * d;
    gadget.g_star = 11 * d;

    GoodsInstance& inst = gadget.instance;
    inst.n = n;
    inst.m = m;
    inst.divisible = false;
    inst.value.assign(n, std::vector<double>(m, 0.0));
    for (int i = 0; i < 3 * d; ++i) {
        inst.value[gadget.y_begin + i][gadget.g1 + i] = 1.0;
        inst.value[gadget.y_begin + i][gadget.g4 + i] = 1.0 - eps;
        inst.value[gadget.y_begin + i][gadget.g5 + i] = eps;
    }
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < 3 * d; ++j) inst.value[gadget.z_begin + i][gadget.g1 + j] = c[j];
        inst.value[gadget.z_begin + i][gadget.g2 + i] = 1.0;
        inst.value[gadget.z_begin + i][gadget.g3 + i] = static_cast<double>(d);
    }
    for (int j = 0; j < d; ++j) inst.value[gadget.w1][gadget.g2 + j] = 2.0;
    for (int j = 0; j < 3 * d; ++j) inst.value[gadget.w1][gadget.g4 + j] = 1.0 / 3.0;
    inst.value[gadget.w1][gadget.g_star] = eps;
    for (int j = 0; j < 3 * d; ++j) inst.value[gadget.w2][gadget.g5 + j] = eps;
    inst.value[gadget.w2][gadget.g_star] = eps;

    Allocation& a = gadget.circled;
    a = Allocation::zeros(n, m);
    for (int i = 0; i < 3 * d; ++i) a.share[gadget.y_begin + i][gadget.g1 + i] = 1.0;
    for (int i = 0; i < d; ++i) {
        a.share[gadget.z_begin + i][gadget.g2 + i] = 1.0;
        a.share[gadget.z_begin + i][gadget.g3 + i] = 1.0;
    }
    for (int j = 0; j < 3 * d; ++j) a.share[gadget.w1][gadget.g4 + j] = 1.0;
    for (int j = 0; j < 3 * d; ++j) a.share[gadget.w2][gadget.g5 + j] = 1.0;
    a.share[gadget.w2][gadget.g_star] = 1.0;
    return gadget;
}

// The proof's alternative allocation, built from a concrete 3-Partition
// solution (triplets[i] indexes c, each triplet summing to exactly 1).
// Witnesses the 1-IHR violation of the circled allocation: w1 more than
// doubles, only w2 loses.
inline Allocation three_partition_witness(const ThreePartitionGadget& gadget,
                                          const std::vector<std::vector<int>>& triplets) {
    const int d = gadget.d;
    require(static_cast<int>(triplets.size()) == d, "need d triplets");
    Allocation a = Allocation::zeros(gadget.instance.n, gadget.instance.m);
    for (int i = 0; i < 3 * d; ++i) {
        a.share[gadget.y_begin + i][gadget.g4 + i] = 1.0;
        a.share[gadget.y_begin + i][gadget.g5 + i] = 1.0;
    }
    for (int i = 0; i < d; ++i) {
        a.share[gadget.z_begin + i][gadget.g3 + i] = 1.0;
        require(triplets[i].size() == 3, "triplets must have three members");
        for (int j : triplets[i]) a.share[gadget.z_begin + i][gadget.g1 + j] = 1.0;
    }
    for (int j = 0; j < d; ++j) a.share[gadget.w1][gadget.g2 + j] = 1.0;
    a.share[gadget.w1][gadget.g_star] = 1.0;
    return a;
}

}  // namespace fairaudit
