#include "doctest.h"

#include <random>

#include "fairaudit/alloc_search.hpp"
#include "fairaudit/model.hpp"

using namespace fairaudit;

namespace {

GoodsInstance random_goods(std::mt19937_64& rng, int n, int m, int peak = 9) {
    std::uniform_int_distribution<int> val(0, peak);
    GoodsInstance inst;
    inst.n = n;
    inst.m = m;
    inst.value.assign(n, std::vector<double>(m, 0.0));
    for (auto& row : inst.value) {
        bool positive = false;
        for (double& v : row) {
            v = val(rng);
            positive = positive || v > 0;
        }
        if (!positive) row[rng() % m] = 1 + static_cast<int>(rng() % peak);
    }
    return inst;
}

detail::NashValue scan_best_nash(const GoodsInstance& inst) {
    detail::NashValue best;
    for_each_allocation(inst.n, inst.m, [&](const std::vector<int>& owners) {
        UtilityVector u(inst.n, 0.0);
        for (int g = 0; g < inst.m; ++g) u[owners[g]] += inst.value[owners[g]][g];
        detail::NashValue v = detail::nash_value(u);
        if (v.better_than(best)) best = v;
    });
    return best;
}

}  // namespace

TEST_CASE("dominant diagonal assignment") {
    GoodsInstance inst;
    inst.n = 2;
    inst.m = 2;
    inst.value = {{3, 1}, {1, 3}};
    for (auto obj : {AllocObjective::Nash, AllocObjective::Egalitarian}) {
        Allocation a = branch_and_bound_allocation(inst, obj);
        UtilityVector u = utility_vector(inst, a);
        CHECK(u[0] == doctest::Approx(3.0));
        CHECK(u[1] == doctest::Approx(3.0));
    }
}

TEST_CASE("single contested good: Nash maximizes the positive count tier") {
    GoodsInstance inst;
    inst.n = 2;
    inst.m = 1;
    inst.value = {{1}, {1}};
    Allocation a = branch_and_bound_allocation(inst, AllocObjective::Nash);
    UtilityVector u = utility_vector(inst, a);
    CHECK(u[0] + u[1] == doctest::Approx(1.0));
    CHECK(std::max(u[0], u[1]) == doctest::Approx(1.0));
}

TEST_CASE("Nash branch and bound equals exhaustive scan") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        GoodsInstance inst = random_goods(rng, 3, 5);
        Allocation a = branch_and_bound_allocation(inst, AllocObjective::Nash);
        detail::NashValue got = detail::nash_value(utility_vector(inst, a));
        detail::NashValue want = scan_best_nash(inst);
        CHECK(got.positive == want.positive);
        CHECK(got.log_product == doctest::Approx(want.log_product).epsilon(1e-9));
    }
}

TEST_CASE("egalitarian branch and bound equals exhaustive scan") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        GoodsInstance inst = random_goods(rng, 3, 5);
        Allocation a = branch_and_bound_allocation(inst, AllocObjective::Egalitarian);
        double got = egalitarian_welfare(utility_vector(inst, a));
        double want = -kInf;
        for_each_allocation(3, 5, [&](const std::vector<int>& owners) {
            UtilityVector u(3, 0.0);
            for (int g = 0; g < 5; ++g) u[owners[g]] += inst.value[owners[g]][g];
            want = std::max(want, egalitarian_welfare(u));
        });
        CHECK(got == doctest::Approx(want));
    }
}

TEST_CASE("floors-constrained maximization equals filtered scan") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 60; ++trial) {
        GoodsInstance inst = random_goods(rng, 3, 5);
        // floors from some concrete allocation so the system is feasible
        std::vector<int> owners(5);
        for (int& o : owners) o = static_cast<int>(rng() % 3);
        UtilityVector base(3, 0.0);
        for (int g = 0; g < 5; ++g) base[owners[g]] += inst.value[owners[g]][g];
        int target = static_cast<int>(rng() % 3);
        std::vector<double> floors(base.begin(), base.end());
        floors[target] = -kInf;
        int exempt = (target + 1) % 3;
        floors[exempt] = -kInf;

        auto got = goods_max_with_floors(inst, target, floors);
        REQUIRE(got.has_value());
        double want = -kInf;
        for_each_allocation(3, 5, [&](const std::vector<int>& o) {
            UtilityVector u(3, 0.0);
            for (int g = 0; g < 5; ++g) u[o[g]] += inst.value[o[g]][g];
            for (int k = 0; k < 3; ++k)
                if (std::isfinite(floors[k]) && u[k] < floors[k] - kFloorTol) return;
            want = std::max(want, u[target]);
        });
        CHECK(got->value == doctest::Approx(want));
    }
}

TEST_CASE("floors maximization reports infeasible systems") {
    GoodsInstance inst;
    inst.n = 2;
    inst.m = 1;
    inst.value = {{1}, {1}};
    auto res = goods_max_with_floors(inst, 0, {-kInf, 2.0});
    CHECK(!res.has_value());
}

TEST_CASE("leximin matches exhaustive sorted-vector comparison") {
    std::mt19937_64 rng(53);
    auto sorted_utilities = [](UtilityVector u) {
        std::sort(u.begin(), u.end());
        return u;
    };
    for (int trial = 0; trial < 25; ++trial) {
        GoodsInstance inst = random_goods(rng, 3, 4);
        Allocation a = leximin_allocation(inst);
        UtilityVector got = sorted_utilities(utility_vector(inst, a));
        UtilityVector best;
        for_each_allocation(3, 4, [&](const std::vector<int>& o) {
            UtilityVector u(3, 0.0);
            for (int g = 0; g < 4; ++g) u[o[g]] += inst.value[o[g]][g];
            std::sort(u.begin(), u.end());
            if (best.empty() ||
                std::lexicographical_compare(best.begin(), best.end(), u.begin(), u.end()))
                best = u;
        });
        for (int i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(best[i]).epsilon(1e-9));
    }
}

TEST_CASE("floor relaxation bound dominates the exact search and its duals are tight") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 30; ++trial) {
        GoodsInstance inst = random_goods(rng, 3, 5);
        std::vector<int> owners(5);
        for (int& o : owners) o = static_cast<int>(rng() % 3);
        UtilityVector base(3, 0.0);
        for (int g = 0; g < 5; ++g) base[owners[g]] += inst.value[owners[g]][g];
        std::vector<double> floors = {-kInf, base[1], base[2]};
        FloorsRelaxation rel = floors_relaxation(inst, 0, floors);
        REQUIRE(rel.feasible);
        auto exact = goods_max_with_floors(inst, 0, floors, -kInf, false, rel.lambda);
        REQUIRE(exact.has_value());
        CHECK(rel.bound >= exact->value - 1e-7);
        // at optimal duals, the root Lagrangian equals the LP bound
        double root = 0.0;
        for (int g = 0; g < inst.m; ++g) {
            double phi = inst.value[0][g];
            for (int k = 1; k < 3; ++k) phi = std::max(phi, rel.lambda[k] * inst.value[k][g]);
            root += phi;
        }
        for (int k = 1; k < 3; ++k) root -= rel.lambda[k] * floors[k];
        CHECK(root == doctest::Approx(rel.bound).epsilon(1e-6));
        // guided and unguided searches agree
        auto plain = goods_max_with_floors(inst, 0, floors);
        REQUIRE(plain.has_value());
        CHECK(plain->value == doctest::Approx(exact->value));
    }
}

TEST_CASE("scale caps are enforced") {
    GoodsInstance inst;
    inst.n = 2;
    inst.m = 3;
    inst.value = {{1, 1, 1}, {1, 1, 1}};
    BnbCaps caps;
    caps.max_goods = 2;
    CHECK_THROWS_AS(branch_and_bound_allocation(inst, AllocObjective::Nash, caps), ScaleCapError);
}

TEST_CASE("for_each_allocation visits n^m owner vectors") {
    int count = 0;
    for_each_allocation(3, 4, [&](const std::vector<int>&) { ++count; });
    CHECK(count == 81);
}
