#include "doctest.h"

#include <random>

#include "fairaudit/model.hpp"

using namespace fairaudit;

namespace {

GoodsInstance two_by_two() {
    GoodsInstance inst;
    inst.n = 2;
    inst.m = 2;
    inst.value = {{3, 1}, {1, 3}};
    return inst;
}

}  // namespace

TEST_CASE("goods utilities are additive over shares") {
    GoodsInstance inst = two_by_two();
    Allocation diag = Allocation::from_owners({0, 1}, 2);
    UtilityVector u = utility_vector(inst, diag);
    CHECK(u[0] == doctest::Approx(3.0));
    CHECK(u[1] == doctest::Approx(3.0));
}

TEST_CASE("splitting an allocation column and summing utilities matches the merged outcome") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> val(0.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        GoodsInstance inst;
        inst.n = 3;
        inst.m = 4;
        inst.divisible = true;
        inst.value.assign(3, std::vector<double>(4, 0.0));
        for (auto& row : inst.value) {
            for (double& v : row) v = val(rng);
            row[0] += 0.1;  // keep rows positive
        }
        // a random fractional allocation, columns summing to one
        Allocation a = Allocation::zeros(3, 4);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int g = 0; g < 4; ++g) {
            double x = unit(rng), y = unit(rng);
            double lo = std::min(x, y), hi = std::max(x, y);
            a.share[0][g] = lo;
            a.share[1][g] = hi - lo;
            a.share[2][g] = 1.0 - hi;
        }
        // split each column between two half-allocations
        Allocation b = Allocation::zeros(3, 4), c = Allocation::zeros(3, 4);
        for (int g = 0; g < 4; ++g)
            for (int i = 0; i < 3; ++i) {
                b.share[i][g] = 0.25 * a.share[i][g];
                c.share[i][g] = 0.75 * a.share[i][g];
            }
        UtilityVector u = utility_vector(inst, a);
        for (int i = 0; i < 3; ++i) {
            double split = 0.0;
            for (int g = 0; g < 4; ++g)
                split += (b.share[i][g] + c.share[i][g]) * inst.value[i][g];
            CHECK(split == doctest::Approx(u[i]));
        }
    }
}

TEST_CASE("nash welfare basics") {
    CHECK(nash_welfare({1, 1, 1}) == doctest::Approx(1.0));
    CHECK(nash_welfare({2, 8}) == doctest::Approx(4.0));
    CHECK(nash_welfare({5, 0, 3}) == 0.0);
}

TEST_CASE("nash welfare symmetry and scaling") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(0.1, 9.0);
    for (int trial = 0; trial < 30; ++trial) {
        UtilityVector u(4);
        for (double& x : u) x = val(rng);
        UtilityVector shuffled = u;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(nash_welfare(shuffled) == doctest::Approx(nash_welfare(u)));
        double c = val(rng);
        UtilityVector scaled = u;
        for (double& x : scaled) x *= c;
        CHECK(nash_welfare(scaled) == doctest::Approx(c * nash_welfare(u)));
    }
}

TEST_CASE("normalize_valuations hits the target and is idempotent") {
    GoodsInstance inst;
    inst.n = 2;
    inst.m = 2;
    inst.value = {{1, 1}, {3, 1}};
    GoodsInstance at200 = normalize_valuations(inst, 200);
    CHECK(at200.value[0][0] == doctest::Approx(100.0));
    CHECK(at200.value[0][1] == doctest::Approx(100.0));
    GoodsInstance unit = normalize_valuations(inst, 1);
    CHECK(unit.value[1][0] == doctest::Approx(0.75));
    CHECK(unit.value[1][1] == doctest::Approx(0.25));
    GoodsInstance again = normalize_valuations(at200, 200);
    for (int i = 0; i < 2; ++i)
        for (int g = 0; g < 2; ++g)
            CHECK(again.value[i][g] == doctest::Approx(at200.value[i][g]));
}

TEST_CASE("normalize_valuations rejects zero rows") {
    GoodsInstance inst;
    inst.n = 1;
    inst.m = 2;
    inst.value = {{0, 0}};
    CHECK_THROWS(normalize_valuations(inst, 1));
}

TEST_CASE("PB utilities floor at epsilon when nothing approved is funded") {
    PBInstance inst;
    inst.projects = {{"p1", 1.0}, {"p2", 1.0}};
    inst.budget = 1.0;
    inst.ballots = {{0}, {1}};
    inst.utility_model = PBUtilityModel::Approval;
    inst.epsilon_floor = PBInstance::default_floor(inst.utility_model, inst.budget);
    BudgetSelection funded{{1}};
    UtilityVector u = utility_vector(inst, funded);
    CHECK(u[0] == doctest::Approx(1e-2));  // voter 0 approved only the unfunded p1
    CHECK(u[1] == doctest::Approx(1.0));
}

TEST_CASE("cost-model floor defaults to 1e-3 of the budget") {
    CHECK(PBInstance::default_floor(PBUtilityModel::Cost, 5000.0) == doctest::Approx(5.0));
}

TEST_CASE("review similarities are clamped at construction and bundles validated") {
    ReviewInstance inst = ReviewInstance::make(
        2, {{0.5, 0.0}, {2.0, 0.5}}, {}, 1);
    CHECK(inst.similarity[0][1] == doctest::Approx(1e-3));  // clamped up
    CHECK(inst.similarity[1][0] == doctest::Approx(1.0));   // clamped down
    CHECK(inst.conflicted(0, 0));
    ReviewAssignment cross{{{1}, {0}}};
    UtilityVector u = utility_vector(inst, cross);
    CHECK(u[0] == doctest::Approx(1e-3));
    CHECK(u[1] == doctest::Approx(1.0));
    ReviewAssignment self{{{0}, {1}}};
    CHECK_THROWS(utility_vector(inst, self));
}

TEST_CASE("allocation invariants are enforced") {
    GoodsInstance inst = two_by_two();
    Allocation bad = Allocation::zeros(2, 2);
    bad.share[0][0] = 1.0;  // good 1 unallocated
    CHECK_THROWS(utility_vector(inst, bad));
    Allocation fractional = Allocation::zeros(2, 2);
    fractional.share[0][0] = 0.5;
    fractional.share[1][0] = 0.5;
    fractional.share[0][1] = 1.0;
    CHECK_THROWS(utility_vector(inst, fractional));  // indivisible instance
    inst.divisible = true;
    CHECK_NOTHROW(utility_vector(inst, fractional));
}
