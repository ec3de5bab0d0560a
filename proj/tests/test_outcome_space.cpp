#include "doctest.h"

#include <random>

#include "fairaudit/fixtures.hpp"
#include "fairaudit/outcome_space.hpp"

using namespace fairaudit;

namespace {

PBInstance tiny_pb(std::vector<double> costs, double budget) {
    PBInstance inst;
    for (std::size_t i = 0; i < costs.size(); ++i)
        inst.projects.push_back({"p" + std::to_string(i + 1), costs[i]});
    inst.budget = budget;
    inst.ballots = {{0}};
    inst.epsilon_floor = PBInstance::default_floor(PBUtilityModel::Approval, budget);
    return inst;
}

}  // namespace

TEST_CASE("budget-feasible enumeration counts") {
    CHECK(enumerate_budget_feasible(tiny_pb({1, 1}, 1)).outcomes.size() == 3);
    CHECK(enumerate_budget_feasible(tiny_pb({1, 1, 1}, 3)).outcomes.size() == 8);
    PBInstance wide = tiny_pb(std::vector<double>(15, 1.0), 100.0);
    CHECK(enumerate_budget_feasible(wide).outcomes.size() == 1u << 15);
    PBInstance too_wide = tiny_pb(std::vector<double>(21, 1.0), 100.0);
    CHECK_THROWS_AS(enumerate_budget_feasible(too_wide), ScaleCapError);
}

TEST_CASE("enumerated PB utilities respect the epsilon floor") {
    PBInstance inst = tiny_pb({1, 1}, 1);
    inst.ballots = {{0}, {1}};
    EnumeratedSpace space = enumerate_budget_feasible(inst);
    for (const auto& o : space.outcomes) {
        for (double u : o.u) CHECK(u >= inst.epsilon_floor - 1e-15);
    }
}

TEST_CASE("allocation enumeration counts") {
    GoodsInstance small;
    small.n = 2;
    small.m = 2;
    small.value = {{1, 2}, {2, 1}};
    CHECK(enumerate_allocations(small).outcomes.size() == 4);

    GoodsInstance mid;
    mid.n = 3;
    mid.m = 4;
    mid.value.assign(3, std::vector<double>(4, 1.0));
    CHECK(enumerate_allocations(mid).outcomes.size() == 81);

    GoodsInstance big;
    big.n = 3;
    big.m = 12;
    big.value.assign(3, std::vector<double>(12, 1.0));
    CHECK(enumerate_allocations(big).outcomes.size() == 531441);

    GoodsInstance divisible = small;
    divisible.divisible = true;
    CHECK_THROWS(enumerate_allocations(divisible));

    EnumerationCaps caps;
    caps.max_allocations = 80;
    CHECK_THROWS_AS(enumerate_allocations(mid, caps), ScaleCapError);
}

TEST_CASE("floor queries on the two-outcome example space") {
    OutcomeSpace space = space_from_table(example33_space());
    // agent 3 cannot improve at all when agents 1 and 2 must stay whole
    auto pinned = max_utility_with_floors(space, 2, {1.0, 1.0, -kInf});
    REQUIRE(pinned.has_value());
    CHECK(pinned->value == doctest::Approx(0.0));
    CHECK(pinned->label == "o");
    // agent 1 with only agent 3 floored at zero can reach 1
    auto open = max_utility_with_floors(space, 0, {-kInf, -kInf, 0.0});
    REQUIRE(open.has_value());
    CHECK(open->value == doctest::Approx(1.0));
    // empty floors give the unconstrained maximum
    auto unconstrained = max_utility_with_floors(space, 2, std::vector<double>(3, -kInf));
    CHECK(unconstrained->value == doctest::Approx(1.0));
    // infeasible floors
    auto impossible = max_utility_with_floors(space, 0, {-kInf, 2.0, -kInf});
    CHECK(!impossible.has_value());
}

TEST_CASE("enumerated floor query equals a direct scan") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> util(0.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        EnumeratedSpace space;
        int n = 4, count = 20;
        for (int o = 0; o < count; ++o) {
            UtilityVector u(n);
            for (double& x : u) x = util(rng);
            space.outcomes.push_back({"", std::move(u), 0});
        }
        std::vector<double> floors(n, -kInf);
        floors[1] = util(rng);
        floors[3] = util(rng);
        OutcomeSpace wrapped = space;
        auto got = max_utility_with_floors(wrapped, 0, floors);
        double want = -kInf;
        for (const auto& o : space.outcomes)
            if (o.u[1] >= floors[1] - kFloorTol && o.u[3] >= floors[3] - kFloorTol)
                want = std::max(want, o.u[0]);
        if (want == -kInf) {
            CHECK(!got.has_value());
        } else {
            REQUIRE(got.has_value());
            CHECK(got->value == doctest::Approx(want));
        }
    }
}

TEST_CASE("fractional goods polytope shape") {
    GoodsInstance inst;
    inst.n = 2;
    inst.m = 1;
    inst.divisible = true;
    inst.value = {{1}, {1}};
    PolytopeSpace space = fractional_goods_polytope(inst);
    CHECK(space.num_vars == 2);
    CHECK(space.constraints.size() == 1);

    GoodsInstance wider;
    wider.n = 3;
    wider.m = 2;
    wider.divisible = true;
    wider.value = {{1, 1}, {1, 1}, {1, 1}};
    PolytopeSpace bigger = fractional_goods_polytope(wider);
    CHECK(bigger.num_vars == 6);
    CHECK(bigger.constraints.size() == 2);
}

TEST_CASE("agent 1 can take the whole first good in the triangular instance") {
    Fig1Fixture fix = fig1_instance(4);
    OutcomeSpace space = fractional_goods_polytope(fix.instance);
    auto top = max_utility_with_floors(space, 0, std::vector<double>(4, -kInf));
    REQUIRE(top.has_value());
    CHECK(top->value == doctest::Approx(1.0));
}

TEST_CASE("max-min with a singleton group reduces to the floor query") {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> util(0.5, 5.0);
    for (int trial = 0; trial < 30; ++trial) {
        EnumeratedSpace space;
        int n = 3;
        for (int o = 0; o < 12; ++o) {
            UtilityVector u(n);
            for (double& x : u) x = util(rng);
            space.outcomes.push_back({"", std::move(u), 0});
        }
        OutcomeSpace wrapped = space;
        UtilityVector ref = space.outcomes[0].u;
        std::vector<double> floors(n, -kInf);
        floors[1] = ref[1];
        auto direct = max_utility_with_floors(wrapped, 0, floors);
        auto scaled = max_min_scaled_utility(wrapped, {0}, 0.5, floors, ref);
        REQUIRE(direct.has_value());
        REQUIRE(scaled.has_value());
        CHECK(scaled->value == doctest::Approx(0.5 * direct->value / ref[0]));
    }
}

TEST_CASE("the tightness table shows a sub-1 min-ratio for the harmed half") {
    FiniteUtilityTable table = thm43_instance(4, 0.01);
    OutcomeSpace space = space_from_table(table);
    UtilityVector ref = table.outcomes[0].second;  // utilities at o
    // S = {agents 1,2}, T = {agents 3,4}: scale 2/4
    auto res = max_min_scaled_utility(space, {0, 1}, 0.5, std::vector<double>(4, -kInf), ref);
    REQUIRE(res.has_value());
    CHECK(res->value < 1.0);
    CHECK(res->value == doctest::Approx(0.5 / (0.5 + 0.01)));
}

TEST_CASE("grid discretization never beats the polytope optimum") {
    GoodsInstance inst;
    inst.n = 2;
    inst.m = 2;
    inst.divisible = true;
    inst.value = {{2, 1}, {1, 3}};
    OutcomeSpace poly = fractional_goods_polytope(inst);
    std::vector<double> floors = {-kInf, 1.5};
    auto exact = max_utility_with_floors(poly, 0, floors);
    REQUIRE(exact.has_value());
    double prev = -kInf;
    for (int steps : {4, 8, 16, 32}) {
        EnumeratedSpace grid;
        for (int a = 0; a <= steps; ++a)
            for (int b = 0; b <= steps; ++b) {
                double f0 = static_cast<double>(a) / steps, f1 = static_cast<double>(b) / steps;
                UtilityVector u = {2 * f0 + 1 * f1, 1 * (1 - f0) + 3 * (1 - f1)};
                grid.outcomes.push_back({"", std::move(u), 0});
            }
        OutcomeSpace wrapped = grid;
        auto coarse = max_utility_with_floors(wrapped, 0, floors);
        REQUIRE(coarse.has_value());
        CHECK(coarse->value <= exact->value + 1e-9);
        CHECK(coarse->value >= prev - 1e-9);  // refinement converges upward
        prev = coarse->value;
    }
    CHECK(prev == doctest::Approx(exact->value).epsilon(0.05));
}
