#include "doctest.h"

#include <random>

#include "fairaudit/criteria.hpp"
#include "fairaudit/eisenberg_gale.hpp"
#include "fairaudit/outcome_space.hpp"

using namespace fairaudit;

namespace {

GoodsInstance divisible(int n, int m, std::vector<std::vector<double>> v) {
    GoodsInstance inst;
    inst.n = n;
    inst.m = m;
    inst.divisible = true;
    inst.value = std::move(v);
    return inst;
}

}  // namespace

TEST_CASE("single good, two equal agents: an even split") {
    PolytopeSpace space = fractional_goods_polytope(divisible(2, 1, {{1}, {1}}));
    EgResult res = eisenberg_gale_mnw(space);
    CHECK(res.converged);
    CHECK(res.utilities[0] == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(res.utilities[1] == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(res.pf_bound <= 1.0 + 1e-6);
}

TEST_CASE("orthogonal interests: everyone gets their own good") {
    PolytopeSpace space = fractional_goods_polytope(divisible(2, 2, {{1, 0}, {0, 1}}));
    EgResult res = eisenberg_gale_mnw(space);
    CHECK(res.utilities[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(res.utilities[1] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("2x2 crossed values match a grid-search optimum") {
    PolytopeSpace space = fractional_goods_polytope(divisible(2, 2, {{2, 1}, {1, 2}}));
    EgResult res = eisenberg_gale_mnw(space);
    double best = 0.0;
    const int steps = 400;
    for (int a = 0; a <= steps; ++a)
        for (int b = 0; b <= steps; ++b) {
            double f0 = static_cast<double>(a) / steps, f1 = static_cast<double>(b) / steps;
            double u0 = 2 * f0 + f1, u1 = (1 - f0) + 2 * (1 - f1);
            best = std::max(best, nash_welfare({u0, u1}));
        }
    CHECK(res.nash_welfare >= best - 1e-4);
    CHECK(res.utilities[0] == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(res.utilities[1] == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("EG output beats thousands of random feasible utility points") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> val(0.1, 5.0);
    GoodsInstance inst = divisible(3, 4, {});
    inst.value.assign(3, std::vector<double>(4, 0.0));
    for (auto& row : inst.value)
        for (double& v : row) v = val(rng);
    PolytopeSpace space = fractional_goods_polytope(inst);
    EgResult res = eisenberg_gale_mnw(space);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
        UtilityVector u(3, 0.0);
        for (int g = 0; g < 4; ++g) {
            double x = unit(rng), y = unit(rng);
            double lo = std::min(x, y), hi = std::max(x, y);
            double shares[3] = {lo, hi - lo, 1.0 - hi};
            for (int i = 0; i < 3; ++i) u[i] += shares[i] * inst.value[i][g];
        }
        CHECK(nash_welfare(u) <= res.nash_welfare + 1e-7);
    }
}

TEST_CASE("EG rejects agents who can never earn utility") {
    PolytopeSpace space = fractional_goods_polytope(divisible(2, 1, {{1}, {1}}));
    space.utility[1] = {0.0, 0.0};  // identically-zero functional
    CHECK_THROWS(eisenberg_gale_mnw(space));
}

TEST_CASE("approx PF certifies the requested tolerance") {
    PolytopeSpace space = fractional_goods_polytope(divisible(2, 1, {{1}, {1}}));
    ApproxPfResult res = approx_pf_solve(space, 0.01);
    CHECK(res.certified);
    CHECK(res.pf_bound <= 1.01);
    CHECK(res.utilities[0] == doctest::Approx(0.5).epsilon(0.011));
    CHECK(res.utilities[1] == doctest::Approx(0.5).epsilon(0.011));
}

TEST_CASE("huge epsilon returns the proportional starting point immediately") {
    PolytopeSpace space = fractional_goods_polytope(divisible(2, 2, {{3, 1}, {1, 3}}));
    ApproxPfResult res = approx_pf_solve(space, 10.0);
    CHECK(res.certified);
    // proportionality of the returned point: everyone gets at least max/n
    OutcomeSpace wrapped = space;
    CHECK(prop_ratio(wrapped, res.utilities) >= 1.0 - 1e-9);
}

TEST_CASE("EG PF certificate matches an independent LP audit") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> val(0.2, 4.0);
    for (int trial = 0; trial < 10; ++trial) {
        GoodsInstance inst = divisible(3, 3, {});
        inst.value.assign(3, std::vector<double>(3, 0.0));
        for (auto& row : inst.value)
            for (double& v : row) v = val(rng);
        PolytopeSpace space = fractional_goods_polytope(inst);
        EgResult res = eisenberg_gale_mnw(space, 1e-8);
        OutcomeSpace wrapped = space;
        double audited = pf_value(wrapped, res.utilities);
        CHECK(audited <= 1.0 + 1e-6);
    }
}
