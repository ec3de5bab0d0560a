#include "doctest.h"

#include <random>

#include "fairaudit/simplex.hpp"

using namespace fairaudit;

namespace {

LinearProgram max_single(double bound) {
    LinearProgram lp;
    lp.objective = {1.0};
    lp.constraints.push_back({{1.0}, Sense::Le, bound});
    return lp;
}

}  // namespace

TEST_CASE("one-variable basics") {
    LpSolution sol = solve_lp(max_single(5.0));
    CHECK(sol.status == LpStatus::Optimal);
    CHECK(sol.value == doctest::Approx(5.0));

    LpSolution infeasible = solve_lp(max_single(-1.0));
    CHECK(infeasible.status == LpStatus::Infeasible);

    LinearProgram unbounded;
    unbounded.objective = {1.0};
    LpSolution ub = solve_lp(unbounded);
    CHECK(ub.status == LpStatus::Unbounded);
}

TEST_CASE("budget line: max u1 subject to u2 >= 0.5 on a shared good") {
    // x1 + x2 = 1, maximize x1 with x2 >= 0.5
    LinearProgram lp;
    lp.objective = {1.0, 0.0};
    lp.constraints.push_back({{1.0, 1.0}, Sense::Eq, 1.0});
    lp.constraints.push_back({{0.0, 1.0}, Sense::Ge, 0.5});
    LpSolution sol = solve_lp(lp);
    CHECK(sol.status == LpStatus::Optimal);
    CHECK(sol.value == doctest::Approx(0.5));
}

TEST_CASE("equality rows and upper bounds") {
    LinearProgram lp;
    lp.objective = {2.0, 3.0, 1.0};
    lp.lower = {0.0, 0.0, 0.0};
    lp.upper = {1.0, 2.0, kInf};
    lp.constraints.push_back({{1.0, 1.0, 1.0}, Sense::Eq, 3.0});
    lp.constraints.push_back({{0.0, 1.0, 2.0}, Sense::Le, 4.0});
    LpSolution sol = solve_lp(lp);
    CHECK(sol.status == LpStatus::Optimal);
    CHECK(sol.value == doctest::Approx(2.0 * 1 + 3.0 * 2 + 0.0));
}

TEST_CASE("duality gap is closed on random feasible LPs") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coeff(0.1, 4.0);
    std::uniform_int_distribution<int> dim(1, 6);
    int optimal_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int n = dim(rng), m = dim(rng);
        LinearProgram lp;
        lp.objective.resize(n);
        for (double& c : lp.objective) c = coeff(rng);
        for (int r = 0; r < m; ++r) {
            LinearConstraint con;
            con.coeff.resize(n);
            for (double& a : con.coeff) a = coeff(rng);
            con.rhs = coeff(rng) * n;
            con.sense = Sense::Le;
            lp.constraints.push_back(std::move(con));
        }
        LpSolution sol = solve_lp(lp);
        REQUIRE(sol.status == LpStatus::Optimal);  // box is feasible, rows cap it
        ++optimal_seen;
        CHECK(std::abs(sol.dual_objective() - sol.value) < 1e-6 * std::max(1.0, sol.value));
        for (double y : sol.le_duals) CHECK(y > -1e-7);
    }
    CHECK(optimal_seen == 200);
}

TEST_CASE("degenerate LP still terminates") {
    // classic cycling-prone structure
    LinearProgram lp;
    lp.objective = {0.75, -150.0, 0.02, -6.0};
    lp.constraints.push_back({{0.25, -60.0, -0.04, 9.0}, Sense::Le, 0.0});
    lp.constraints.push_back({{0.5, -90.0, -0.02, 3.0}, Sense::Le, 0.0});
    lp.constraints.push_back({{0.0, 0.0, 1.0, 0.0}, Sense::Le, 1.0});
    LpSolution sol = solve_lp(lp);
    CHECK(sol.status == LpStatus::Optimal);
    CHECK(sol.value == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("shifted lower bounds keep duality bookkeeping consistent") {
    LinearProgram lp;
    lp.objective = {1.0, 1.0};
    lp.lower = {2.0, 3.0};
    lp.upper = {kInf, kInf};
    lp.constraints.push_back({{1.0, 1.0}, Sense::Le, 10.0});
    LpSolution sol = solve_lp(lp);
    CHECK(sol.status == LpStatus::Optimal);
    CHECK(sol.value == doctest::Approx(10.0));
    CHECK(sol.dual_objective() == doctest::Approx(10.0));
    CHECK(sol.x[0] >= 2.0 - 1e-9);
    CHECK(sol.x[1] >= 3.0 - 1e-9);
}
