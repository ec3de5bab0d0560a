#include "doctest.h"

#include <random>

#include "fairaudit/flow.hpp"

using namespace fairaudit;

TEST_CASE("min cost flow picks the cheap path") {
    // source 0, sink 3; expensive direct arc vs cheap two-hop
    FlowNetwork net(4);
    int direct = net.add_arc(0, 3, 1, 10.0);
    net.add_arc(0, 1, 1, 1.0);
    net.add_arc(1, 3, 1, 1.0);
    auto res = net.min_cost_flow(0, 3, 1);
    CHECK(res.flow == 1);
    CHECK(res.cost == doctest::Approx(2.0));
    CHECK(net.flow_on(direct) == 0);
}

TEST_CASE("negative costs are handled") {
    FlowNetwork net(3);
    net.add_arc(0, 1, 2, -5.0);
    net.add_arc(1, 2, 2, 1.0);
    auto res = net.min_cost_flow(0, 2);
    CHECK(res.flow == 2);
    CHECK(res.cost == doctest::Approx(-8.0));
}

TEST_CASE("max flow respects capacities") {
    FlowNetwork net(4);
    net.add_arc(0, 1, 3, 0.0);
    net.add_arc(0, 2, 2, 0.0);
    net.add_arc(1, 3, 2, 0.0);
    net.add_arc(2, 3, 4, 0.0);
    CHECK(net.max_flow(0, 3) == 4);
}

TEST_CASE("random assignment instances match brute force") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> cost(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 4;
        std::vector<std::vector<double>> c(n, std::vector<double>(n));
        for (auto& row : c)
            for (double& x : row) x = cost(rng);
        // flow formulation
        FlowNetwork net(2 * n + 2);
        int source = 2 * n, sink = 2 * n + 1;
        std::vector<std::vector<int>> arc(n, std::vector<int>(n));
        for (int i = 0; i < n; ++i) net.add_arc(source, i, 1, 0.0);
        for (int j = 0; j < n; ++j) net.add_arc(n + j, sink, 1, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) arc[i][j] = net.add_arc(i, n + j, 1, c[i][j]);
        auto res = net.min_cost_flow(source, sink);
        REQUIRE(res.flow == n);
        // brute force over permutations
        std::vector<int> perm{0, 1, 2, 3};
        double best = kInf;
        do {
            double total = 0.0;
            for (int i = 0; i < n; ++i) total += c[i][perm[i]];
            best = std::min(best, total);
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(res.cost == doctest::Approx(best));
        // decoded matching is a permutation
        std::vector<int> matched(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (net.flow_on(arc[i][j]) == 1) ++matched[j];
        for (int j = 0; j < n; ++j) CHECK(matched[j] == 1);
    }
}
