#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/model.hpp"

// Synthetic instance generators. All sampling is hand-rolled on top of
// mt19937_64 bits (no std distributions), so a seed reproduces bit-identical
// instances regardless of standard-library implementation.

namespace fairaudit {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t below(std::uint64_t bound) { return engine_() % bound; }

    // inverse-CDF categorical draw
    int categorical(const std::vector<double>& weights, double total) {
        double x = uniform() * total;
        for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
            x -= weights[k];
            if (x < 0.0) return static_cast<int>(k);
        }
        return static_cast<int>(weights.size()) - 1;
    }

    std::vector<double> dirichlet_uniform(int dims) {
        // normalized unit-rate exponentials
        std::vector<double> x(dims);
        double total = 0.0;
        for (double& v : x) {
            v = -std::log(1.0 - uniform());
            total += v;
        }
        for (double& v : x) v /= total;
        return x;
    }

  private:
    std::mt19937_64 engine_;
};

inline std::vector<double> multinomial_row(Rng& rng, int points,
                                           const std::vector<double>& probs) {
    std::vector<double> row(probs.size(), 0.0);
    for (int p = 0; p < points; ++p) row[rng.categorical(probs, 1.0)] += 1.0;
    return row;
}

constexpr int kMultinomialPoints = 200;

// Each agent's valuations divide 200 points uniformly at random between the
// goods (independent rows).
inline GoodsInstance gen_uniform_multinomial(int n, int m, std::uint64_t seed) {
    require(n >= 1 && m >= 1, "need at least one agent and one good");
    Rng rng(seed);
    GoodsInstance inst;
    inst.n = n;
    inst.m = m;
    std::vector<double> uniform(m, 1.0 / m);
    for (int i = 0; i < n; ++i) inst.value.push_back(multinomial_row(rng, kMultinomialPoints, uniform));
    for (auto& row : inst.value) {
        bool positive = false;
        for (double v : row) positive = positive || v > 0;
        if (!positive) row[0] = 1.0;  // 200 points make this all but impossible
    }
    return inst;
}

// Market values drawn once per instance from a uniform Dirichlet; every
// agent's 200 points then follow those shared expectations, correlating rows.
inline GoodsInstance gen_dirichlet_multinomial(int n, int m, std::uint64_t seed) {
    require(n >= 1 && m >= 1, "need at least one agent and one good");
    Rng rng(seed);
    GoodsInstance inst;
    inst.n = n;
    inst.m = m;
    std::vector<double> market = rng.dirichlet_uniform(m);
    for (int i = 0; i < n; ++i) inst.value.push_back(multinomial_row(rng, kMultinomialPoints, market));
    for (auto& row : inst.value) {
        bool positive = false;
        for (double v : row) positive = positive || v > 0;
        if (!positive) row[0] = 1.0;
    }
    return inst;
}

// Small synthetic approval election in the shape of real Pabulib data.
inline PBInstance gen_pb_election(int projects, int voters, std::uint64_t seed,
                                  PBUtilityModel model = PBUtilityModel::Approval) {
    require(projects >= 2 && voters >= 1, "need at least two projects and one voter");
    Rng rng(seed);
    PBInstance inst;
    double total_cost = 0.0;
    for (int p = 0; p < projects; ++p) {
        double cost = 100.0 * (1 + static_cast<double>(rng.below(50)));
        inst.projects.push_back({"p" + std::to_string(p + 1), cost});
        total_cost += cost;
    }
    inst.budget = std::floor(total_cost * (0.3 + 0.4 * rng.uniform()));
    inst.utility_model = model;
    inst.epsilon_floor = PBInstance::default_floor(model, inst.budget);
    for (int v = 0; v < voters; ++v) {
        std::vector<int> ballot;
        for (int p = 0; p < projects; ++p)
            if (rng.uniform() < 0.25) ballot.push_back(p);
        if (ballot.empty()) ballot.push_back(static_cast<int>(rng.below(projects)));
        inst.ballots.push_back(std::move(ballot));
    }
    return inst;
}

inline std::vector<int> seeded_permutation(int n, std::uint64_t seed) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (int k = n - 1; k > 0; --k) std::swap(order[k], order[rng.below(k + 1)]);
    return order;
}

inline ReviewInstance gen_review_similarity(int n, std::uint64_t seed, int load = 3,
                                            double score_floor = 1e-3) {
    Rng rng(seed);
    std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
    for (auto& row : sim)
        for (double& x : row) x = rng.uniform();
    return ReviewInstance::make(n, std::move(sim), {}, load, score_floor);
}

}  // namespace fairaudit
