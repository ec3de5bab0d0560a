#pragma once

#include <cstdint>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/flow.hpp"
#include "fairaudit/generators.hpp"
#include "fairaudit/model.hpp"

// Preprocessing for conference review data: when only a paper x reviewer
// conflict matrix is available, a maximum matching on it pairs every paper
// with a distinct conflicted reviewer who is then treated as its author.
// Instances are drawn by seeded subsampling of matched papers, with their
// authors forming the reviewer pool.

namespace fairaudit {

// paper -> matched reviewer (author), or -1 when the matching leaves it out
inline std::vector<int> infer_authorship(const std::vector<std::vector<bool>>& conflict) {
    const int papers = static_cast<int>(conflict.size());
    const int reviewers = papers == 0 ? 0 : static_cast<int>(conflict[0].size());
    FlowNetwork net(papers + reviewers + 2);
    int source = papers + reviewers, sink = source + 1;
    std::vector<std::vector<int>> arc(papers, std::vector<int>(reviewers, -1));
    for (int p = 0; p < papers; ++p) net.add_arc(source, p, 1, 0.0);
    for (int r = 0; r < reviewers; ++r) net.add_arc(papers + r, sink, 1, 0.0);
    for (int p = 0; p < papers; ++p)
        for (int r = 0; r < reviewers; ++r)
            if (conflict[p][r]) arc[p][r] = net.add_arc(p, papers + r, 1, 0.0);
    net.max_flow(source, sink);
    std::vector<int> author(papers, -1);
    for (int p = 0; p < papers; ++p)
        for (int r = 0; r < reviewers; ++r)
            if (arc[p][r] >= 0 && net.flow_on(arc[p][r]) == 1) author[p] = r;
    return author;
}

// Draws `size` matched papers (seeded) and builds the square instance on
// them, the reviewer pool being exactly their inferred authors.
inline ReviewInstance subsample_review_instance(
    const std::vector<std::vector<double>>& similarity,
    const std::vector<std::vector<bool>>& conflict, int size, std::uint64_t seed, int load = 3,
    double score_floor = 1e-3) {
    std::vector<int> author = infer_authorship(conflict);
    std::vector<int> matched;
    for (int p = 0; p < static_cast<int>(author.size()); ++p)
        if (author[p] >= 0) matched.push_back(p);
    require(static_cast<int>(matched.size()) >= size,
            "not enough author-matched papers to subsample");
    Rng rng(seed);
    for (int k = static_cast<int>(matched.size()) - 1; k > 0; --k)
        std::swap(matched[k], matched[rng.below(k + 1)]);
    matched.resize(size);

    std::vector<std::vector<double>> sim(size, std::vector<double>(size, 0.0));
    std::set<std::pair<int, int>> conflicts;
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) {
            sim[i][j] = similarity[matched[i]][author[matched[j]]];
            if (conflict[matched[i]][author[matched[j]]]) conflicts.insert({i, j});
        }
    return ReviewInstance::make(size, std::move(sim), std::move(conflicts), load, score_floor);
}

}  // namespace fairaudit
