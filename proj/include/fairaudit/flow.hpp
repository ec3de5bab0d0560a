#pragma once

#include <algorithm>
#include <deque>
#include <queue>
#include <vector>

#include "fairaudit/common.hpp"

// Min-cost max-flow via successive shortest paths (SPFA label-correcting, so
// negative arc costs from negated similarities are fine). Integral capacities
// give integral flows, which is what the assignment decoders rely on.

namespace fairaudit {

class FlowNetwork {
  public:
    explicit FlowNetwork(int nodes) : head_(nodes, -1) {}

    int add_arc(int from, int to, long long capacity, double cost) {
        require(capacity >= 0, "negative arc capacity");
        int id = static_cast<int>(arcs_.size());
        arcs_.push_back({to, head_[from], capacity, 0, cost});
        head_[from] = id;
        arcs_.push_back({from, head_[to], 0, 0, -cost});
        head_[to] = id + 1;
        return id;
    }

    long long flow_on(int arc_id) const { return arcs_[arc_id].flow; }

    int num_nodes() const { return static_cast<int>(head_.size()); }

    struct Result {
        long long flow = 0;
        double cost = 0.0;
    };

    // Sends up to `limit` units from source to sink along cheapest paths.
    Result min_cost_flow(int source, int sink, long long limit = -1) {
        Result res;
        while (limit < 0 || res.flow < limit) {
            if (!shortest_path(source, sink)) break;
            long long push = limit < 0 ? kBig : limit - res.flow;
            for (int v = sink; v != source; v = arcs_[parent_[v] ^ 1].to)
                push = std::min(push, arcs_[parent_[v]].capacity - arcs_[parent_[v]].flow);
            for (int v = sink; v != source; v = arcs_[parent_[v] ^ 1].to) {
                arcs_[parent_[v]].flow += push;
                arcs_[parent_[v] ^ 1].flow -= push;
            }
            res.flow += push;
            res.cost += push * dist_[sink];
        }
        return res;
    }

    long long max_flow(int source, int sink, long long limit = -1) {
        return min_cost_flow(source, sink, limit).flow;
    }

  private:
    static constexpr long long kBig = 1LL << 60;

    struct Arc {
        int to;
        int next;
        long long capacity;
        long long flow;
        double cost;
    };

    bool shortest_path(int source, int sink) {
        int n = num_nodes();
        dist_.assign(n, kInf);
        parent_.assign(n, -1);
        std::vector<bool> in_queue(n, false);
        std::deque<int> queue;
        dist_[source] = 0.0;
        queue.push_back(source);
        in_queue[source] = true;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            in_queue[u] = false;
            for (int e = head_[u]; e != -1; e = arcs_[e].next) {
                const Arc& arc = arcs_[e];
                if (arc.capacity - arc.flow <= 0) continue;
                double nd = dist_[u] + arc.cost;
                if (nd < dist_[arc.to] - 1e-12) {
                    dist_[arc.to] = nd;
                    parent_[arc.to] = e;
                    if (!in_queue[arc.to]) {
                        // SLF heuristic
                        if (!queue.empty() && nd < dist_[queue.front()])
                            queue.push_front(arc.to);
                        else
                            queue.push_back(arc.to);
                        in_queue[arc.to] = true;
                    }
                }
            }
        }
        return parent_[sink] != -1;
    }

    std::vector<int> head_;
    std::vector<Arc> arcs_;
    std::vector<double> dist_;
    std::vector<int> parent_;
};

}  // namespace fairaudit
