#include "carenet/min_cost_flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace carenet {

namespace {
constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
}

MinCostFlow::MinCostFlow(int n_nodes)
    : adj_(static_cast<std::size_t>(n_nodes)), potential_(static_cast<std::size_t>(n_nodes), 0) {}

int MinCostFlow::add_arc(int from, int to, long long capacity, long long cost) {
    if (capacity < 0) throw RuntimeError("negative arc capacity");
    if (cost < 0) throw RuntimeError("negative arc cost");
    const int idx = static_cast<int>(arcs_.size());
    arcs_.push_back({to, capacity, cost});
    arcs_.push_back({from, 0, -cost});
    initial_cap_.push_back(capacity);
    initial_cap_.push_back(0);
    adj_[static_cast<std::size_t>(from)].push_back(idx);
    adj_[static_cast<std::size_t>(to)].push_back(idx + 1);
    return idx;
}

MinCostFlow::Result MinCostFlow::solve(int s, int t, long long flow_limit) {
    const std::size_t n = adj_.size();
    Result result;
    std::vector<long long> dist(n);
    std::vector<int> parent_arc(n);
    using Item = std::pair<long long, int>;

    while (result.flow < flow_limit) {
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(parent_arc.begin(), parent_arc.end(), -1);
        dist[static_cast<std::size_t>(s)] = 0;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        heap.emplace(0, s);
        while (!heap.empty()) {
            const auto [d, u] = heap.top();
            heap.pop();
            if (d > dist[static_cast<std::size_t>(u)]) continue;
            for (int a : adj_[static_cast<std::size_t>(u)]) {
                const Arc& arc = arcs_[static_cast<std::size_t>(a)];
                if (arc.cap <= 0) continue;
                const long long nd = d + arc.cost + potential_[static_cast<std::size_t>(u)] -
                                     potential_[static_cast<std::size_t>(arc.to)];
                if (nd < dist[static_cast<std::size_t>(arc.to)]) {
                    dist[static_cast<std::size_t>(arc.to)] = nd;
                    parent_arc[static_cast<std::size_t>(arc.to)] = a;
                    heap.emplace(nd, arc.to);
                }
            }
        }
        if (dist[static_cast<std::size_t>(t)] >= kInf) break; // t unreachable

        // Clamp unreached nodes at dist[t] so reduced costs stay >= 0.
        const long long dt = dist[static_cast<std::size_t>(t)];
        for (std::size_t v = 0; v < n; ++v) {
            potential_[v] += std::min(dist[v], dt);
        }

        long long push = flow_limit - result.flow;
        for (int v = t; v != s;) {
            const Arc& arc = arcs_[static_cast<std::size_t>(parent_arc[static_cast<std::size_t>(v)])];
            push = std::min(push, arc.cap);
            v = arcs_[static_cast<std::size_t>(parent_arc[static_cast<std::size_t>(v)] ^ 1)].to;
        }
        for (int v = t; v != s;) {
            const int a = parent_arc[static_cast<std::size_t>(v)];
            arcs_[static_cast<std::size_t>(a)].cap -= push;
            arcs_[static_cast<std::size_t>(a ^ 1)].cap += push;
            result.cost += push * arcs_[static_cast<std::size_t>(a)].cost;
            v = arcs_[static_cast<std::size_t>(a ^ 1)].to;
        }
        result.flow += push;
    }
    return result;
}

long long MinCostFlow::flow_on(int arc) const {
    return initial_cap_[static_cast<std::size_t>(arc)] - arcs_[static_cast<std::size_t>(arc)].cap;
}

bool MinCostFlow::certify_optimal() const {
    for (std::size_t u = 0; u < adj_.size(); ++u) {
        for (int a : adj_[u]) {
            const Arc& arc = arcs_[static_cast<std::size_t>(a)];
            if (arc.cap <= 0) continue;
            if (arc.cost + potential_[u] - potential_[static_cast<std::size_t>(arc.to)] < 0) {
                return false;
            }
        }
    }
    return true;
}

} // namespace carenet
