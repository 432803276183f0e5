#pragma once

#include <cstdint>
#include <vector>

#include "carenet/errors.hpp"

namespace carenet {

// Exact integral min-cost max-flow via successive shortest paths with
// node potentials (Dijkstra on reduced costs). All arc costs must be
// non-negative; all arithmetic is 64-bit integer, so objectives are exact.
class MinCostFlow {
public:
    explicit MinCostFlow(int n_nodes);

    // Returns an arc handle usable with flow_on(). Cost per unit.
    int add_arc(int from, int to, long long capacity, long long cost);

    struct Result {
        long long flow = 0;
        long long cost = 0;
    };

    // Pushes up to `flow_limit` units from s to t at minimum total cost.
    Result solve(int s, int t, long long flow_limit);

    long long flow_on(int arc) const;

    // Optimality certificate: no residual arc has negative reduced cost
    // under the final potentials, hence no negative residual cycle.
    bool certify_optimal() const;

private:
    struct Arc {
        int to;
        long long cap;
        long long cost;
    };
    std::vector<Arc> arcs_;
    std::vector<long long> initial_cap_;
    std::vector<std::vector<int>> adj_;
    std::vector<long long> potential_;
};

} // namespace carenet
