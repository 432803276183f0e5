#pragma once

#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "carenet/errors.hpp"

namespace carenet {

enum class Floodplain { none, fp100, fp500 };

Floodplain parse_floodplain(const std::string& s);
std::string floodplain_name(Floodplain fp);

// Unreachable sentinel for travel times. Infinity keeps comparisons sane
// (any finite time < unreachable) without leaking into objective sums;
// the allocation layer forbids such arcs instead of pricing them.
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();
inline bool is_unreachable(double t) { return t == kUnreachable; }

// Road network: intersections as nodes, road segments as edges.
// Immutable after finalize(); shared read-only across scenario workers.
class StreetNetwork {
public:
    struct Node {
        std::string id;
        double x = 0, y = 0;
    };
    struct Edge {
        std::string id;
        int u = -1, v = -1;
        double length_m = 0;
        double speed_mps = 0;
        Floodplain floodplain = Floodplain::none;
        bool oneway = false;
    };

    int add_node(const std::string& id, double x, double y);
    int add_edge(const std::string& id, const std::string& u, const std::string& v,
                 double length_m, double speed_mps, Floodplain fp, bool oneway);

    // Builds the adjacency index; call once after the last add.
    void finalize();

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }

    int node_index(const std::string& id) const;       // -1 if absent
    int edge_index(const std::string& id) const;       // -1 if absent
    int require_node(const std::string& id) const;     // throws ValidationError

    // Free-flow traversal time in seconds.
    static double edge_weight(const Edge& e) { return e.length_m / e.speed_mps; }

    struct Arc {
        int to;
        int edge;
        double seconds;
    };
    const std::vector<Arc>& out_arcs(int node) const { return forward_[node]; }
    const std::vector<Arc>& in_arcs(int node) const { return reverse_[node]; }

private:
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, int> node_by_id_;
    std::unordered_map<std::string, int> edge_by_id_;
    std::vector<std::vector<Arc>> forward_;
    std::vector<std::vector<Arc>> reverse_;
    bool finalized_ = false;
};

// Set of closed edges layered over an unmodified base network.
class ClosureOverlay {
public:
    explicit ClosureOverlay(const StreetNetwork& base);

    const StreetNetwork& base() const { return *base_; }
    bool closed(int edge) const { return closed_[static_cast<std::size_t>(edge)] != 0; }

private:
    const StreetNetwork* base_;
    std::vector<char> closed_;

    friend ClosureOverlay apply_closures(const StreetNetwork&, const std::vector<std::string>&);
    friend ClosureOverlay apply_closure_indices(const StreetNetwork&, const std::vector<int>&);
};

ClosureOverlay apply_closures(const StreetNetwork& net, const std::vector<std::string>& edge_ids);
ClosureOverlay apply_closure_indices(const StreetNetwork& net, const std::vector<int>& edge_indices);

// Exact single-source shortest travel times over open edges. Returns one
// entry per node; unreachable nodes carry kUnreachable. With reversed=true
// the result is the time *to* `source` from every node.
std::vector<double> shortest_times_from(const ClosureOverlay& overlay, int source,
                                        bool reversed = false);

struct TravelTimeMatrix {
    std::vector<int> origins;       // node indices, caller order
    std::vector<int> destinations;  // node indices, caller order
    std::vector<double> times;      // row-major, origins x destinations

    double at(std::size_t o, std::size_t d) const {
        return times[o * destinations.size() + d];
    }
};

// Batched times for T^f (CBG -> facility) and T^c (CBG -> CBG). Runs
// whichever Dijkstra orientation needs fewer sources.
TravelTimeMatrix travel_time_matrix(const ClosureOverlay& overlay,
                                    const std::vector<int>& origins,
                                    const std::vector<int>& destinations);

} // namespace carenet
