#include "carenet/street_graph.hpp"

#include <queue>

namespace carenet {

Floodplain parse_floodplain(const std::string& s) {
    if (s == "none") return Floodplain::none;
    if (s == "fp100") return Floodplain::fp100;
    if (s == "fp500") return Floodplain::fp500;
    throw ValidationError("unknown floodplain tag '" + s + "'");
}

std::string floodplain_name(Floodplain fp) {
    switch (fp) {
        case Floodplain::none: return "none";
        case Floodplain::fp100: return "fp100";
        case Floodplain::fp500: return "fp500";
    }
    return "none";
}

int StreetNetwork::add_node(const std::string& id, double x, double y) {
    if (node_by_id_.count(id)) throw ValidationError("duplicate node id '" + id + "'");
    const int idx = static_cast<int>(nodes_.size());
    nodes_.push_back({id, x, y});
    node_by_id_.emplace(id, idx);
    return idx;
}

int StreetNetwork::add_edge(const std::string& id, const std::string& u, const std::string& v,
                            double length_m, double speed_mps, Floodplain fp, bool oneway) {
    if (edge_by_id_.count(id)) throw ValidationError("duplicate edge id '" + id + "'");
    const int ui = node_index(u);
    const int vi = node_index(v);
    if (ui < 0) throw ValidationError("edge '" + id + "' references unknown node '" + u + "'");
    if (vi < 0) throw ValidationError("edge '" + id + "' references unknown node '" + v + "'");
    if (ui == vi) throw ValidationError("edge '" + id + "' is a self-loop");
    if (!(length_m > 0)) throw ValidationError("edge '" + id + "' has non-positive length");
    if (!(speed_mps > 0)) throw ValidationError("edge '" + id + "' has non-positive speed");
    const int idx = static_cast<int>(edges_.size());
    edges_.push_back({id, ui, vi, length_m, speed_mps, fp, oneway});
    edge_by_id_.emplace(id, idx);
    return idx;
}

void StreetNetwork::finalize() {
    forward_.assign(nodes_.size(), {});
    reverse_.assign(nodes_.size(), {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        const double w = edge_weight(e);
        const int ei = static_cast<int>(i);
        forward_[e.u].push_back({e.v, ei, w});
        reverse_[e.v].push_back({e.u, ei, w});
        if (!e.oneway) {
            forward_[e.v].push_back({e.u, ei, w});
            reverse_[e.u].push_back({e.v, ei, w});
        }
    }
    finalized_ = true;
}

int StreetNetwork::node_index(const std::string& id) const {
    const auto it = node_by_id_.find(id);
    return it == node_by_id_.end() ? -1 : it->second;
}

int StreetNetwork::edge_index(const std::string& id) const {
    const auto it = edge_by_id_.find(id);
    return it == edge_by_id_.end() ? -1 : it->second;
}

int StreetNetwork::require_node(const std::string& id) const {
    const int idx = node_index(id);
    if (idx < 0) throw ValidationError("unknown node id '" + id + "'");
    return idx;
}

ClosureOverlay::ClosureOverlay(const StreetNetwork& base)
    : base_(&base), closed_(base.edges().size(), 0) {}

ClosureOverlay apply_closures(const StreetNetwork& net, const std::vector<std::string>& edge_ids) {
    ClosureOverlay overlay(net);
    for (const auto& id : edge_ids) {
        const int idx = net.edge_index(id);
        if (idx < 0) throw ValidationError("unknown edge id '" + id + "'");
        overlay.closed_[static_cast<std::size_t>(idx)] = 1;
    }
    return overlay;
}

ClosureOverlay apply_closure_indices(const StreetNetwork& net, const std::vector<int>& edge_indices) {
    ClosureOverlay overlay(net);
    for (int idx : edge_indices) {
        if (idx < 0 || idx >= static_cast<int>(net.edges().size())) {
            throw ValidationError("edge index out of range: " + std::to_string(idx));
        }
        overlay.closed_[static_cast<std::size_t>(idx)] = 1;
    }
    return overlay;
}

std::vector<double> shortest_times_from(const ClosureOverlay& overlay, int source, bool reversed) {
    const StreetNetwork& net = overlay.base();
    const int n = static_cast<int>(net.nodes().size());
    if (source < 0 || source >= n) {
        throw ValidationError("unknown node index: " + std::to_string(source));
    }
    std::vector<double> dist(static_cast<std::size_t>(n), kUnreachable);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[static_cast<std::size_t>(source)] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(u)]) continue;
        const auto& arcs = reversed ? net.in_arcs(u) : net.out_arcs(u);
        for (const auto& a : arcs) {
            if (overlay.closed(a.edge)) continue;
            const double nd = d + a.seconds;
            if (nd < dist[static_cast<std::size_t>(a.to)]) {
                dist[static_cast<std::size_t>(a.to)] = nd;
                heap.emplace(nd, a.to);
            }
        }
    }
    return dist;
}

TravelTimeMatrix travel_time_matrix(const ClosureOverlay& overlay,
                                    const std::vector<int>& origins,
                                    const std::vector<int>& destinations) {
    if (origins.empty() || destinations.empty()) {
        throw ValidationError("travel_time_matrix requires non-empty node lists");
    }
    TravelTimeMatrix m;
    m.origins = origins;
    m.destinations = destinations;
    m.times.assign(origins.size() * destinations.size(), kUnreachable);
    if (origins.size() <= destinations.size()) {
        for (std::size_t o = 0; o < origins.size(); ++o) {
            const auto dist = shortest_times_from(overlay, origins[o]);
            for (std::size_t d = 0; d < destinations.size(); ++d) {
                m.times[o * destinations.size() + d] =
                    dist[static_cast<std::size_t>(destinations[d])];
            }
        }
    } else {
        for (std::size_t d = 0; d < destinations.size(); ++d) {
            const auto dist = shortest_times_from(overlay, destinations[d], /*reversed=*/true);
            for (std::size_t o = 0; o < origins.size(); ++o) {
                m.times[o * destinations.size() + d] =
                    dist[static_cast<std::size_t>(origins[o])];
            }
        }
    }
    return m;
}

} // namespace carenet
