#pragma once

#include <string>
#include <vector>

#include "carenet/instance.hpp"

namespace carenet::test {

// Path graph n0 - n1 - ... with two-way edges of the given travel time
// (length = seconds * 10 m at 10 m/s).
inline StreetNetwork path_network(int n_nodes, double seconds_per_edge = 100.0) {
    StreetNetwork net;
    for (int i = 0; i < n_nodes; ++i) {
        net.add_node("n" + std::to_string(i), i * 100.0, 0.0);
    }
    for (int i = 0; i + 1 < n_nodes; ++i) {
        net.add_edge("e" + std::to_string(i), "n" + std::to_string(i),
                     "n" + std::to_string(i + 1), seconds_per_edge * 10.0, 10.0,
                     Floodplain::none, false);
    }
    net.finalize();
    return net;
}

struct InstanceBuilder {
    Instance instance;

    InstanceBuilder& network(StreetNetwork net) {
        instance.network = std::move(net);
        return *this;
    }
    InstanceBuilder& facility(const std::string& id, const std::string& node,
                              long long capacity, Floodplain fp = Floodplain::none) {
        Facility f;
        f.id = id;
        f.node = instance.network.require_node(node);
        f.floodplain = fp;
        f.total_capacity = capacity;
        f.capacity_given = true;
        instance.facilities.push_back(std::move(f));
        return *this;
    }
    InstanceBuilder& blockgroup(const std::string& id, const std::string& node,
                                double income = 50000.0) {
        BlockGroup bg;
        bg.id = id;
        bg.centroid_node = instance.network.require_node(node);
        bg.median_income = income;
        instance.block_groups.push_back(std::move(bg));
        return *this;
    }
    InstanceBuilder& visits(const std::string& cbg, const std::string& facility,
                            long long count) {
        instance.index_ids();
        instance.block_groups[static_cast<std::size_t>(instance.require_blockgroup(cbg))]
            .baseline_visits.emplace_back(instance.require_facility(facility), count);
        return *this;
    }
    Instance build() {
        instance.index_ids();
        return std::move(instance);
    }
};

} // namespace carenet::test
