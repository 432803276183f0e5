#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "carenet/street_graph.hpp"

namespace carenet {

// A parameter that is either a fixed value or a patient-weighted quantile
// of an instance-derived distribution (incomes for rho, baseline travel
// times for T*).
struct QuantileOrValue {
    std::optional<double> value;
    double quantile = 0.0;

    static QuantileOrValue fixed(double v) { return {v, 0.0}; }
    static QuantileOrValue at_quantile(double q) { return {std::nullopt, q}; }
};

struct ModelParams {
    double capacity_utilization = 0.9;
    QuantileOrValue poverty_line = QuantileOrValue::at_quantile(0.25);   // rho
    QuantileOrValue travel_threshold = QuantileOrValue::at_quantile(0.5); // T*, seconds
    double dummy_cost_s = 1e6;                                            // M
    double rank_fraction = 0.1;
    std::optional<long long> rank_fraction_count; // override for the rank-ordering count
    bool allow_self_site = false;                 // deviation switch, default off
};

struct Facility {
    std::string id;
    int node = -1;
    Floodplain floodplain = Floodplain::none;
    long long total_capacity = 0; // patients per study window
    bool capacity_given = false;  // false until estimated or read from input
};

struct BlockGroup {
    std::string id;
    int centroid_node = -1;
    double median_income = 0; // USD
    // baseline visits: (facility index, visit count), one entry per facility
    std::vector<std::pair<int, long long>> baseline_visits;
};

// Immutable after construction; shared read-only across scenario workers.
struct Instance {
    StreetNetwork network;
    std::vector<Facility> facilities;
    std::vector<BlockGroup> block_groups;
    ModelParams params;

    std::unordered_map<std::string, int> facility_by_id;
    std::unordered_map<std::string, int> blockgroup_by_id;

    void index_ids();
    int require_facility(const std::string& id) const;
    int require_blockgroup(const std::string& id) const;

    // Observed baseline visits per facility (v_j).
    std::vector<long long> facility_visits() const;
    long long total_patients() const;
};

// Patient-weighted quantile with linear interpolation between order
// statistics: each patient contributes one sample at their CBG's value.
double weighted_quantile(std::vector<std::pair<double, long long>> samples, double q);

// Resolves rho against the instance's income distribution.
double resolve_poverty_line(const Instance& instance);

// Resolves T* against the baseline (undisrupted) travel-time distribution.
double resolve_travel_threshold(const Instance& instance);

// S'_c: block groups with median income strictly below rho.
std::vector<std::string> classify_vulnerable(const Instance& instance);
std::vector<int> classify_vulnerable_indices(const Instance& instance);

// Capacity from observed demand: ceil(v_j / utilization), zero when no
// visits were observed. Applied to every facility.
Instance estimate_capacities(Instance instance);
long long estimated_capacity(long long visits, double utilization);

} // namespace carenet
