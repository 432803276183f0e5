#include "carenet/instance.hpp"

#include <algorithm>
#include <cmath>

namespace carenet {

void Instance::index_ids() {
    facility_by_id.clear();
    blockgroup_by_id.clear();
    for (std::size_t i = 0; i < facilities.size(); ++i) {
        if (!facility_by_id.emplace(facilities[i].id, static_cast<int>(i)).second) {
            throw ValidationError("duplicate facility id '" + facilities[i].id + "'");
        }
    }
    for (std::size_t i = 0; i < block_groups.size(); ++i) {
        if (!blockgroup_by_id.emplace(block_groups[i].id, static_cast<int>(i)).second) {
            throw ValidationError("duplicate block group id '" + block_groups[i].id + "'");
        }
    }
}

int Instance::require_facility(const std::string& id) const {
    const auto it = facility_by_id.find(id);
    if (it == facility_by_id.end()) throw ValidationError("unknown facility id '" + id + "'");
    return it->second;
}

int Instance::require_blockgroup(const std::string& id) const {
    const auto it = blockgroup_by_id.find(id);
    if (it == blockgroup_by_id.end()) throw ValidationError("unknown block group id '" + id + "'");
    return it->second;
}

std::vector<long long> Instance::facility_visits() const {
    std::vector<long long> v(facilities.size(), 0);
    for (const auto& bg : block_groups) {
        for (const auto& [fac, count] : bg.baseline_visits) {
            v[static_cast<std::size_t>(fac)] += count;
        }
    }
    return v;
}

long long Instance::total_patients() const {
    long long total = 0;
    for (const auto& bg : block_groups) {
        for (const auto& [fac, count] : bg.baseline_visits) total += count;
    }
    return total;
}

double weighted_quantile(std::vector<std::pair<double, long long>> samples, double q) {
    samples.erase(std::remove_if(samples.begin(), samples.end(),
                                 [](const auto& s) { return s.second <= 0; }),
                  samples.end());
    if (samples.empty()) throw ValidationError("quantile of an empty distribution");
    if (q < 0 || q > 1) throw ValidationError("quantile must lie in [0,1]");
    std::sort(samples.begin(), samples.end());
    long long total = 0;
    for (const auto& s : samples) total += s.second;
    // Position in the conceptually expanded sample of size `total`,
    // interpolated between order statistics.
    const double h = (static_cast<double>(total) - 1.0) * q;
    const long long lo = static_cast<long long>(std::floor(h));
    const double frac = h - static_cast<double>(lo);

    auto value_at = [&](long long k) {
        long long cum = 0;
        for (const auto& s : samples) {
            cum += s.second;
            if (k < cum) return s.first;
        }
        return samples.back().first;
    };
    const double v_lo = value_at(lo);
    if (frac == 0.0) return v_lo;
    return v_lo + frac * (value_at(lo + 1) - v_lo);
}

double resolve_poverty_line(const Instance& instance) {
    if (instance.params.poverty_line.value) return *instance.params.poverty_line.value;
    std::vector<std::pair<double, long long>> samples;
    for (const auto& bg : instance.block_groups) {
        long long patients = 0;
        for (const auto& [fac, count] : bg.baseline_visits) patients += count;
        if (patients > 0) samples.emplace_back(bg.median_income, patients);
    }
    return weighted_quantile(std::move(samples), instance.params.poverty_line.quantile);
}

double resolve_travel_threshold(const Instance& instance) {
    if (instance.params.travel_threshold.value) return *instance.params.travel_threshold.value;
    const ClosureOverlay open(instance.network);
    std::vector<int> origins, dests;
    for (const auto& bg : instance.block_groups) origins.push_back(bg.centroid_node);
    for (const auto& f : instance.facilities) dests.push_back(f.node);
    const auto matrix = travel_time_matrix(open, origins, dests);
    std::vector<std::pair<double, long long>> samples;
    for (std::size_t i = 0; i < instance.block_groups.size(); ++i) {
        for (const auto& [fac, count] : instance.block_groups[i].baseline_visits) {
            const double t = matrix.at(i, static_cast<std::size_t>(fac));
            if (!is_unreachable(t)) samples.emplace_back(t, count);
        }
    }
    return weighted_quantile(std::move(samples), instance.params.travel_threshold.quantile);
}

std::vector<int> classify_vulnerable_indices(const Instance& instance) {
    const double rho = resolve_poverty_line(instance);
    std::vector<int> out;
    for (std::size_t i = 0; i < instance.block_groups.size(); ++i) {
        if (instance.block_groups[i].median_income < rho) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<std::string> classify_vulnerable(const Instance& instance) {
    std::vector<std::string> out;
    for (int i : classify_vulnerable_indices(instance)) {
        out.push_back(instance.block_groups[static_cast<std::size_t>(i)].id);
    }
    return out;
}

long long estimated_capacity(long long visits, double utilization) {
    if (!(utilization > 0.0) || utilization > 1.0) {
        throw ValidationError("capacity_utilization must lie in (0,1]");
    }
    if (visits <= 0) return 0;
    return static_cast<long long>(
        std::ceil(static_cast<double>(visits) / utilization - 1e-9));
}

Instance estimate_capacities(Instance instance) {
    const auto visits = instance.facility_visits();
    for (std::size_t j = 0; j < instance.facilities.size(); ++j) {
        instance.facilities[j].total_capacity =
            estimated_capacity(visits[j], instance.params.capacity_utilization);
        instance.facilities[j].capacity_given = true;
    }
    return instance;
}

} // namespace carenet
