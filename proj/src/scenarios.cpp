#include "carenet/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "carenet/rng.hpp"

namespace carenet {

FailureMode parse_failure_mode(const std::string& s) {
    if (s == "random") return FailureMode::random;
    if (s == "rank_ordering") return FailureMode::rank_ordering;
    throw ValidationError("unknown failure mode '" + s + "'");
}

std::string failure_mode_name(FailureMode mode) {
    return mode == FailureMode::random ? "random" : "rank_ordering";
}

std::vector<int> Scenario::closed_edge_indices(const Instance& instance) const {
    std::vector<int> out;
    out.reserve(closed_edges.size());
    for (const auto& id : closed_edges) {
        const int idx = instance.network.edge_index(id);
        if (idx < 0) throw ValidationError("scenario closes unknown edge '" + id + "'");
        out.push_back(idx);
    }
    return out;
}

std::vector<int> Scenario::closed_facility_indices(const Instance& instance) const {
    std::vector<int> out;
    out.reserve(closed_facilities.size());
    for (const auto& id : closed_facilities) out.push_back(instance.require_facility(id));
    return out;
}

long long sampled_count(double fraction, std::size_t set_size) {
    // Tiny guard against fraction*size landing just under an integer it
    // mathematically equals (e.g. 0.05 * 54084).
    return static_cast<long long>(
        std::floor(fraction * static_cast<double>(set_size) + 1e-9));
}

namespace {

void check_delta(double delta) {
    if (!(delta >= 0.0) || delta > 1.0) {
        throw ValidationError("delta must lie in [0,1], got " + std::to_string(delta));
    }
}

// Draws floor(fraction*|pool|) ids from the pool, uniformly without
// replacement, in a substream of its own.
std::vector<std::string> draw_ids(const std::vector<std::string>& pool, double fraction,
                                  std::uint64_t stream_seed) {
    const long long k = sampled_count(fraction, pool.size());
    Rng rng(stream_seed);
    const auto picks = rng.sample_without_replacement(pool.size(), static_cast<std::size_t>(k));
    std::vector<std::string> out;
    out.reserve(picks.size());
    for (std::size_t p : picks) out.push_back(pool[p]);
    return out;
}

struct FloodPools {
    std::vector<std::string> edges100, edges500;
    std::vector<std::string> fac100, fac500;
};

FloodPools floodplain_pools(const Instance& instance) {
    FloodPools pools;
    for (const auto& e : instance.network.edges()) {
        if (e.floodplain == Floodplain::fp100) pools.edges100.push_back(e.id);
        if (e.floodplain == Floodplain::fp500) pools.edges500.push_back(e.id);
    }
    for (const auto& f : instance.facilities) {
        if (f.floodplain == Floodplain::fp100) pools.fac100.push_back(f.id);
        if (f.floodplain == Floodplain::fp500) pools.fac500.push_back(f.id);
    }
    return pools;
}

// Street closures are shared by both failure modes for equal (seed, case):
// mode is deliberately not mixed into the edge substreams.
std::vector<std::string> draw_closed_edges(const FloodPools& pools, double delta,
                                           std::uint64_t seed, int case_index) {
    const std::uint64_t case_seed = mix_seed(seed, static_cast<std::uint64_t>(case_index));
    auto closed = draw_ids(pools.edges100, delta, tag_seed(case_seed, "edges100"));
    auto extra = draw_ids(pools.edges500, 0.2 * delta, tag_seed(case_seed, "edges500"));
    closed.insert(closed.end(), extra.begin(), extra.end());
    std::sort(closed.begin(), closed.end());
    return closed;
}

} // namespace

Scenario sample_random_failure(const Instance& instance, double delta, std::uint64_t seed,
                               int case_index) {
    check_delta(delta);
    const auto pools = floodplain_pools(instance);
    Scenario s;
    s.spec = {delta, FailureMode::random, seed, case_index};
    s.closed_edges = draw_closed_edges(pools, delta, seed, case_index);
    const std::uint64_t case_seed = mix_seed(seed, static_cast<std::uint64_t>(case_index));
    s.closed_facilities = draw_ids(pools.fac100, delta, tag_seed(case_seed, "fac100"));
    auto extra = draw_ids(pools.fac500, 0.2 * delta, tag_seed(case_seed, "fac500"));
    s.closed_facilities.insert(s.closed_facilities.end(), extra.begin(), extra.end());
    std::sort(s.closed_facilities.begin(), s.closed_facilities.end());
    return s;
}

Scenario sample_rank_ordering_failure(const Instance& instance, double delta,
                                      std::uint64_t seed, int case_index) {
    check_delta(delta);
    const auto pools = floodplain_pools(instance);
    Scenario s;
    s.spec = {delta, FailureMode::rank_ordering, seed, case_index};
    s.closed_edges = draw_closed_edges(pools, delta, seed, case_index);

    std::vector<int> floodplain_fac;
    for (std::size_t j = 0; j < instance.facilities.size(); ++j) {
        if (instance.facilities[j].floodplain != Floodplain::none) {
            floodplain_fac.push_back(static_cast<int>(j));
        }
    }
    long long k;
    if (instance.params.rank_fraction_count) {
        k = *instance.params.rank_fraction_count;
    } else {
        // Round half up: reproduces a count of 5 from 52 at fraction 0.1.
        k = static_cast<long long>(std::floor(
            instance.params.rank_fraction * static_cast<double>(floodplain_fac.size()) + 0.5));
    }
    k = std::clamp<long long>(k, 0, static_cast<long long>(floodplain_fac.size()));
    std::sort(floodplain_fac.begin(), floodplain_fac.end(), [&](int a, int b) {
        const auto& fa = instance.facilities[static_cast<std::size_t>(a)];
        const auto& fb = instance.facilities[static_cast<std::size_t>(b)];
        if (fa.total_capacity != fb.total_capacity) return fa.total_capacity > fb.total_capacity;
        return fa.id < fb.id;
    });
    for (long long i = 0; i < k; ++i) {
        s.closed_facilities.push_back(
            instance.facilities[static_cast<std::size_t>(floodplain_fac[static_cast<std::size_t>(i)])].id);
    }
    std::sort(s.closed_facilities.begin(), s.closed_facilities.end());
    return s;
}

std::vector<Scenario> enumerate_batch(const Instance& instance, const std::vector<double>& deltas,
                                      int cases_per_delta, FailureMode mode,
                                      std::uint64_t master_seed) {
    if (deltas.empty()) throw ValidationError("empty delta list");
    if (cases_per_delta < 1) throw ValidationError("cases_per_delta must be >= 1");
    std::vector<Scenario> batch;
    batch.reserve(deltas.size() * static_cast<std::size_t>(cases_per_delta));
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        const std::uint64_t delta_seed = mix_seed(master_seed, d + 1);
        for (int c = 0; c < cases_per_delta; ++c) {
            batch.push_back(mode == FailureMode::random
                                ? sample_random_failure(instance, deltas[d], delta_seed, c)
                                : sample_rank_ordering_failure(instance, deltas[d], delta_seed, c));
        }
    }
    return batch;
}

std::string scenario_to_json(const Scenario& scenario) {
    nlohmann::ordered_json j;
    j["delta"] = scenario.spec.delta;
    j["mode"] = failure_mode_name(scenario.spec.mode);
    j["seed"] = scenario.spec.seed;
    j["case_index"] = scenario.spec.case_index;
    j["closed_edges"] = scenario.closed_edges;
    j["closed_facilities"] = scenario.closed_facilities;
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid scenario JSON: ") + e.what());
    }
    Scenario s;
    try {
        s.spec.delta = j.at("delta").get<double>();
        s.spec.mode = parse_failure_mode(j.at("mode").get<std::string>());
        s.spec.seed = j.at("seed").get<std::uint64_t>();
        s.spec.case_index = j.at("case_index").get<int>();
        s.closed_edges = j.at("closed_edges").get<std::vector<std::string>>();
        s.closed_facilities = j.at("closed_facilities").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid scenario JSON: ") + e.what());
    }
    std::sort(s.closed_edges.begin(), s.closed_edges.end());
    std::sort(s.closed_facilities.begin(), s.closed_facilities.end());
    return s;
}

} // namespace carenet
