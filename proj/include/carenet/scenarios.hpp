#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carenet/instance.hpp"

namespace carenet {

enum class FailureMode { random, rank_ordering };

FailureMode parse_failure_mode(const std::string& s);
std::string failure_mode_name(FailureMode mode);

struct ScenarioSpec {
    double delta = 0.0; // in [0,1]
    FailureMode mode = FailureMode::random;
    std::uint64_t seed = 0;
    int case_index = 0;
};

struct Scenario {
    ScenarioSpec spec;
    std::vector<std::string> closed_edges;      // sorted edge ids
    std::vector<std::string> closed_facilities; // sorted facility ids

    std::vector<int> closed_edge_indices(const Instance& instance) const;
    std::vector<int> closed_facility_indices(const Instance& instance) const;
};

// floor(fraction * set size); the count rule behind both samplers.
long long sampled_count(double fraction, std::size_t set_size);

// Closes floor(delta*|S_r^100|) + floor(0.2*delta*|S_r^500|) road segments
// and the analogous facility counts, uniformly without replacement.
Scenario sample_random_failure(const Instance& instance, double delta, std::uint64_t seed,
                               int case_index);

// Same street closures as the random sampler for equal (seed, case_index);
// facility closures are the top-capacity floodplain facilities instead
// (count = round(rank_fraction * |floodplain facilities|), half up; ties
// broken by ascending facility id). Independent of delta and seed.
Scenario sample_rank_ordering_failure(const Instance& instance, double delta,
                                      std::uint64_t seed, int case_index);

// Grid of |deltas| x cases_per_delta scenarios; case seeds split off the
// master seed deterministically.
std::vector<Scenario> enumerate_batch(const Instance& instance, const std::vector<double>& deltas,
                                      int cases_per_delta, FailureMode mode,
                                      std::uint64_t master_seed);

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& json_text);

} // namespace carenet
