#pragma once

#include <cstdint>

#include "carenet/ingest.hpp"

namespace carenet {

// Shape of a generated instance: a connected grid-with-diagonals street
// graph with a contiguous floodplain band, heavy-tailed facility demand,
// lognormal incomes.
struct SynthSpec {
    int grid_width = 10;
    int grid_height = 10;
    int n_facilities = 6;
    int n_blockgroups = 20;
    long long total_visits = 200;
    double spacing_m = 500.0;       // grid step
    double diagonal_prob = 0.25;    // extra diagonal edges per cell
    double oneway_prob = 0.0;       // applied to diagonal edges only
    // Fraction of grid columns covered by the 100-year band; the 500-year
    // band is the adjacent strip of equal width (tags disjoint).
    double fp100_band = 0.2;
    double fp500_band = 0.2;
    // When true, facilities are placed largest-first into the floodplain
    // band (stress-test shape: hub facilities exposed to flooding).
    bool large_facilities_in_floodplain = false;
};

// Deterministic in (seed, spec). Writes the four ingestion files and
// returns the equivalent in-memory instance.
Instance generate_synthetic_instance(std::uint64_t seed, const SynthSpec& spec,
                                     const InstanceFiles& out_files,
                                     const ModelParams& params = {});

// In-memory variant used by tests; identical construction path.
Instance generate_synthetic_instance(std::uint64_t seed, const SynthSpec& spec,
                                     const ModelParams& params = {});

} // namespace carenet
