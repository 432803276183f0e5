#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "carenet/allocation.hpp"
#include "carenet/ingest.hpp"
#include "carenet/siting.hpp"

namespace carenet {

struct RunConfig {
    InstanceFiles files;
    ModelParams params;
    std::vector<double> deltas = {0.05, 0.1, 0.15};
    int cases_per_delta = 10;
    std::vector<FailureMode> modes = {FailureMode::random, FailureMode::rank_ordering};
    bool equity = true;
    // The equity model applies to random-failure scenarios by default;
    // this flag extends it to rank-ordering runs.
    bool equity_rank_ordering = false;
    std::uint64_t master_seed = 0;
    std::string out_dir;

    bool equity_for(FailureMode mode) const {
        return equity && (mode == FailureMode::random || equity_rank_ordering);
    }
};

// Flat key=value config file; '#' starts a comment. Unknown keys and
// out-of-range values are validation errors naming the key.
RunConfig parse_config(const std::string& path);

struct ScenarioResult {
    Scenario scenario;
    Metrics base;
    std::optional<Metrics> equity;
    std::optional<long long> siting_covered;
    std::optional<long long> siting_uncovered;
};

struct BatchReport {
    double baseline_avg_travel_s = 0;
    double poverty_line = 0;
    std::optional<double> travel_threshold_s; // resolved only when equity ran
    std::vector<ScenarioResult> results;
    // (mode, delta) -> aggregated temporary-facility demand points
    std::map<std::pair<std::string, double>, std::map<int, long long>> demand_points;
};

// One scenario through the full pipeline; writes artifacts under `dir`
// when non-empty.
ScenarioResult evaluate_scenario(const Instance& instance, const Scenario& scenario,
                                 const std::optional<EquityConstraint>& equity,
                                 const std::string& dir, SitingPlan* siting_out = nullptr);

// Full grid: ingest, sample, allocate, site, aggregate. Deterministic in
// (config, inputs); writes one directory per (mode, delta, case) plus the
// report files at the top level.
BatchReport run_batch(const RunConfig& config, const Instance& instance);
BatchReport run_batch(const RunConfig& config);

// Plot-ready data tables: long-format distributions with a baseline
// reference row, the equity comparison, per-(mode, delta) demand-point
// maps, and summary.json with both patient- and scenario-weighted means.
void emit_report(const BatchReport& report, const Instance& instance, const RunConfig& config,
                 const std::string& outdir);

std::string delta_dir_name(double delta);

} // namespace carenet
