// Acceptance suite: one pass/fail line per criterion, exit 1 on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "carenet/allocation.hpp"
#include "carenet/report.hpp"
#include "carenet/rng.hpp"
#include "carenet/scenarios.hpp"
#include "carenet/siting.hpp"
#include "carenet/synth.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace carenet;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("[%s] %2d. %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double elapsed_s(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("carenet_accept_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

TransportProblem random_transport_problem(Rng& rng) {
    TransportProblem p;
    const std::size_t n_orig = 1 + rng.bounded(4); // <= 4 origins
    const std::size_t n_dest = 1 + rng.bounded(3); // <= 3 facilities
    long long total = 0;
    for (std::size_t o = 0; o < n_orig; ++o) {
        long long supply = 1 + static_cast<long long>(rng.bounded(3));
        if (total + supply > 6) supply = 6 - total; // sum p_i <= 6
        if (supply <= 0) break;
        total += supply;
        p.origin_cbg.push_back(static_cast<int>(o));
        p.supply.push_back(supply);
    }
    for (std::size_t d = 0; d < n_dest; ++d) {
        p.destination_facility.push_back(static_cast<int>(d));
        p.capacity.push_back(1 + static_cast<long long>(rng.bounded(4)));
    }
    p.cost_us.assign(p.origin_cbg.size() * n_dest, -1);
    for (auto& c : p.cost_us) {
        if (rng.unit() < 0.8) c = static_cast<long long>(rng.bounded(2000)) * 500;
    }
    p.dummy_cost_us = seconds_to_cost_us(1e6);
    return p;
}

SitingProblem random_siting_problem(Rng& rng) {
    SitingProblem p;
    p.n_sites = 2 + rng.bounded(4); // <= 5 CBGs
    long long total = 0;
    for (std::size_t i = 0; i < p.n_sites && total < 5; ++i) {
        if (rng.unit() < 0.6) {
            const long long demand = 1 + static_cast<long long>(rng.bounded(2));
            if (total + demand > 5) continue;
            total += demand;
            p.residual_cbg.push_back(static_cast<int>(i));
            p.residual_demand.push_back(demand);
        }
    }
    p.cost_s.assign(p.residual_cbg.size() * p.n_sites, kUnreachable);
    for (auto& c : p.cost_s) {
        if (rng.unit() < 0.7) c = 5.0 * static_cast<double>(1 + rng.bounded(80));
    }
    return p;
}

StreetNetwork random_directed_network(Rng& rng) {
    StreetNetwork net;
    const int n = 2 + static_cast<int>(rng.bounded(99)); // <= 100 nodes
    for (int i = 0; i < n; ++i) {
        net.add_node("n" + std::to_string(i), static_cast<double>(i), 0.0);
    }
    const int n_edges = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(3 * n)));
    int added = 0;
    for (int e = 0; e < n_edges; ++e) {
        const int u = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
        const int v = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
        if (u == v) continue;
        net.add_edge("e" + std::to_string(added++), "n" + std::to_string(u),
                     "n" + std::to_string(v), 10.0 * static_cast<double>(1 + rng.bounded(400)),
                     10.0, Floodplain::none, /*oneway=*/true);
    }
    net.finalize();
    return net;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) {
            out[fs::relative(entry.path(), root).string()] = slurp(entry.path());
        }
    }
    return out;
}

// ---- criteria ------------------------------------------------------------

void criterion_1_solver_optimality() {
    const auto start = clock_type::now();
    Rng rng(1001);
    int mismatches = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto p = random_transport_problem(rng);
        if (solve_transport(p).objective_us != test::enumerate_transport_optimum(p)) {
            ++mismatches;
        }
    }
    const double secs = elapsed_s(start);
    char detail[128];
    std::snprintf(detail, sizeof detail, "500 instances, %d mismatches, %.2f s", mismatches,
                  secs);
    report(1, "solver optimality vs exhaustive enumeration", mismatches == 0 && secs < 10.0,
           detail);
}

struct BatchCheck {
    long long constraint_violations = 0;
    long long equity_violations = 0;
    int scenarios = 0;
};

// Runs the 60-scenario synthetic batch once; criteria 2 and 7 read it.
BatchCheck run_constraint_batch() {
    SynthSpec spec;
    spec.grid_width = 16;
    spec.grid_height = 16;
    spec.n_facilities = 14;
    spec.n_blockgroups = 50;
    spec.total_visits = 1000;
    const auto instance = generate_synthetic_instance(4242, spec);

    EquityConstraint equity;
    equity.travel_threshold_s = resolve_travel_threshold(instance);
    equity.vulnerable = classify_vulnerable_indices(instance);
    std::vector<char> is_vulnerable(instance.block_groups.size(), 0);
    for (int i : equity.vulnerable) is_vulnerable[static_cast<std::size_t>(i)] = 1;

    BatchCheck check;
    for (const auto mode : {FailureMode::random, FailureMode::rank_ordering}) {
        const auto scenarios = enumerate_batch(instance, {0.05, 0.1, 0.15}, 10, mode, 99);
        for (const auto& scenario : scenarios) {
            ++check.scenarios;
            const auto access = assess_access(instance, scenario);
            const auto base_problem =
                build_transport_problem(instance, scenario, access, std::nullopt);
            const auto base_plan = solve_transport(base_problem);
            const auto equity_problem =
                build_transport_problem(instance, scenario, access, equity);
            const auto equity_plan = solve_transport(equity_problem);

            const std::pair<const TransportProblem*, const AllocationPlan*> runs[] = {
                {&base_problem, &base_plan}, {&equity_problem, &equity_plan}};
            for (const auto& run : runs) {
                const auto& p = *run.first;
                const auto& plan = *run.second;
                std::vector<long long> sent(p.origin_cbg.size(), 0);
                std::vector<long long> received(p.destination_facility.size(), 0);
                std::vector<std::vector<char>> used(p.origin_cbg.size(),
                                                    std::vector<char>(p.capacity.size(), 0));
                for (const auto& f : plan.flows) {
                    if (f.patients <= 0) ++check.constraint_violations; // integrality > 0
                    std::size_t o = 0;
                    while (p.origin_cbg[o] != f.cbg) ++o;
                    sent[o] += f.patients;
                    if (f.facility != kDummy) {
                        std::size_t d = 0;
                        while (p.destination_facility[d] != f.facility) ++d;
                        received[d] += f.patients;
                        used[o][d] = 1;
                        if (p.cost_at(o, d) < 0) ++check.constraint_violations; // forbidden arc
                    }
                }
                for (std::size_t o = 0; o < p.supply.size(); ++o) {
                    if (sent[o] != p.supply[o]) ++check.constraint_violations; // Eq. (2)
                }
                for (std::size_t d = 0; d < p.capacity.size(); ++d) {
                    if (received[d] > p.capacity[d]) ++check.constraint_violations; // Eq. (3)
                }
            }

            // Eq. (5) arc-by-arc on the equity problem, plus dominance.
            for (std::size_t o = 0; o < equity_problem.origin_cbg.size(); ++o) {
                const int cbg = equity_problem.origin_cbg[o];
                if (!is_vulnerable[static_cast<std::size_t>(cbg)]) continue;
                for (std::size_t d = 0; d < equity_problem.destination_facility.size(); ++d) {
                    const int fac = equity_problem.destination_facility[d];
                    const double t = access.times.at(static_cast<std::size_t>(cbg),
                                                     static_cast<std::size_t>(fac));
                    const bool permitted = !is_unreachable(t) &&
                                           t <= equity.travel_threshold_s + 1e-12;
                    if (!permitted && equity_problem.cost_at(o, d) >= 0) {
                        ++check.equity_violations;
                    }
                }
            }
            for (const auto& f : equity_plan.flows) {
                if (f.facility == kDummy || !is_vulnerable[static_cast<std::size_t>(f.cbg)]) {
                    continue;
                }
                const double t = access.times.at(static_cast<std::size_t>(f.cbg),
                                                 static_cast<std::size_t>(f.facility));
                if (t > equity.travel_threshold_s + 1e-12) ++check.equity_violations;
            }
            if (equity_plan.objective_us < base_plan.objective_us) ++check.equity_violations;
        }
    }
    return check;
}

void criterion_3_sampling_arithmetic() {
    const long long d05 = sampled_count(0.05, 54084) + sampled_count(0.2 * 0.05, 63170);
    const long long d10 = sampled_count(0.1, 54084) + sampled_count(0.2 * 0.1, 63170);
    const bool floors_05 = sampled_count(0.05, 54084) == 2704 &&
                           sampled_count(0.2 * 0.05, 63170) == 631;
    const double dev_05 = std::abs(static_cast<double>(d05) - 3328.6) / 3328.6;
    const double dev_10 = std::abs(static_cast<double>(d10) - 6644.0) / 6644.0;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "delta=0.05: %lld (%.2f%% off 3328.6); delta=0.1: %lld (%.2f%% off 6644)",
                  d05, 100 * dev_05, d10, 100 * dev_10);
    report(3, "sampling arithmetic on the published pool sizes",
           floors_05 && d05 == 3335 && dev_05 <= 0.002 && dev_10 <= 0.013, detail);
}

void criterion_4_rank_ordering() {
    StreetNetwork net;
    net.add_node("a", 0, 0);
    net.add_node("b", 1, 0);
    net.add_edge("e0", "a", "b", 100, 10, Floodplain::none, false);
    net.finalize();
    test::InstanceBuilder b;
    b.network(std::move(net));
    for (int j = 0; j < 52; ++j) {
        b.facility("F" + std::to_string(j), "a", 100 + j,
                   j % 2 ? Floodplain::fp100 : Floodplain::fp500);
    }
    b.facility("BIG", "a", 100000, Floodplain::none);
    b.blockgroup("C0", "b");
    const auto instance = b.build();
    const auto s = sample_rank_ordering_failure(instance, 0.1, 7, 0);
    const std::vector<std::string> expected = {"F47", "F48", "F49", "F50", "F51"};
    report(4, "rank-ordering closes exactly the top 5 of 52 floodplain facilities",
           s.closed_facilities == expected);
}

void criterion_5_shortest_path_oracle() {
    Rng rng(555);
    long long mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto net = random_directed_network(rng);
        const ClosureOverlay overlay(net);
        const int n = static_cast<int>(net.nodes().size());
        for (int s = 0; s < n; ++s) {
            const auto fast = shortest_times_from(overlay, s);
            const auto slow = test::label_correcting_times(overlay, s);
            for (int v = 0; v < n; ++v) {
                if (fast[static_cast<std::size_t>(v)] != slow[static_cast<std::size_t>(v)]) {
                    ++mismatches;
                }
            }
        }
    }
    report(5, "all-pairs travel times match the label-correcting oracle on 200 graphs",
           mismatches == 0);
}

void criterion_6_nested_monotonicity() {
    SynthSpec spec;
    spec.grid_width = 14;
    spec.grid_height = 14;
    spec.n_facilities = 12;
    spec.n_blockgroups = 40;
    spec.total_visits = 600;
    auto instance = generate_synthetic_instance(606, spec);
    // Ample capacity slack so the optimum decomposes per patient; nested
    // monotonicity is a theorem only in that regime (with binding
    // capacities a closure can free a saturated facility and lower the
    // total). 10x headroom at every facility guarantees it.
    for (auto& f : instance.facilities) f.total_capacity *= 10;

    int violations = 0;
    for (int pair = 0; pair < 100; ++pair) {
        const auto seed = static_cast<std::uint64_t>(pair);
        const auto scen_b = sample_random_failure(instance, 0.5, seed, 0);
        Scenario scen_a = scen_b; // A keeps every other closure of B
        scen_a.closed_edges.clear();
        scen_a.closed_facilities.clear();
        for (std::size_t i = 0; i < scen_b.closed_edges.size(); i += 2) {
            scen_a.closed_edges.push_back(scen_b.closed_edges[i]);
        }
        for (std::size_t i = 0; i < scen_b.closed_facilities.size(); i += 2) {
            scen_a.closed_facilities.push_back(scen_b.closed_facilities[i]);
        }
        const auto access_a = assess_access(instance, scen_a);
        const auto access_b = assess_access(instance, scen_b);
        const auto plan_a = solve_transport(
            build_transport_problem(instance, scen_a, access_a, std::nullopt));
        const auto plan_b = solve_transport(
            build_transport_problem(instance, scen_b, access_b, std::nullopt));
        if (plan_b.objective_us < plan_a.objective_us) ++violations;
    }
    report(6, "objective is monotone over 100 nested closure pairs", violations == 0);
}

void criterion_8_siting_correctness() {
    Rng rng(808);
    long long violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_siting_problem(rng);
        const auto plan = solve_siting(p);
        const auto oracle = test::enumerate_siting_optimum(p);
        if (plan.covered != oracle.covered) ++violations;
        if (std::abs(plan.total_time_s - oracle.total_time_s) > 1e-9) ++violations;
        for (const auto& f : plan.flows) {
            if (f.site_cbg == f.origin_cbg) ++violations;
            std::size_t r = 0;
            while (p.residual_cbg[r] != f.origin_cbg) ++r;
            for (std::size_t s = 0; s < p.n_sites; ++s) {
                if (static_cast<int>(s) == f.origin_cbg) continue;
                const double t = p.cost_at(r, s);
                if (!is_unreachable(t) && f.travel_s > t + 1e-12) ++violations;
            }
        }
    }
    report(8, "siting matches brute-force lexicographic enumeration on 200 problems",
           violations == 0);
}

void criterion_9_determinism() {
    TempDir dir("det");
    SynthSpec spec;
    spec.grid_width = 14;
    spec.grid_height = 14;
    spec.n_facilities = 10;
    spec.n_blockgroups = 30;
    spec.total_visits = 400;
    RunConfig cfg;
    cfg.files = {(dir.path / "network.csv").string(), (dir.path / "facilities.csv").string(),
                 (dir.path / "blockgroups.csv").string(), (dir.path / "visits.csv").string()};
    generate_synthetic_instance(909, spec, cfg.files);
    cfg.deltas = {0.05, 0.15};
    cfg.cases_per_delta = 3;
    cfg.master_seed = 31;

    cfg.out_dir = (dir.path / "run1").string();
    run_batch(cfg);
    cfg.out_dir = (dir.path / "run2").string();
    run_batch(cfg);
    report(9, "repeated run-batch executions are byte-identical",
           tree_bytes(dir.path / "run1") == tree_bytes(dir.path / "run2"));
}

void criterion_10_scale() {
    TempDir dir("scale");
    const auto start = clock_type::now();
    SynthSpec spec;
    spec.grid_width = 150;
    spec.grid_height = 150;
    spec.n_facilities = 142;
    spec.n_blockgroups = 2000;
    spec.total_visits = 20000;
    RunConfig cfg;
    cfg.files = {(dir.path / "network.csv").string(), (dir.path / "facilities.csv").string(),
                 (dir.path / "blockgroups.csv").string(), (dir.path / "visits.csv").string()};
    const auto instance = generate_synthetic_instance(1010, spec, cfg.files);
    cfg.cases_per_delta = 10; // 3 deltas x 10 cases x 2 modes = 60 scenarios
    cfg.master_seed = 77;
    cfg.out_dir = (dir.path / "out").string();
    const auto batch = run_batch(cfg);
    const double secs = elapsed_s(start);
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "%zu CBGs, %zu facilities, %zu edges, %zu scenarios in %.1f s",
                  instance.block_groups.size(), instance.facilities.size(),
                  instance.network.edges().size(), batch.results.size(), secs);
    report(10, "60-scenario batch at city scale finishes under 5 minutes",
           batch.results.size() == 60 && instance.network.edges().size() >= 45000 &&
               secs < 300.0,
           detail);
}

void criterion_11_directional_fidelity() {
    // Average travel time of served patients (retained at their baseline
    // facility plus those re-allocated to a real one), batch-mean per mode.
    double sum_random = 0, sum_rank = 0;
    int batches = 0;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        SynthSpec spec;
        spec.grid_width = 14;
        spec.grid_height = 14;
        spec.n_facilities = 20;
        spec.n_blockgroups = 40;
        spec.total_visits = 800;
        spec.large_facilities_in_floodplain = true;
        auto instance = generate_synthetic_instance(seed, spec);
        // Re-wire the baseline so each block group uses its nearest
        // facility (the usage pattern the claim presumes); hub
        // capacity then tracks hub load, and capacity headroom keeps the
        // displaced patients at real facilities where their longer trips
        // count toward the average.
        {
            const auto access = assess_access(instance, Scenario{});
            std::vector<long long> load(instance.facilities.size(), 0);
            for (std::size_t i = 0; i < instance.block_groups.size(); ++i) {
                int best = -1;
                double best_t = kUnreachable;
                for (std::size_t j = 0; j < instance.facilities.size(); ++j) {
                    const double t = access.times.at(i, j);
                    if (!is_unreachable(t) && t < best_t) {
                        best_t = t;
                        best = static_cast<int>(j);
                    }
                }
                auto& bg = instance.block_groups[i];
                bg.baseline_visits.clear();
                if (best >= 0) {
                    bg.baseline_visits.emplace_back(best, 20);
                    load[static_cast<std::size_t>(best)] += 20;
                }
            }
            for (std::size_t j = 0; j < instance.facilities.size(); ++j) {
                instance.facilities[j].total_capacity =
                    4 * std::max<long long>(1, estimated_capacity(
                                                   load[j], instance.params.capacity_utilization));
            }
        }
        double mean_by_mode[2] = {0, 0};
        for (const auto mode : {FailureMode::random, FailureMode::rank_ordering}) {
            const auto scenarios = enumerate_batch(instance, {0.1}, 4, mode, seed * 13 + 1);
            double time_sum = 0;
            long long patients = 0;
            for (const auto& scenario : scenarios) {
                const auto access = assess_access(instance, scenario);
                for (const auto& pair : access.pairs) {
                    if (pair.retained) {
                        time_sum += pair.travel_s * static_cast<double>(pair.visits);
                        patients += pair.visits;
                    }
                }
                const auto plan = solve_transport(
                    build_transport_problem(instance, scenario, access, std::nullopt));
                for (const auto& f : plan.flows) {
                    if (f.facility == kDummy) continue;
                    time_sum +=
                        cost_us_to_seconds(f.cost_us) * static_cast<double>(f.patients);
                    patients += f.patients;
                }
            }
            mean_by_mode[mode == FailureMode::rank_ordering] =
                patients ? time_sum / static_cast<double>(patients) : 0;
        }
        sum_random += mean_by_mode[0];
        sum_rank += mean_by_mode[1];
        ++batches;
    }
    char detail[128];
    std::snprintf(detail, sizeof detail,
                  "mean served travel over %d seeds: rank_ordering %.1f s vs random %.1f s",
                  batches, sum_rank / batches, sum_random / batches);
    report(11, "targeted hub closures raise average travel time vs random failures",
           sum_rank >= sum_random, detail);
}

} // namespace

int main() {
    criterion_1_solver_optimality();

    const auto batch = run_constraint_batch();
    {
        char detail[96];
        std::snprintf(detail, sizeof detail, "%d scenarios, %lld violations", batch.scenarios,
                      batch.constraint_violations);
        report(2, "conservation, capacity and integrality hold on every plan",
               batch.scenarios == 60 && batch.constraint_violations == 0, detail);
    }
    criterion_3_sampling_arithmetic();
    criterion_4_rank_ordering();
    criterion_5_shortest_path_oracle();
    criterion_6_nested_monotonicity();
    {
        char detail[64];
        std::snprintf(detail, sizeof detail, "%lld violations", batch.equity_violations);
        report(7, "equity-constrained plans dominate and respect the travel threshold",
               batch.equity_violations == 0, detail);
    }
    criterion_8_siting_correctness();
    criterion_9_determinism();
    criterion_10_scale();
    criterion_11_directional_fidelity();

    if (g_failures) std::printf("%d criteria FAILED\n", g_failures);
    return g_failures ? 1 : 0;
}
