#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "carenet/report.hpp"
#include "carenet/synth.hpp"

using namespace carenet;
namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    InstanceFiles files;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_instance_options(CLI::App* cmd, InstanceFiles& files, bool required) {
    auto* n = cmd->add_option("--network", files.network, "street network CSV");
    auto* f = cmd->add_option("--facilities", files.facilities, "facilities CSV");
    auto* b = cmd->add_option("--blockgroups", files.blockgroups, "block groups CSV");
    auto* v = cmd->add_option("--visits", files.visits, "baseline visits CSV");
    if (required) {
        n->required();
        f->required();
        b->required();
        v->required();
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Resolves the run configuration from --config plus command-line overrides.
RunConfig resolve_config(const CommonArgs& args, const std::vector<double>& deltas, int cases,
                         const std::string& modes, bool no_equity) {
    RunConfig cfg;
    if (!args.config_path.empty()) {
        cfg = parse_config(args.config_path);
    } else {
        cfg.files = args.files;
    }
    if (!args.files.network.empty()) cfg.files = args.files;
    if (args.seed_set) cfg.master_seed = args.seed;
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (!deltas.empty()) cfg.deltas = deltas;
    if (cases > 0) cfg.cases_per_delta = cases;
    if (!modes.empty()) {
        cfg.modes.clear();
        std::stringstream ss(modes);
        std::string part;
        while (std::getline(ss, part, ',')) cfg.modes.push_back(parse_failure_mode(part));
    }
    if (no_equity) cfg.equity = false;
    for (double d : cfg.deltas) {
        if (d < 0 || d > 1) throw ValidationError("delta out of range [0,1]");
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"carenet: critical-care network resilience analysis under flood hazards"};
    app.require_subcommand(1);

    CommonArgs args;
    app.add_option("--config", args.config_path, "run configuration file")
        ->each([](const std::string&) {});

    // ---- synth ----------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate a seeded synthetic instance");
    SynthSpec spec;
    std::uint64_t synth_seed = 7;
    std::string synth_out = "instance";
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--grid-width", spec.grid_width, "grid columns");
    synth->add_option("--grid-height", spec.grid_height, "grid rows");
    synth->add_option("--n-facilities", spec.n_facilities, "facility count");
    synth->add_option("--n-blockgroups", spec.n_blockgroups, "block group count");
    synth->add_option("--total-visits", spec.total_visits, "total baseline visits");
    synth->add_option("--diagonal-prob", spec.diagonal_prob, "diagonal edge probability");
    synth->add_flag("--large-in-floodplain", spec.large_facilities_in_floodplain,
                    "place the largest facilities inside the floodplain band");
    synth->add_option("--out", synth_out, "output directory for the four CSVs");

    // ---- ingest-check ---------------------------------------------------
    auto* check = app.add_subcommand("ingest-check", "validate instance files");
    add_instance_options(check, args.files, true);

    // ---- simulate -------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "sample flood scenarios to JSON");
    add_instance_options(simulate, args.files, true);
    std::vector<double> sim_deltas{0.05, 0.1, 0.15};
    int sim_cases = 10;
    std::string sim_mode = "random";
    simulate->add_option("--delta", sim_deltas, "flooding coefficients");
    simulate->add_option("--cases", sim_cases, "cases per delta");
    simulate->add_option("--mode", sim_mode, "random or rank_ordering");
    simulate->add_option("--seed", args.seed, "master seed")->each([&](const std::string&) {
        args.seed_set = true;
    });
    simulate->add_option("--out", args.out_dir, "output directory");

    // ---- allocate -------------------------------------------------------
    auto* allocate = app.add_subcommand("allocate", "solve re-allocation for one scenario");
    add_instance_options(allocate, args.files, true);
    std::string scenario_path;
    bool alloc_equity = false;
    allocate->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    allocate->add_flag("--equity", alloc_equity, "apply the distance-thresholding constraint");
    allocate->add_option("--out", args.out_dir, "output directory");

    // ---- site -----------------------------------------------------------
    auto* site = app.add_subcommand(
        "site", "equity re-allocation plus temporary facility siting for one scenario");
    add_instance_options(site, args.files, true);
    site->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    site->add_option("--out", args.out_dir, "output directory");

    // ---- run-batch ------------------------------------------------------
    auto* batch = app.add_subcommand("run-batch", "run the full scenario grid");
    add_instance_options(batch, args.files, false);
    std::vector<double> batch_deltas;
    int batch_cases = 0;
    std::string batch_modes;
    bool no_equity = false;
    batch->add_option("--config", args.config_path, "run configuration file");
    batch->add_option("--delta", batch_deltas, "flooding coefficients");
    batch->add_option("--cases", batch_cases, "cases per delta");
    batch->add_option("--modes", batch_modes, "comma-separated failure modes");
    batch->add_flag("--no-equity", no_equity, "skip the equity model");
    batch->add_option("--seed", args.seed, "master seed")->each([&](const std::string&) {
        args.seed_set = true;
    });
    batch->add_option("--out", args.out_dir, "output directory");

    // ---- report ---------------------------------------------------------
    auto* rep = app.add_subcommand("report", "re-run the grid and emit only the report tables");
    add_instance_options(rep, args.files, false);
    rep->add_option("--config", args.config_path, "run configuration file");
    rep->add_option("--seed", args.seed, "master seed")->each([&](const std::string&) {
        args.seed_set = true;
    });
    rep->add_option("--out", args.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string single_out = args.out_dir.empty() ? "out" : args.out_dir;
        if (synth->parsed()) {
            fs::create_directories(synth_out);
            InstanceFiles files{synth_out + "/network.csv", synth_out + "/facilities.csv",
                                synth_out + "/blockgroups.csv", synth_out + "/visits.csv"};
            const auto instance = generate_synthetic_instance(synth_seed, spec, files);
            std::cout << "wrote " << synth_out << ": " << instance.network.nodes().size()
                      << " nodes, " << instance.network.edges().size() << " edges, "
                      << instance.facilities.size() << " facilities, "
                      << instance.block_groups.size() << " block groups, "
                      << instance.total_patients() << " visits\n";
        } else if (check->parsed()) {
            const auto instance = ingest_instance(args.files, {});
            std::cout << "ok: m=" << instance.block_groups.size()
                      << " block groups, n=" << instance.facilities.size() << " facilities, "
                      << instance.network.nodes().size() << " nodes, "
                      << instance.network.edges().size() << " edges, "
                      << instance.total_patients() << " baseline visits\n";
        } else if (simulate->parsed()) {
            const auto instance = ingest_instance(args.files, {});
            const auto mode = parse_failure_mode(sim_mode);
            const auto scenarios =
                enumerate_batch(instance, sim_deltas, sim_cases, mode, args.seed);
            fs::create_directories(single_out);
            std::size_t k = 0;
            for (const auto& s : scenarios) {
                std::ofstream out(single_out + "/scenario_" + std::to_string(k++) + ".json",
                                  std::ios::binary);
                out << scenario_to_json(s);
            }
            std::cout << "wrote " << scenarios.size() << " scenarios to " << single_out << "\n";
        } else if (allocate->parsed() || site->parsed()) {
            const auto instance = ingest_instance(args.files, {});
            const auto scenario = scenario_from_json(read_file(scenario_path));
            std::optional<EquityConstraint> equity;
            if (alloc_equity || site->parsed()) {
                EquityConstraint e;
                e.travel_threshold_s = resolve_travel_threshold(instance);
                e.vulnerable = classify_vulnerable_indices(instance);
                equity = std::move(e);
            }
            const auto result = evaluate_scenario(instance, scenario, equity, single_out);
            std::cout << "lost=" << result.base.lost_access << " unserved=" << result.base.unserved;
            if (result.siting_covered) {
                std::cout << " site_covered=" << *result.siting_covered
                          << " site_uncovered=" << *result.siting_uncovered;
            }
            std::cout << "\nartifacts in " << single_out << "\n";
        } else if (batch->parsed() || rep->parsed()) {
            auto cfg = resolve_config(args, batch_deltas, batch_cases, batch_modes, no_equity);
            if (cfg.files.network.empty()) {
                throw ValidationError("run-batch needs instance files via --config or flags");
            }
            const auto report = run_batch(cfg);
            std::cout << "completed " << report.results.size() << " scenarios; report in "
                      << cfg.out_dir << "\n";
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
