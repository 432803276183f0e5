#include "carenet/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "carenet/csv.hpp"

namespace fs = std::filesystem;

namespace carenet {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ValidationError("config key '" + key + "': expected on/off, got '" + v + "'");
}

double parse_num(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) {
        throw ValidationError("config key '" + key + "': malformed number '" + v + "'");
    }
    return x;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RuntimeError(path + ": cannot open for writing");
    out << text;
    if (!out) throw RuntimeError(path + ": write failed");
}

} // namespace

std::string delta_dir_name(double delta) {
    return "delta_" + format_double(delta);
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path + ": cannot open config file");
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "network") {
            cfg.files.network = value;
        } else if (key == "facilities") {
            cfg.files.facilities = value;
        } else if (key == "blockgroups") {
            cfg.files.blockgroups = value;
        } else if (key == "visits") {
            cfg.files.visits = value;
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "seed") {
            cfg.master_seed = static_cast<std::uint64_t>(parse_num(key, value));
        } else if (key == "deltas") {
            cfg.deltas.clear();
            for (const auto& part : split_csv_line(value)) {
                const double d = parse_num(key, trim(part));
                if (d < 0 || d > 1) {
                    throw ValidationError("config key 'deltas': value " + trim(part) +
                                          " out of range [0,1]");
                }
                cfg.deltas.push_back(d);
            }
            if (cfg.deltas.empty()) throw ValidationError("config key 'deltas': empty list");
        } else if (key == "cases") {
            const double c = parse_num(key, value);
            if (c < 1) throw ValidationError("config key 'cases': must be >= 1");
            cfg.cases_per_delta = static_cast<int>(c);
        } else if (key == "modes") {
            cfg.modes.clear();
            for (const auto& part : split_csv_line(value)) {
                cfg.modes.push_back(parse_failure_mode(trim(part)));
            }
        } else if (key == "equity") {
            cfg.equity = parse_bool(key, value);
        } else if (key == "equity_rank_ordering") {
            cfg.equity_rank_ordering = parse_bool(key, value);
        } else if (key == "capacity_utilization") {
            const double u = parse_num(key, value);
            if (!(u > 0) || u > 1) {
                throw ValidationError("config key 'capacity_utilization': must lie in (0,1]");
            }
            cfg.params.capacity_utilization = u;
        } else if (key == "poverty_line") {
            cfg.params.poverty_line = QuantileOrValue::fixed(parse_num(key, value));
        } else if (key == "poverty_quantile") {
            cfg.params.poverty_line = QuantileOrValue::at_quantile(parse_num(key, value));
        } else if (key == "travel_threshold_s") {
            cfg.params.travel_threshold = QuantileOrValue::fixed(parse_num(key, value));
        } else if (key == "travel_quantile") {
            cfg.params.travel_threshold = QuantileOrValue::at_quantile(parse_num(key, value));
        } else if (key == "dummy_cost_s") {
            const double m = parse_num(key, value);
            if (!(m > 0)) throw ValidationError("config key 'dummy_cost_s': must be positive");
            cfg.params.dummy_cost_s = m;
        } else if (key == "rank_fraction") {
            cfg.params.rank_fraction = parse_num(key, value);
        } else if (key == "rank_fraction_count") {
            cfg.params.rank_fraction_count = static_cast<long long>(parse_num(key, value));
        } else if (key == "allow_self_site") {
            cfg.params.allow_self_site = parse_bool(key, value);
        } else {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                                  "'");
        }
    }
    for (const auto& [name, p] : {std::pair<const char*, const std::string*>{"network", &cfg.files.network},
                                  {"facilities", &cfg.files.facilities},
                                  {"blockgroups", &cfg.files.blockgroups},
                                  {"visits", &cfg.files.visits}}) {
        if (p->empty()) {
            throw ValidationError(path + ": missing required path key '" + std::string(name) + "'");
        }
    }
    return cfg;
}

ScenarioResult evaluate_scenario(const Instance& instance, const Scenario& scenario,
                                 const std::optional<EquityConstraint>& equity,
                                 const std::string& dir, SitingPlan* siting_out) {
    ScenarioResult result;
    result.scenario = scenario;
    const std::vector<int> vulnerable = equity ? equity->vulnerable : std::vector<int>{};

    const auto report = assess_access(instance, scenario);
    const auto problem = build_transport_problem(instance, scenario, report, std::nullopt);
    const auto plan = solve_transport(problem);
    result.base = plan_metrics(instance, scenario, report, plan, problem, vulnerable);

    if (!dir.empty()) {
        fs::create_directories(dir);
        write_text(dir + "/scenario.json", scenario_to_json(scenario));
        write_plan_csv(instance, plan, dir + "/plan.csv");
        write_text(dir + "/metrics.json", metrics_to_json(result.base));
    }

    if (equity) {
        const auto eproblem = build_transport_problem(instance, scenario, report, equity);
        const auto eplan = solve_transport(eproblem);
        result.equity = plan_metrics(instance, scenario, report, eplan, eproblem, vulnerable);

        const auto residual = residual_demand(eplan);
        const auto sproblem = build_siting_problem(instance, scenario, residual);
        const auto splan = solve_siting(sproblem);
        result.siting_covered = splan.covered;
        long long uncovered = 0;
        for (const auto& [cbg, p] : splan.uncovered) uncovered += p;
        result.siting_uncovered = uncovered;

        if (!dir.empty()) {
            write_plan_csv(instance, eplan, dir + "/equity_plan.csv");
            write_text(dir + "/equity_metrics.json", metrics_to_json(*result.equity));
            write_siting_csv(instance, splan, dir + "/siting.csv");
        }
        if (siting_out) *siting_out = splan;
    }
    return result;
}

BatchReport run_batch(const RunConfig& config, const Instance& instance) {
    if (config.out_dir.empty()) throw ValidationError("run_batch requires an output directory");
    fs::create_directories(config.out_dir);

    BatchReport report;
    report.poverty_line = resolve_poverty_line(instance);

    // Baseline reference: the undisrupted network.
    {
        Scenario none;
        const auto access = assess_access(instance, none);
        long long patients = 0;
        double time = 0;
        for (const auto& pair : access.pairs) {
            if (pair.retained) {
                patients += pair.visits;
                time += pair.travel_s * static_cast<double>(pair.visits);
            }
        }
        report.baseline_avg_travel_s = patients > 0 ? time / static_cast<double>(patients) : 0.0;
    }

    std::optional<EquityConstraint> equity;
    const bool any_equity =
        std::any_of(config.modes.begin(), config.modes.end(),
                    [&](FailureMode m) { return config.equity_for(m); });
    if (any_equity) {
        EquityConstraint e;
        e.travel_threshold_s = resolve_travel_threshold(instance);
        e.vulnerable = classify_vulnerable_indices(instance);
        report.travel_threshold_s = e.travel_threshold_s;
        equity = std::move(e);
    }

    for (FailureMode mode : config.modes) {
        const auto scenarios = enumerate_batch(instance, config.deltas, config.cases_per_delta,
                                               mode, config.master_seed);
        const auto mode_equity = config.equity_for(mode) ? equity : std::nullopt;
        std::size_t k = 0;
        for (std::size_t d = 0; d < config.deltas.size(); ++d) {
            auto& demand =
                report.demand_points[{failure_mode_name(mode), config.deltas[d]}];
            std::vector<SitingPlan> siting_plans;
            for (int c = 0; c < config.cases_per_delta; ++c, ++k) {
                const std::string dir = config.out_dir + "/" + failure_mode_name(mode) + "/" +
                                        delta_dir_name(config.deltas[d]) + "/case_" +
                                        std::to_string(c);
                try {
                    SitingPlan splan;
                    auto result = evaluate_scenario(instance, scenarios[k], mode_equity, dir,
                                                    &splan);
                    if (mode_equity) siting_plans.push_back(std::move(splan));
                    report.results.push_back(std::move(result));
                } catch (const std::exception& e) {
                    throw RuntimeError("scenario " + failure_mode_name(mode) + "/" +
                                       delta_dir_name(config.deltas[d]) + "/case_" +
                                       std::to_string(c) + ": " + e.what());
                }
            }
            if (mode_equity) demand = aggregate_demand_points(siting_plans);
        }
    }
    emit_report(report, instance, config, config.out_dir);
    return report;
}

BatchReport run_batch(const RunConfig& config) {
    const Instance instance = ingest_instance(config.files, config.params);
    return run_batch(config, instance);
}

void emit_report(const BatchReport& report, const Instance& instance, const RunConfig& config,
                 const std::string& outdir) {
    fs::create_directories(outdir);

    {
        CsvWriter w(outdir + "/distributions.csv",
                    {"mode", "delta", "case_index", "metric", "value"});
        w.row({"baseline", "0", "-1", "avg_travel_s", format_double(report.baseline_avg_travel_s)});
        for (const auto& r : report.results) {
            const std::string mode = failure_mode_name(r.scenario.spec.mode);
            const std::string delta = format_double(r.scenario.spec.delta);
            const std::string c = std::to_string(r.scenario.spec.case_index);
            auto emit = [&](const std::string& metric, double value) {
                w.row({mode, delta, c, metric, format_double(value)});
            };
            emit("lost_access", static_cast<double>(r.base.lost_access));
            emit("unserved", static_cast<double>(r.base.unserved));
            emit("no_real_option", static_cast<double>(r.base.no_real_option));
            if (r.base.avg_retained_travel_s) {
                emit("avg_retained_travel_s", *r.base.avg_retained_travel_s);
            }
            if (r.base.avg_reallocated_travel_s) {
                emit("avg_reallocated_travel_s", *r.base.avg_reallocated_travel_s);
            }
            if (r.base.avg_reallocated_travel_vulnerable_s) {
                emit("avg_reallocated_travel_vulnerable_s",
                     *r.base.avg_reallocated_travel_vulnerable_s);
            }
            if (r.equity) {
                emit("equity_unserved", static_cast<double>(r.equity->unserved));
                if (r.equity->avg_reallocated_travel_s) {
                    emit("equity_avg_reallocated_travel_s", *r.equity->avg_reallocated_travel_s);
                }
                if (r.equity->avg_reallocated_travel_vulnerable_s) {
                    emit("equity_avg_reallocated_travel_vulnerable_s",
                         *r.equity->avg_reallocated_travel_vulnerable_s);
                }
                emit("siting_covered", static_cast<double>(*r.siting_covered));
                emit("siting_uncovered", static_cast<double>(*r.siting_uncovered));
            }
        }
        w.close();
    }

    {
        CsvWriter w(outdir + "/equity_comparison.csv",
                    {"mode", "delta", "case_index", "base_vulnerable_avg_s",
                     "equity_vulnerable_avg_s", "travel_threshold_s"});
        for (const auto& r : report.results) {
            if (!r.equity) continue;
            auto fmt = [](const std::optional<double>& v) {
                return v ? format_double(*v) : std::string("NA");
            };
            w.row({failure_mode_name(r.scenario.spec.mode),
                   format_double(r.scenario.spec.delta),
                   std::to_string(r.scenario.spec.case_index),
                   fmt(r.base.avg_reallocated_travel_vulnerable_s),
                   fmt(r.equity->avg_reallocated_travel_vulnerable_s),
                   report.travel_threshold_s ? format_double(*report.travel_threshold_s)
                                             : std::string("NA")});
        }
        w.close();
    }

    for (const auto& [key, demand] : report.demand_points) {
        write_demand_points_csv(instance, demand,
                                outdir + "/demand_points_" + key.first + "_" +
                                    delta_dir_name(key.second) + ".csv");
    }

    // Summary with both weightings: patient-weighted pools and plain
    // per-scenario means, labeled as such.
    nlohmann::ordered_json summary;
    summary["seed"] = config.master_seed;
    summary["cases_per_delta"] = config.cases_per_delta;
    summary["baseline_avg_travel_s"] = report.baseline_avg_travel_s;
    summary["poverty_line_usd"] = report.poverty_line;
    summary["travel_threshold_s"] = report.travel_threshold_s
                                        ? nlohmann::ordered_json(*report.travel_threshold_s)
                                        : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (FailureMode mode : config.modes) {
        for (double delta : config.deltas) {
            long long n = 0, lost = 0, unserved = 0, retained = 0;
            double retained_time = 0, scen_mean_retained = 0;
            long long scen_with_retained = 0;
            for (const auto& r : report.results) {
                if (r.scenario.spec.mode != mode || r.scenario.spec.delta != delta) continue;
                ++n;
                lost += r.base.lost_access;
                unserved += r.base.unserved;
                retained += r.base.retained;
                if (r.base.avg_retained_travel_s) {
                    retained_time += *r.base.avg_retained_travel_s *
                                     static_cast<double>(r.base.retained);
                    scen_mean_retained += *r.base.avg_retained_travel_s;
                    ++scen_with_retained;
                }
            }
            nlohmann::ordered_json cell;
            cell["mode"] = failure_mode_name(mode);
            cell["delta"] = delta;
            cell["scenarios"] = n;
            cell["mean_lost_access_per_scenario"] =
                n > 0 ? static_cast<double>(lost) / static_cast<double>(n) : 0.0;
            cell["mean_unserved_per_scenario"] =
                n > 0 ? static_cast<double>(unserved) / static_cast<double>(n) : 0.0;
            cell["avg_retained_travel_s_patient_weighted"] =
                retained > 0 ? nlohmann::ordered_json(retained_time / static_cast<double>(retained))
                             : nlohmann::ordered_json(nullptr);
            cell["avg_retained_travel_s_scenario_mean"] =
                scen_with_retained > 0
                    ? nlohmann::ordered_json(scen_mean_retained /
                                             static_cast<double>(scen_with_retained))
                    : nlohmann::ordered_json(nullptr);
            cells.push_back(std::move(cell));
        }
    }
    summary["cells"] = std::move(cells);
    write_text(outdir + "/summary.json", summary.dump(2) + "\n");
}

} // namespace carenet
