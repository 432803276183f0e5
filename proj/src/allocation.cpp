#include "carenet/allocation.hpp"

#include <algorithm>

#include <json.hpp>

#include "carenet/csv.hpp"
#include "carenet/min_cost_flow.hpp"

namespace carenet {

AccessReport assess_access(const Instance& instance, const Scenario& scenario) {
    const auto overlay = apply_closure_indices(instance.network, scenario.closed_edge_indices(instance));

    AccessReport report;
    report.facility_open.assign(instance.facilities.size(), 1);
    for (int j : scenario.closed_facility_indices(instance)) {
        report.facility_open[static_cast<std::size_t>(j)] = 0;
    }

    std::vector<int> origins, dests;
    origins.reserve(instance.block_groups.size());
    dests.reserve(instance.facilities.size());
    for (const auto& bg : instance.block_groups) origins.push_back(bg.centroid_node);
    for (const auto& f : instance.facilities) dests.push_back(f.node);
    report.times = travel_time_matrix(overlay, origins, dests);

    report.lost_demand.assign(instance.block_groups.size(), 0);
    std::vector<long long> retained_visits(instance.facilities.size(), 0);
    for (std::size_t i = 0; i < instance.block_groups.size(); ++i) {
        for (const auto& [fac, count] : instance.block_groups[i].baseline_visits) {
            AccessReport::Pair pair;
            pair.cbg = static_cast<int>(i);
            pair.facility = fac;
            pair.visits = count;
            pair.travel_s = report.times.at(i, static_cast<std::size_t>(fac));
            pair.retained = report.facility_open[static_cast<std::size_t>(fac)] &&
                            !is_unreachable(pair.travel_s);
            if (pair.retained) {
                retained_visits[static_cast<std::size_t>(fac)] += count;
            } else {
                report.lost_demand[i] += count;
            }
            report.pairs.push_back(pair);
        }
    }

    report.remaining_capacity.assign(instance.facilities.size(), 0);
    for (std::size_t j = 0; j < instance.facilities.size(); ++j) {
        if (!report.facility_open[j]) continue; // c_j = 0 for closed facilities
        report.remaining_capacity[j] = instance.facilities[j].total_capacity - retained_visits[j];
        if (report.remaining_capacity[j] < 0) {
            throw RuntimeError("facility '" + instance.facilities[j].id +
                               "' retained more visits than its capacity");
        }
    }
    return report;
}

long long TransportProblem::total_supply() const {
    long long total = 0;
    for (long long p : supply) total += p;
    return total;
}

TransportProblem build_transport_problem(const Instance& instance, const Scenario& scenario,
                                         const AccessReport& report,
                                         const std::optional<EquityConstraint>& equity) {
    (void)scenario;
    TransportProblem problem;
    problem.dummy_cost_us = seconds_to_cost_us(instance.params.dummy_cost_s);

    for (std::size_t i = 0; i < report.lost_demand.size(); ++i) {
        if (report.lost_demand[i] > 0) {
            problem.origin_cbg.push_back(static_cast<int>(i));
            problem.supply.push_back(report.lost_demand[i]);
        }
    }
    for (std::size_t j = 0; j < report.remaining_capacity.size(); ++j) {
        if (report.facility_open[j] && report.remaining_capacity[j] > 0) {
            problem.destination_facility.push_back(static_cast<int>(j));
            problem.capacity.push_back(report.remaining_capacity[j]);
        }
    }

    std::vector<char> is_vulnerable(instance.block_groups.size(), 0);
    if (equity) {
        for (int i : equity->vulnerable) is_vulnerable[static_cast<std::size_t>(i)] = 1;
    }

    problem.cost_us.assign(problem.origin_cbg.size() * problem.destination_facility.size(), -1);
    long long max_cost = 0;
    for (std::size_t o = 0; o < problem.origin_cbg.size(); ++o) {
        const std::size_t cbg = static_cast<std::size_t>(problem.origin_cbg[o]);
        for (std::size_t d = 0; d < problem.destination_facility.size(); ++d) {
            const std::size_t fac = static_cast<std::size_t>(problem.destination_facility[d]);
            const double t = report.times.at(cbg, fac);
            if (is_unreachable(t)) continue; // forbidden, never priced
            if (equity && is_vulnerable[cbg] && t > equity->travel_threshold_s) continue;
            const long long cost = seconds_to_cost_us(t);
            problem.cost_us[o * problem.destination_facility.size() + d] = cost;
            max_cost = std::max(max_cost, cost);
        }
    }
    if (problem.dummy_cost_us <= max_cost) {
        throw ValidationError("dummy cost M (" + std::to_string(problem.dummy_cost_us) +
                              " us) must exceed every finite arc cost (max " +
                              std::to_string(max_cost) + " us)");
    }
    return problem;
}

AllocationPlan solve_transport(const TransportProblem& problem) {
    AllocationPlan plan;
    const std::size_t n_orig = problem.origin_cbg.size();
    const std::size_t n_dest = problem.destination_facility.size();
    if (n_orig == 0) return plan;

    // Node layout: source, origins, destinations, dummy, sink.
    const int source = 0;
    const int first_origin = 1;
    const int first_dest = first_origin + static_cast<int>(n_orig);
    const int dummy = first_dest + static_cast<int>(n_dest);
    const int sink = dummy + 1;
    MinCostFlow mcf(sink + 1);

    const long long total = problem.total_supply();
    for (std::size_t o = 0; o < n_orig; ++o) {
        mcf.add_arc(source, first_origin + static_cast<int>(o), problem.supply[o], 0);
    }
    std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> real_arcs;
    for (std::size_t o = 0; o < n_orig; ++o) {
        for (std::size_t d = 0; d < n_dest; ++d) {
            const long long cost = problem.cost_at(o, d);
            if (cost < 0) continue;
            const int arc = mcf.add_arc(first_origin + static_cast<int>(o),
                                        first_dest + static_cast<int>(d), problem.supply[o], cost);
            real_arcs.push_back({arc, {o, d}});
        }
    }
    std::vector<int> dummy_arcs(n_orig);
    for (std::size_t o = 0; o < n_orig; ++o) {
        dummy_arcs[o] = mcf.add_arc(first_origin + static_cast<int>(o), dummy, problem.supply[o],
                                    problem.dummy_cost_us);
    }
    for (std::size_t d = 0; d < n_dest; ++d) {
        mcf.add_arc(first_dest + static_cast<int>(d), sink, problem.capacity[d], 0);
    }
    mcf.add_arc(dummy, sink, total, 0);

    const auto result = mcf.solve(source, sink, total);
    if (result.flow != total) {
        throw RuntimeError("transport solve moved " + std::to_string(result.flow) + " of " +
                           std::to_string(total) + " patients; dummy capacity invariant broken");
    }
    if (!mcf.certify_optimal()) {
        throw RuntimeError("optimality certificate failed: negative reduced cost in residual graph");
    }

    plan.objective_us = result.cost;
    for (const auto& [arc, od] : real_arcs) {
        const long long f = mcf.flow_on(arc);
        if (f > 0) {
            plan.flows.push_back({problem.origin_cbg[od.first],
                                  problem.destination_facility[od.second], f,
                                  problem.cost_at(od.first, od.second)});
        }
    }
    for (std::size_t o = 0; o < n_orig; ++o) {
        const long long f = mcf.flow_on(dummy_arcs[o]);
        if (f > 0) {
            plan.flows.push_back({problem.origin_cbg[o], kDummy, f, problem.dummy_cost_us});
            plan.dummy_flow_by_cbg[problem.origin_cbg[o]] = f;
        }
    }
    return plan;
}

long long AllocationPlan::total_dummy_flow() const {
    long long total = 0;
    for (const auto& [cbg, f] : dummy_flow_by_cbg) total += f;
    return total;
}

std::map<int, long long> residual_demand(const AllocationPlan& plan) {
    return plan.dummy_flow_by_cbg;
}

Metrics plan_metrics(const Instance& instance, const Scenario& scenario,
                     const AccessReport& report, const AllocationPlan& plan,
                     const TransportProblem& problem, const std::vector<int>& vulnerable) {
    (void)instance;
    (void)scenario;
    Metrics m;
    m.objective_us = plan.objective_us;

    double retained_time = 0;
    for (const auto& pair : report.pairs) {
        if (pair.retained) {
            m.retained += pair.visits;
            retained_time += pair.travel_s * static_cast<double>(pair.visits);
        }
    }
    for (long long p : report.lost_demand) m.lost_access += p;
    if (m.retained > 0) m.avg_retained_travel_s = retained_time / static_cast<double>(m.retained);

    std::vector<char> is_vulnerable(instance.block_groups.size(), 0);
    for (int i : vulnerable) is_vulnerable[static_cast<std::size_t>(i)] = 1;

    long long real_flow = 0, vuln_flow = 0;
    double real_time = 0, vuln_time = 0;
    for (const auto& f : plan.flows) {
        if (f.facility == kDummy) {
            m.unserved += f.patients;
            continue;
        }
        real_flow += f.patients;
        const double t = cost_us_to_seconds(f.cost_us) * static_cast<double>(f.patients);
        real_time += t;
        if (is_vulnerable[static_cast<std::size_t>(f.cbg)]) {
            vuln_flow += f.patients;
            vuln_time += t;
        }
    }
    if (real_flow > 0) m.avg_reallocated_travel_s = real_time / static_cast<double>(real_flow);
    if (vuln_flow > 0) {
        m.avg_reallocated_travel_vulnerable_s = vuln_time / static_cast<double>(vuln_flow);
    }

    // Patients in origins with no permitted real arc at all (pre-solve
    // infeasibility, reported separately from dummy flow).
    for (std::size_t o = 0; o < problem.origin_cbg.size(); ++o) {
        bool any = false;
        for (std::size_t d = 0; d < problem.destination_facility.size() && !any; ++d) {
            any = problem.cost_at(o, d) >= 0;
        }
        if (!any) m.no_real_option += problem.supply[o];
    }
    return m;
}

void write_plan_csv(const Instance& instance, const AllocationPlan& plan,
                    const std::string& path) {
    CsvWriter w(path, {"cbg_id", "facility_id", "patients"});
    auto sorted = plan.flows;
    std::sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
        const auto& ida = instance.block_groups[static_cast<std::size_t>(a.cbg)].id;
        const auto& idb = instance.block_groups[static_cast<std::size_t>(b.cbg)].id;
        if (ida != idb) return ida < idb;
        return a.facility < b.facility;
    });
    for (const auto& f : sorted) {
        w.row({instance.block_groups[static_cast<std::size_t>(f.cbg)].id,
               f.facility == kDummy
                   ? std::string("DUMMY")
                   : instance.facilities[static_cast<std::size_t>(f.facility)].id,
               std::to_string(f.patients)});
    }
    w.close();
}

std::string metrics_to_json(const Metrics& metrics) {
    nlohmann::ordered_json j;
    j["lost_access"] = metrics.lost_access;
    j["unserved"] = metrics.unserved;
    j["no_real_option"] = metrics.no_real_option;
    j["retained"] = metrics.retained;
    j["avg_retained_travel_s"] = metrics.avg_retained_travel_s
                                     ? nlohmann::ordered_json(*metrics.avg_retained_travel_s)
                                     : nlohmann::ordered_json(nullptr);
    j["avg_reallocated_travel_s"] =
        metrics.avg_reallocated_travel_s
            ? nlohmann::ordered_json(*metrics.avg_reallocated_travel_s)
            : nlohmann::ordered_json(nullptr);
    j["avg_reallocated_travel_vulnerable_s"] =
        metrics.avg_reallocated_travel_vulnerable_s
            ? nlohmann::ordered_json(*metrics.avg_reallocated_travel_vulnerable_s)
            : nlohmann::ordered_json(nullptr);
    j["objective_us"] = metrics.objective_us;
    return j.dump(2) + "\n";
}

} // namespace carenet
