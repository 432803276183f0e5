#include "carenet/siting.hpp"

#include <algorithm>

#include "carenet/csv.hpp"

namespace carenet {

SitingProblem build_siting_problem(const Instance& instance, const Scenario& scenario,
                                   const std::map<int, long long>& residual) {
    SitingProblem problem;
    problem.n_sites = instance.block_groups.size();
    problem.allow_self_site = instance.params.allow_self_site;
    for (const auto& [cbg, p] : residual) {
        if (p > 0) {
            problem.residual_cbg.push_back(cbg);
            problem.residual_demand.push_back(p);
        }
    }
    if (problem.residual_cbg.empty()) return problem;

    const auto overlay =
        apply_closure_indices(instance.network, scenario.closed_edge_indices(instance));
    std::vector<int> origins, sites;
    for (int cbg : problem.residual_cbg) {
        origins.push_back(instance.block_groups[static_cast<std::size_t>(cbg)].centroid_node);
    }
    for (const auto& bg : instance.block_groups) sites.push_back(bg.centroid_node);
    const auto matrix = travel_time_matrix(overlay, origins, sites);
    problem.cost_s = matrix.times;
    return problem;
}

SitingPlan solve_siting(const SitingProblem& problem) {
    SitingPlan plan;
    for (std::size_t r = 0; r < problem.residual_cbg.size(); ++r) {
        const int origin = problem.residual_cbg[r];
        int best_site = -1;
        double best_time = kUnreachable;
        for (std::size_t s = 0; s < problem.n_sites; ++s) {
            if (!problem.allow_self_site && static_cast<int>(s) == origin) continue;
            const double t = problem.cost_at(r, s);
            if (is_unreachable(t)) continue;
            if (t < best_time) { // strict: ties keep the smaller site index
                best_time = t;
                best_site = static_cast<int>(s);
            }
        }
        const long long p = problem.residual_demand[r];
        if (best_site < 0) {
            plan.uncovered[origin] += p;
        } else {
            plan.flows.push_back({origin, best_site, p, best_time});
            plan.covered += p;
            plan.total_time_s += best_time * static_cast<double>(p);
        }
    }
    return plan;
}

std::map<int, long long> aggregate_demand_points(const std::vector<SitingPlan>& plans) {
    std::map<int, long long> demand;
    for (const auto& plan : plans) {
        for (const auto& f : plan.flows) demand[f.site_cbg] += f.patients;
    }
    return demand;
}

void write_siting_csv(const Instance& instance, const SitingPlan& plan, const std::string& path) {
    CsvWriter w(path, {"origin_cbg", "site_cbg", "patients"});
    auto sorted = plan.flows;
    std::sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
        if (a.origin_cbg != b.origin_cbg) return a.origin_cbg < b.origin_cbg;
        return a.site_cbg < b.site_cbg;
    });
    for (const auto& f : sorted) {
        w.row({instance.block_groups[static_cast<std::size_t>(f.origin_cbg)].id,
               instance.block_groups[static_cast<std::size_t>(f.site_cbg)].id,
               std::to_string(f.patients)});
    }
    w.close();
}

void write_demand_points_csv(const Instance& instance, const std::map<int, long long>& demand,
                             const std::string& path) {
    CsvWriter w(path, {"site_cbg", "total_demand"});
    std::vector<std::pair<std::string, long long>> rows;
    for (const auto& [site, total] : demand) {
        if (total > 0) {
            rows.emplace_back(instance.block_groups[static_cast<std::size_t>(site)].id, total);
        }
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [id, total] : rows) w.row({id, std::to_string(total)});
    w.close();
}

} // namespace carenet
