#pragma once

#include <map>
#include <string>
#include <vector>

#include "carenet/allocation.hpp"
#include "carenet/instance.hpp"

namespace carenet {

// Residual patients vs candidate temporary-facility sites (all CBG
// centroids, self-assignment excluded unless allow_self_site).
struct SitingProblem {
    std::vector<int> residual_cbg;           // CBGs with p_i^dt > 0
    std::vector<long long> residual_demand;  // p_i^dt
    std::vector<double> cost_s;              // row-major residual x all CBGs; kUnreachable forbidden
    std::size_t n_sites = 0;                 // = number of CBGs in the instance
    bool allow_self_site = false;

    double cost_at(std::size_t r, std::size_t site) const { return cost_s[r * n_sites + site]; }
};

// Costs come from the same flooded overlay as the re-allocation stage.
SitingProblem build_siting_problem(const Instance& instance, const Scenario& scenario,
                                   const std::map<int, long long>& residual);

struct SitingPlan {
    struct Flow {
        int origin_cbg = -1;
        int site_cbg = -1;
        long long patients = 0;
        double travel_s = 0;
    };
    std::vector<Flow> flows;
    long long covered = 0;
    double total_time_s = 0;
    std::map<int, long long> uncovered; // per-CBG residue with no reachable site
};

// Lexicographic optimum: maximize covered patients, then minimize total
// time. Sites are uncapacitated, so the problem decomposes per patient:
// everyone with a finitely-reachable foreign centroid goes to the
// cheapest one (ties to the smaller site index).
SitingPlan solve_siting(const SitingProblem& problem);

// Per-site inbound patients summed across a case batch; zero-total sites
// omitted. Keys are CBG indices of a common instance.
std::map<int, long long> aggregate_demand_points(const std::vector<SitingPlan>& plans);

void write_siting_csv(const Instance& instance, const SitingPlan& plan, const std::string& path);
void write_demand_points_csv(const Instance& instance, const std::map<int, long long>& demand,
                             const std::string& path);

} // namespace carenet
