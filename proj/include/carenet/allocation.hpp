#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "carenet/instance.hpp"
#include "carenet/scenarios.hpp"

namespace carenet {

// Costs are carried as integer microseconds so min-cost-flow arithmetic
// and the optimality certificate are exact; reports convert to seconds.
inline long long seconds_to_cost_us(double seconds) {
    return static_cast<long long>(std::llround(seconds * 1e6));
}
inline double cost_us_to_seconds(long long us) { return static_cast<double>(us) / 1e6; }

// Which baseline (CBG, facility) pairs survived the scenario, plus the
// flooded-overlay travel times for every CBG x facility pair.
struct AccessReport {
    struct Pair {
        int cbg = -1;
        int facility = -1;
        long long visits = 0;
        bool retained = false;
        double travel_s = kUnreachable; // on the flooded overlay
    };
    std::vector<Pair> pairs;
    std::vector<long long> lost_demand;        // p_i, per CBG
    std::vector<long long> remaining_capacity; // c_j, per facility (0 when closed)
    std::vector<char> facility_open;
    TravelTimeMatrix times; // origins: all CBG centroids; destinations: all facility nodes
};

AccessReport assess_access(const Instance& instance, const Scenario& scenario);

struct EquityConstraint {
    double travel_threshold_s = 0; // T*
    std::vector<int> vulnerable;   // CBG indices in S'_c
};

inline constexpr int kDummy = -1; // facility slot for the overflow destination

struct TransportProblem {
    std::vector<int> origin_cbg;                 // CBGs with p_i > 0
    std::vector<long long> supply;               // p_i
    std::vector<int> destination_facility;       // open facilities with c_j > 0
    std::vector<long long> capacity;             // c_j
    std::vector<long long> cost_us;              // row-major origins x destinations; -1 forbidden
    long long dummy_cost_us = 0;                 // M

    long long cost_at(std::size_t o, std::size_t d) const {
        return cost_us[o * destination_facility.size() + d];
    }
    long long total_supply() const;
};

// Origins: lost CBGs; destinations: open facilities with spare capacity;
// unreachable arcs forbidden; with `equity`, real arcs above T* from
// vulnerable origins are forbidden as well (dummy always permitted).
TransportProblem build_transport_problem(const Instance& instance, const Scenario& scenario,
                                         const AccessReport& report,
                                         const std::optional<EquityConstraint>& equity);

struct AllocationPlan {
    struct Flow {
        int cbg = -1;
        int facility = kDummy; // kDummy = overflow
        long long patients = 0;
        long long cost_us = 0; // per patient
    };
    std::vector<Flow> flows;
    long long objective_us = 0;                 // includes M-weighted dummy flow
    std::map<int, long long> dummy_flow_by_cbg; // per-CBG unserved patients

    long long total_dummy_flow() const;
};

// Provably optimal integral solution of the transportation problem.
// Feasible by construction (the dummy absorbs any overflow); throws
// RuntimeError if the optimality certificate fails.
AllocationPlan solve_transport(const TransportProblem& problem);

// p_i^dt: per-CBG dummy flow of an equity-constrained plan, keyed by CBG index.
std::map<int, long long> residual_demand(const AllocationPlan& plan);

struct Metrics {
    long long lost_access = 0;  // sum of p_i
    long long unserved = 0;     // dummy flow after the solve
    long long no_real_option = 0; // patients in origins with no permitted real arc
    long long retained = 0;
    std::optional<double> avg_retained_travel_s;
    std::optional<double> avg_reallocated_travel_s;            // real flows only, M excluded
    std::optional<double> avg_reallocated_travel_vulnerable_s; // restricted to S'_c origins
    long long objective_us = 0;
};

Metrics plan_metrics(const Instance& instance, const Scenario& scenario,
                     const AccessReport& report, const AllocationPlan& plan,
                     const TransportProblem& problem,
                     const std::vector<int>& vulnerable = {});

void write_plan_csv(const Instance& instance, const AllocationPlan& plan,
                    const std::string& path);
std::string metrics_to_json(const Metrics& metrics);

} // namespace carenet
