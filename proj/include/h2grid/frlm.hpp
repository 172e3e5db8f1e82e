#pragma once

#include "h2grid/highway.hpp"
#include "h2grid/lp.hpp"

#include <map>
#include <string>
#include <vector>

namespace h2g::frlm {

struct FrlmConfig {
    double range_km = 0.0;          // required, no default
    double initial_fuel_km = -1.0;  // negative means "same as range"
    double fuel_per_km = 0.066;     // kg/km
    double node_capacity = 30000.0; // kg/day
    double coverage_target = 1.0;

    double effective_initial_fuel() const { return initial_fuel_km < 0.0 ? range_km : initial_fuel_km; }
    /// Throws Param on non-positive values or a coverage target other than 1.
    void validate() const;
};

struct TripData {
    std::string id;
    double flow = 0.0;
    double distance_km = 0.0;
    int refuel_occasions = 1;
    std::vector<std::string> path_candidates;  // on-path candidate nodes in path order
};

struct AllocationVar {
    std::string node;
    std::size_t trip = 0;  // index into FrlmModel::trips
    lp::VarId var;
    double kg_per_unit = 0.0;  // f_q * p * d_q / l_q
};

struct FrlmModel {
    lp::LinearProgram lp;
    FrlmConfig config;
    std::vector<std::string> candidates;  // sorted by id, aligned with z
    std::vector<lp::VarId> z;
    std::vector<AllocationVar> x;
    std::vector<TripData> trips;
};

struct Allocation {
    std::string node;
    std::string trip_id;
    double value = 0.0;
};

struct SitingSolution {
    std::vector<std::string> stations;  // sorted ids of open stations
    std::vector<Allocation> allocations;
    std::map<std::string, double> node_load;  // kg/day per open station
    int objective = 0;
    std::size_t nodes_explored = 0;
};

/// candidate_sets[k] holds the sets for trips[k] (from build_candidate_sets
/// with the same range and initial fuel). Throws InconsistentInput on mismatch.
FrlmModel build_model(const highway::HighwayNetwork& net, const std::vector<highway::RoutedTrip>& trips,
                      const std::vector<std::vector<highway::CandidateSet>>& candidate_sets,
                      const FrlmConfig& cfg);

/// Routes nothing; derives candidate sets from the routed trips and cfg.
FrlmModel build_model(const highway::HighwayNetwork& net, const std::vector<highway::RoutedTrip>& trips,
                      const FrlmConfig& cfg);

/// Exact MILP solve. Throws Infeasible with the violated requirements as details.
SitingSolution solve_siting(const FrlmModel& model, const lp::SolverOptions& options = {});

/// load(i) = sum over trips of f_q * p * d_q / l_q * x_iq, for nodes with positive allocation.
std::map<std::string, double> station_loads(const std::vector<Allocation>& allocations,
                                            const std::vector<highway::RoutedTrip>& trips,
                                            const FrlmConfig& cfg);

/// Re-checks bounds, integrality and every constraint of the model (1e-6 absolute).
std::vector<std::string> verify_solution(const SitingSolution& solution, const FrlmModel& model);

}  // namespace h2g::frlm
