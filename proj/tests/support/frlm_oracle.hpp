#pragma once

#include "h2grid/frlm.hpp"
#include "h2grid/highway.hpp"

#include <cstdint>
#include <vector>

namespace oracle {

struct SitingInstance {
    std::vector<h2g::highway::GeoNode> nodes;
    std::vector<h2g::highway::Edge> edges;
    std::vector<h2g::highway::OdTrip> trips;
    h2g::frlm::FrlmConfig config;
};

/// Connected random highway graph with up to max_nodes nodes and up to
/// max_trips OD trips. Some instances are capacity-bound or infeasible.
SitingInstance random_siting_instance(std::uint64_t seed, int max_nodes = 8, int max_trips = 6);

struct SubsetResult {
    bool feasible = false;
    int stations = 0;
    std::vector<std::string> best_subset;
};

/// Tries every subset of candidate nodes in order of size and checks an
/// allocation LP per subset with the tableau oracle. Candidate sets and
/// refuel counts are recomputed here from the paths.
SubsetResult brute_force_siting(const std::vector<h2g::highway::GeoNode>& nodes,
                                const std::vector<h2g::highway::RoutedTrip>& trips,
                                const h2g::frlm::FrlmConfig& cfg);

}  // namespace oracle
