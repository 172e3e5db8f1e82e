#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace h2g::highway {

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoNode {
    std::string id;
    double lat = 0.0;
    double lon = 0.0;
    bool is_candidate = true;
};

struct Edge {
    std::string from;
    std::string to;
    double length_km = 0.0;
};

/// Great-circle distance by the haversine formula on a 6371 km sphere.
double haversine_distance(const GeoNode& a, const GeoNode& b);
double haversine_distance(double lat1, double lon1, double lat2, double lon2);

/// Undirected highway graph. Validated on construction and immutable after.
class HighwayNetwork {
public:
    HighwayNetwork() = default;
    HighwayNetwork(std::vector<GeoNode> nodes, std::vector<Edge> edges);

    const std::vector<GeoNode>& nodes() const noexcept { return nodes_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    std::optional<std::size_t> index_of(const std::string& id) const;
    const GeoNode& node(std::size_t index) const { return nodes_.at(index); }
    const GeoNode& node(const std::string& id) const;

    struct Neighbor {
        std::size_t node;
        double length_km;
    };
    const std::vector<Neighbor>& neighbors(std::size_t index) const { return adjacency_.at(index); }

private:
    std::vector<GeoNode> nodes_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

struct OdTrip {
    std::string id;
    std::string origin;
    std::string destination;
    double flow_per_day = 0.0;
};

struct Arc {
    std::string from;
    std::string to;
    double length_km = 0.0;
};

struct TripPath {
    std::string trip_id;
    std::vector<std::string> node_sequence;
    std::vector<Arc> arcs;
    double total_distance = 0.0;
    int refuel_occasions = 0;  // 0 until assigned from a vehicle range

    /// Cumulative distance from the origin to node_sequence[pos].
    double distance_to(std::size_t pos) const;
    std::optional<std::size_t> position_of(const std::string& node_id) const;
};

struct CandidateSet {
    std::string trip_id;
    Arc arc;
    std::vector<std::string> members;
    bool pre_covered = false;
};

struct RoutedTrip {
    OdTrip trip;
    TripPath path;
};

/// Shortest path by Dijkstra. Among equal-length paths the one with the
/// lexicographically smallest node-id sequence wins. Throws Unreachable.
TripPath shortest_path(const HighwayNetwork& net, const OdTrip& trip);

/// ceil(total_distance / range), at least 1. Throws Domain when range <= 0.
int refuel_occasions(double total_distance_km, double range_km);

/// Routes every trip and assigns refuel occasions.
std::vector<RoutedTrip> route_trips(const HighwayNetwork& net, const std::vector<OdTrip>& trips,
                                    double range_km);

/// Keeps trips strictly longer than min_km whose origin differs from the destination.
std::vector<RoutedTrip> filter_trips(const std::vector<RoutedTrip>& trips, double min_km = 50.0);

/// Arc-cover sets: for arc (j,k), candidate nodes at or before j whose path
/// distance to k is within range. Arcs reachable on initial fuel are pre-covered.
std::vector<CandidateSet> build_candidate_sets(const HighwayNetwork& net, const TripPath& path,
                                               double range_km, double initial_fuel_km);

}  // namespace h2g::highway
