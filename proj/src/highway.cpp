#include "h2grid/highway.hpp"

#include "h2grid/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace h2g::highway {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

bool same_length(double a, double b)
{
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<double> dijkstra(const HighwayNetwork& net, std::size_t source)
{
    std::vector<double> dist(net.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        for (const auto& nb : net.neighbors(u)) {
            const double nd = d + nb.length_km;
            if (nd < dist[nb.node]) {
                dist[nb.node] = nd;
                queue.emplace(nd, nb.node);
            }
        }
    }
    return dist;
}

}  // namespace

double haversine_distance(double lat1, double lon1, double lat2, double lon2)
{
    const double p1 = lat1 * kDegToRad;
    const double p2 = lat2 * kDegToRad;
    const double dp = (lat2 - lat1) * kDegToRad;
    const double dl = (lon2 - lon1) * kDegToRad;
    const double sp = std::sin(dp / 2.0);
    const double sl = std::sin(dl / 2.0);
    const double h = sp * sp + std::cos(p1) * std::cos(p2) * sl * sl;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

double haversine_distance(const GeoNode& a, const GeoNode& b)
{
    // Order the arguments so the result is bit-identical in both directions.
    if (std::tie(a.lat, a.lon) > std::tie(b.lat, b.lon)) {
        return haversine_distance(b.lat, b.lon, a.lat, a.lon);
    }
    return haversine_distance(a.lat, a.lon, b.lat, b.lon);
}

HighwayNetwork::HighwayNetwork(std::vector<GeoNode> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges))
{
    std::vector<std::string> issues;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const GeoNode& n = nodes_[i];
        if (!(n.lat >= -90.0 && n.lat <= 90.0) || !(n.lon >= -180.0 && n.lon <= 180.0)) {
            issues.push_back("node '" + n.id + "' has coordinates out of range");
        }
        if (!index_.emplace(n.id, i).second) issues.push_back("duplicate node id '" + n.id + "'");
    }
    adjacency_.assign(nodes_.size(), {});
    for (const Edge& e : edges_) {
        auto a = index_.find(e.from);
        auto b = index_.find(e.to);
        if (a == index_.end() || b == index_.end()) {
            issues.push_back("edge " + e.from + "-" + e.to + " references an unknown node");
            continue;
        }
        if (a->second == b->second) {
            issues.push_back("edge " + e.from + "-" + e.to + " is a self-loop");
            continue;
        }
        if (!(e.length_km > 0.0) || !std::isfinite(e.length_km)) {
            issues.push_back("edge " + e.from + "-" + e.to + " must have positive length");
            continue;
        }
        adjacency_[a->second].push_back({b->second, e.length_km});
        adjacency_[b->second].push_back({a->second, e.length_km});
    }
    if (!issues.empty()) {
        throw Error(ErrorCode::Validation, "invalid highway network: " + issues.front(), issues);
    }
    for (auto& adj : adjacency_) {
        std::sort(adj.begin(), adj.end(), [this](const Neighbor& x, const Neighbor& y) {
            if (nodes_[x.node].id != nodes_[y.node].id) return nodes_[x.node].id < nodes_[y.node].id;
            return x.length_km < y.length_km;
        });
    }
}

std::optional<std::size_t> HighwayNetwork::index_of(const std::string& id) const
{
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const GeoNode& HighwayNetwork::node(const std::string& id) const
{
    auto idx = index_of(id);
    if (!idx) throw Error(ErrorCode::InconsistentInput, "unknown node '" + id + "'");
    return nodes_[*idx];
}

double TripPath::distance_to(std::size_t pos) const
{
    double d = 0.0;
    for (std::size_t i = 0; i < pos && i < arcs.size(); ++i) d += arcs[i].length_km;
    return d;
}

std::optional<std::size_t> TripPath::position_of(const std::string& node_id) const
{
    auto it = std::find(node_sequence.begin(), node_sequence.end(), node_id);
    if (it == node_sequence.end()) return std::nullopt;
    return static_cast<std::size_t>(it - node_sequence.begin());
}

TripPath shortest_path(const HighwayNetwork& net, const OdTrip& trip)
{
    const auto src = net.index_of(trip.origin);
    const auto dst = net.index_of(trip.destination);
    if (!src || !dst) {
        throw Error(ErrorCode::InconsistentInput,
                    "trip '" + trip.id + "' references a node outside the network");
    }
    TripPath path;
    path.trip_id = trip.id;
    if (*src == *dst) {
        path.node_sequence = {trip.origin};
        return path;
    }

    const std::vector<double> from_src = dijkstra(net, *src);
    if (!std::isfinite(from_src[*dst])) {
        throw Error(ErrorCode::Unreachable, "no path from '" + trip.origin + "' to '" +
                                                trip.destination + "' for trip '" + trip.id + "'");
    }
    const std::vector<double> to_dst = dijkstra(net, *dst);
    const double best = from_src[*dst];

    // Greedy walk: at each node step to the smallest-id neighbour that stays on
    // some shortest path. Neighbour lists are sorted by id.
    std::size_t at = *src;
    path.node_sequence.push_back(net.node(at).id);
    double travelled = 0.0;
    while (at != *dst) {
        bool moved = false;
        for (const auto& nb : net.neighbors(at)) {
            if (same_length(travelled + nb.length_km + to_dst[nb.node], best)) {
                path.arcs.push_back({net.node(at).id, net.node(nb.node).id, nb.length_km});
                travelled += nb.length_km;
                at = nb.node;
                path.node_sequence.push_back(net.node(at).id);
                moved = true;
                break;
            }
        }
        if (!moved || path.node_sequence.size() > net.size()) {
            throw Error(ErrorCode::Internal, "shortest-path reconstruction failed for trip '" +
                                                 trip.id + "'");
        }
    }
    path.total_distance = travelled;
    return path;
}

int refuel_occasions(double total_distance_km, double range_km)
{
    if (!(range_km > 0.0)) throw Error(ErrorCode::Domain, "vehicle range must be positive");
    if (total_distance_km <= 0.0) return 1;
    const double ratio = total_distance_km / range_km;
    const double occasions = std::ceil(ratio - 1e-12 * std::max(1.0, ratio));
    return std::max(1, static_cast<int>(occasions));
}

std::vector<RoutedTrip> route_trips(const HighwayNetwork& net, const std::vector<OdTrip>& trips,
                                    double range_km)
{
    std::vector<RoutedTrip> out;
    out.reserve(trips.size());
    for (const OdTrip& t : trips) {
        TripPath p = shortest_path(net, t);
        p.refuel_occasions = refuel_occasions(p.total_distance, range_km);
        out.push_back({t, std::move(p)});
    }
    return out;
}

std::vector<RoutedTrip> filter_trips(const std::vector<RoutedTrip>& trips, double min_km)
{
    std::vector<RoutedTrip> kept;
    for (const RoutedTrip& t : trips) {
        if (t.trip.origin == t.trip.destination) continue;
        if (!(t.path.total_distance > min_km)) continue;
        kept.push_back(t);
    }
    return kept;
}

std::vector<CandidateSet> build_candidate_sets(const HighwayNetwork& net, const TripPath& path,
                                               double range_km, double initial_fuel_km)
{
    if (!(range_km > 0.0)) throw Error(ErrorCode::Domain, "vehicle range must be positive");
    std::vector<double> cumulative(path.node_sequence.size(), 0.0);
    for (std::size_t i = 0; i < path.arcs.size(); ++i) {
        cumulative[i + 1] = cumulative[i] + path.arcs[i].length_km;
    }
    const double eps = 1e-9 * std::max(1.0, range_km);

    std::vector<CandidateSet> sets;
    sets.reserve(path.arcs.size());
    for (std::size_t a = 0; a < path.arcs.size(); ++a) {
        const std::size_t j = a;
        const std::size_t k = a + 1;
        CandidateSet cs;
        cs.trip_id = path.trip_id;
        cs.arc = path.arcs[a];
        cs.pre_covered = cumulative[k] <= initial_fuel_km + eps;
        for (std::size_t i = 0; i <= j; ++i) {
            const GeoNode& n = net.node(path.node_sequence[i]);
            if (!n.is_candidate) continue;
            if (cumulative[k] - cumulative[i] <= range_km + eps) cs.members.push_back(n.id);
        }
        sets.push_back(std::move(cs));
    }
    return sets;
}

}  // namespace h2g::highway
