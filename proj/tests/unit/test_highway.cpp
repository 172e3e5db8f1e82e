#include "h2grid/error.hpp"
#include "h2grid/highway.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

using namespace h2g::highway;
using h2g::Error;
using h2g::ErrorCode;

namespace {

double cosine_law_km(double lat1, double lon1, double lat2, double lon2)
{
    const double k = std::numbers::pi / 180.0;
    const double c = std::sin(lat1 * k) * std::sin(lat2 * k) +
                     std::cos(lat1 * k) * std::cos(lat2 * k) * std::cos((lon2 - lon1) * k);
    return 6371.0 * std::acos(std::clamp(c, -1.0, 1.0));
}

HighwayNetwork line(std::initializer_list<double> lengths)
{
    std::vector<GeoNode> nodes;
    std::vector<Edge> edges;
    char id = 'A';
    nodes.push_back({std::string(1, id), 50.0, 8.0, true});
    for (double len : lengths) {
        const std::string from(1, id);
        ++id;
        nodes.push_back({std::string(1, id), 50.0, 8.0 + (id - 'A'), true});
        edges.push_back({from, std::string(1, id), len});
    }
    return HighwayNetwork(nodes, edges);
}

// Exhaustive simple-path search: minimum length, and among minima the
// lexicographically smallest id sequence.
struct Enumerated {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::string> sequence;
};

Enumerated enumerate_paths(const std::vector<GeoNode>& nodes, const std::vector<Edge>& edges,
                           const std::string& from, const std::string& to)
{
    Enumerated out;
    std::vector<std::string> stack{from};
    std::function<void(const std::string&, double)> dfs = [&](const std::string& at, double len) {
        if (at == to) {
            const bool shorter = len < out.best - 1e-9 * std::max(1.0, len);
            const bool tie = !shorter && std::abs(len - out.best) <= 1e-9 * std::max(1.0, len);
            if (shorter || (tie && stack < out.sequence)) {
                out.best = len;
                out.sequence = stack;
            }
            return;
        }
        for (const Edge& e : edges) {
            std::string next;
            if (e.from == at) next = e.to;
            else if (e.to == at) next = e.from;
            else continue;
            if (std::find(stack.begin(), stack.end(), next) != stack.end()) continue;
            stack.push_back(next);
            dfs(next, len + e.length_km);
            stack.pop_back();
        }
    };
    (void)nodes;
    dfs(from, 0.0);
    return out;
}

}  // namespace

TEST_CASE("haversine agrees with the spherical law of cosines")
{
    GeoNode berlin{"BER", 52.52, 13.405, true};
    GeoNode munich{"MUC", 48.137, 11.575, true};
    const double oracle = cosine_law_km(52.52, 13.405, 48.137, 11.575);
    const double d = haversine_distance(berlin, munich);
    CHECK(std::abs(d - oracle) / oracle < 1e-3);
    CHECK(d == haversine_distance(munich, berlin));
    CHECK(haversine_distance(berlin, berlin) == 0.0);

    GeoNode a{"a", 0.0, 0.0, true};
    GeoNode b{"b", 0.0, 180.0, true};
    CHECK(std::abs(haversine_distance(a, b) - std::numbers::pi * 6371.0) < 1.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lat(-89.0, 89.0), lon(-179.0, 179.0);
    for (int i = 0; i < 200; ++i) {
        GeoNode p{"p", lat(rng), lon(rng), true};
        GeoNode q{"q", lat(rng), lon(rng), true};
        const double h = haversine_distance(p, q);
        CHECK(h == haversine_distance(q, p));
        CHECK(h >= 0.0);
        CHECK(std::abs(h - cosine_law_km(p.lat, p.lon, q.lat, q.lon)) < 1e-3 * std::max(1.0, h));
    }
}

TEST_CASE("network validation rejects bad input")
{
    CHECK_THROWS_AS(HighwayNetwork({{"A", 95.0, 0.0, true}}, {}), Error);
    CHECK_THROWS_AS(HighwayNetwork({{"A", 0, 0, true}, {"A", 1, 1, true}}, {}), Error);
    CHECK_THROWS_AS(HighwayNetwork({{"A", 0, 0, true}}, {{"A", "B", 5.0}}), Error);
    CHECK_THROWS_AS(HighwayNetwork({{"A", 0, 0, true}}, {{"A", "A", 5.0}}), Error);
    CHECK_THROWS_AS(HighwayNetwork({{"A", 0, 0, true}, {"B", 0, 1, true}}, {{"A", "B", 0.0}}),
                    Error);
    try {
        HighwayNetwork({{"A", 0, 0, true}, {"B", 0, 1, true}}, {{"A", "B", -1.0}});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Validation);
    }
}

TEST_CASE("shortest path on a single edge")
{
    HighwayNetwork net = line({100.0});
    TripPath p = shortest_path(net, {"t", "A", "B", 10.0});
    CHECK(p.node_sequence == std::vector<std::string>{"A", "B"});
    CHECK(p.total_distance == doctest::Approx(100.0));
    REQUIRE(p.arcs.size() == 1);
    CHECK(p.arcs[0].from == "A");
    CHECK(p.arcs[0].to == "B");
}

TEST_CASE("diamond tie-break picks the lexicographically smallest sequence")
{
    std::vector<GeoNode> nodes{{"S", 0, 0, true}, {"Y", 0, 1, true}, {"X", 1, 0, true},
                               {"T", 1, 1, true}};
    std::vector<Edge> edges{{"S", "Y", 50}, {"Y", "T", 50}, {"S", "X", 50}, {"X", "T", 50}};
    HighwayNetwork net(nodes, edges);
    TripPath p = shortest_path(net, {"t", "S", "T", 1.0});
    CHECK(p.node_sequence == std::vector<std::string>{"S", "X", "T"});
    TripPath back = shortest_path(net, {"r", "T", "S", 1.0});
    CHECK(back.node_sequence == std::vector<std::string>{"T", "X", "S"});
}

TEST_CASE("unreachable destination and unknown nodes")
{
    HighwayNetwork net({{"A", 0, 0, true}, {"B", 0, 1, true}, {"C", 0, 2, true}},
                       {{"A", "B", 10.0}});
    try {
        shortest_path(net, {"t", "A", "C", 1.0});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Unreachable);
    }
    CHECK_THROWS_AS(shortest_path(net, {"t", "A", "Z", 1.0}), Error);
}

TEST_CASE("random graphs match exhaustive path enumeration")
{
    std::mt19937_64 rng(2024);
    for (int instance = 0; instance < 60; ++instance) {
        const int n = 5 + instance % 6;
        std::vector<GeoNode> nodes;
        for (int i = 0; i < n; ++i) nodes.push_back({"n" + std::to_string(i), 0.0, 0.1 * i, true});
        std::vector<Edge> edges;
        std::uniform_int_distribution<int> len(1, 6);  // small integers force ties
        std::bernoulli_distribution keep(0.45);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (j == i + 1 || keep(rng)) edges.push_back({nodes[i].id, nodes[j].id, 10.0 * len(rng)});
            }
        }
        HighwayNetwork net(nodes, edges);
        std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
        for (int o = 0; o < n; ++o) {
            for (int d = 0; d < n; ++d) {
                if (o == d) continue;
                TripPath p = shortest_path(net, {"q", nodes[o].id, nodes[d].id, 1.0});
                Enumerated ref = enumerate_paths(nodes, edges, nodes[o].id, nodes[d].id);
                CHECK(p.total_distance == doctest::Approx(ref.best).epsilon(1e-12));
                CHECK(p.node_sequence == ref.sequence);
                double sum = 0.0;
                for (std::size_t a = 0; a < p.arcs.size(); ++a) {
                    CHECK(p.arcs[a].from == p.node_sequence[a]);
                    CHECK(p.arcs[a].to == p.node_sequence[a + 1]);
                    sum += p.arcs[a].length_km;
                }
                CHECK(sum == p.total_distance);
                dist[o][d] = p.total_distance;
            }
        }
        for (int o = 0; o < n; ++o) {
            for (int d = 0; d < n; ++d) {
                for (int m = 0; m < n; ++m) {
                    CHECK(dist[o][d] <= dist[o][m] + dist[m][d] + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("refuel occasions")
{
    CHECK(refuel_occasions(200, 250) == 1);
    CHECK(refuel_occasions(1000, 400) == 3);
    CHECK(refuel_occasions(400, 400) == 1);
    CHECK(refuel_occasions(401, 400) == 2);
    CHECK_THROWS_AS(refuel_occasions(100, 0), Error);
    CHECK_THROWS_AS(refuel_occasions(100, -5), Error);

    int prev = 0;
    for (double d = 10.0; d < 3000.0; d += 37.0) {
        const int l = refuel_occasions(d, 350.0);
        CHECK(l >= prev);
        prev = l;
    }
    prev = 1000;
    for (double r = 50.0; r < 2000.0; r += 13.0) {
        const int l = refuel_occasions(1500.0, r);
        CHECK(l <= prev);
        prev = l;
    }
}

TEST_CASE("trip filtering")
{
    auto routed = [](std::string o, std::string d, double km) {
        RoutedTrip t;
        t.trip = {"t", o, d, 1.0};
        t.path.total_distance = km;
        return t;
    };
    CHECK(filter_trips({routed("A", "B", 49.0)}).empty());
    CHECK(filter_trips({routed("A", "B", 51.0)}).size() == 1);
    CHECK(filter_trips({routed("A", "B", 50.0)}).empty());
    CHECK(filter_trips({routed("A", "A", 500.0)}).empty());
    CHECK(filter_trips({}).empty());
}

TEST_CASE("candidate sets on a short line are all pre-covered")
{
    HighwayNetwork net = line({100.0, 100.0});
    TripPath p = shortest_path(net, {"t", "A", "C", 100.0});
    auto sets = build_candidate_sets(net, p, 250.0, 250.0);
    REQUIRE(sets.size() == 2);
    CHECK(sets[0].members == std::vector<std::string>{"A"});
    CHECK(sets[0].pre_covered);
    CHECK(sets[1].members == std::vector<std::string>{"A", "B"});
    CHECK(sets[1].pre_covered);
}

TEST_CASE("candidate sets on a long line exclude out-of-range nodes")
{
    HighwayNetwork net = line({200.0, 200.0});
    TripPath p = shortest_path(net, {"t", "A", "C", 100.0});
    auto sets = build_candidate_sets(net, p, 250.0, 250.0);
    REQUIRE(sets.size() == 2);
    CHECK(sets[0].members == std::vector<std::string>{"A"});
    CHECK(sets[0].pre_covered);
    CHECK(sets[1].members == std::vector<std::string>{"B"});
    CHECK_FALSE(sets[1].pre_covered);
}

TEST_CASE("candidate sets respect the candidate flag and membership")
{
    std::vector<GeoNode> nodes{{"A", 0, 0, true}, {"B", 0, 1, false}, {"C", 0, 2, true},
                               {"D", 0, 3, true}};
    HighwayNetwork net(nodes, {{"A", "B", 120}, {"B", "C", 90}, {"C", "D", 150}});
    TripPath p = shortest_path(net, {"t", "A", "D", 5.0});
    auto sets = build_candidate_sets(net, p, 300.0, 100.0);
    REQUIRE(sets.size() == 3);
    for (const CandidateSet& cs : sets) {
        CHECK_FALSE(cs.pre_covered);
        for (const std::string& m : cs.members) {
            CHECK(p.position_of(m).has_value());
            CHECK(m != "B");
            CHECK(*p.position_of(m) <= *p.position_of(cs.arc.from));
        }
    }
    CHECK(sets[2].members == std::vector<std::string>{"C"});

    auto all = build_candidate_sets(net, p, 400.0, 400.0);
    for (const CandidateSet& cs : all) CHECK(cs.pre_covered);
}

TEST_CASE("route_trips assigns refuel occasions")
{
    HighwayNetwork net = line({300.0, 300.0, 300.0});
    auto routed = route_trips(net, {{"q1", "A", "D", 10.0}, {"q2", "B", "C", 5.0}}, 400.0);
    REQUIRE(routed.size() == 2);
    CHECK(routed[0].path.refuel_occasions == 3);
    CHECK(routed[1].path.refuel_occasions == 1);
}
