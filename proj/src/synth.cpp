#include "h2grid/synth.hpp"

#include "h2grid/error.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace h2g::synth {

namespace {

constexpr double kCenterLat = 51.0;
constexpr double kCenterLon = 10.0;

double round_to(double v, int digits)
{
    const double f = std::pow(10.0, digits);
    return std::round(v * f) / f;
}

std::string padded(char prefix, std::size_t i, std::size_t n)
{
    std::string num = std::to_string(i);
    const std::size_t width = std::to_string(n).size();
    return std::string(1, prefix) + std::string(width > num.size() ? width - num.size() : 0, '0') + num;
}

struct Grid {
    std::size_t cols = 1;
    std::size_t rows = 1;
};

Grid grid_for(std::size_t n)
{
    Grid g;
    g.cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    g.rows = (n + g.cols - 1) / g.cols;
    return g;
}

// Degrees per km at the center latitude.
constexpr double kLatPerKm = 1.0 / 111.2;
double lon_per_km() { return 1.0 / (111.2 * std::cos(kCenterLat * std::numbers::pi / 180.0)); }

}  // namespace

HighwayInstance synth_highway(const SynthParams& p)
{
    if (p.nodes < 2) throw Error(ErrorCode::Param, "synthetic highway needs at least two nodes");
    if (!(p.flow_scale > 0.0)) throw Error(ErrorCode::Param, "flow scale must be positive");
    Rng rng(p.seed);
    const Grid g = grid_for(p.nodes);
    const double spacing = 150.0;
    const double dlat = spacing * kLatPerKm;
    const double dlon = spacing * lon_per_km();
    const double lat0 = kCenterLat - 0.5 * static_cast<double>(g.rows - 1) * dlat;
    const double lon0 = kCenterLon - 0.5 * static_cast<double>(g.cols - 1) * dlon;

    HighwayInstance inst;
    for (std::size_t i = 0; i < p.nodes; ++i) {
        const double r = static_cast<double>(i / g.cols);
        const double c = static_cast<double>(i % g.cols);
        const double lat = round_to(lat0 + r * dlat + rng.uniform(-0.2, 0.2) * dlat, 4);
        const double lon = round_to(lon0 + c * dlon + rng.uniform(-0.2, 0.2) * dlon, 4);
        inst.nodes.push_back({padded('N', i + 1, p.nodes), lat, lon, true});
    }
    auto connect = [&](std::size_t a, std::size_t b) {
        const double d = highway::haversine_distance(inst.nodes[a], inst.nodes[b]);
        inst.edges.push_back({inst.nodes[a].id, inst.nodes[b].id, round_to(d * rng.uniform(1.1, 1.3), 1)});
    };
    for (std::size_t i = 0; i < p.nodes; ++i) {
        if ((i % g.cols) + 1 < g.cols && i + 1 < p.nodes) connect(i, i + 1);
        if (i + g.cols < p.nodes) connect(i, i + g.cols);
    }

    const highway::HighwayNetwork net(inst.nodes, inst.edges);
    std::set<std::pair<std::size_t, std::size_t>> used;
    const std::size_t max_pairs = p.nodes * (p.nodes - 1);
    for (std::size_t attempt = 0; inst.trips.size() < p.trips && attempt < 100 * (p.trips + 1); ++attempt) {
        if (used.size() == max_pairs) break;
        const std::size_t o = rng.index(p.nodes);
        const std::size_t d = rng.index(p.nodes);
        const double flow = std::max(1.0, std::round(rng.uniform(10.0, 120.0) * p.flow_scale));
        if (o == d || !used.insert({o, d}).second) continue;
        highway::OdTrip q{padded('T', inst.trips.size() + 1, p.trips), inst.nodes[o].id, inst.nodes[d].id, flow};
        if (highway::shortest_path(net, q).total_distance <= 50.0) continue;
        inst.trips.push_back(std::move(q));
    }
    return inst;
}

power::PowerSystem synth_power(const SynthParams& p)
{
    if (p.buses == 0 || p.snapshots == 0) throw Error(ErrorCode::Param, "synthetic power system needs buses and snapshots");
    if (!(p.snapshot_hours > 0.0)) throw Error(ErrorCode::Param, "snapshot duration must be positive");
    Rng rng(p.seed ^ 0x9E3779B97F4A7C15ULL);
    const Grid g = grid_for(p.buses);
    const double spacing = 220.0;
    const double dlat = spacing * kLatPerKm;
    const double dlon = spacing * lon_per_km();
    const double lat0 = kCenterLat - 0.5 * static_cast<double>(g.rows - 1) * dlat;
    const double lon0 = kCenterLon - 0.5 * static_cast<double>(g.cols - 1) * dlon;
    const std::size_t T = p.snapshots;

    power::PowerSystem sys;
    sys.snapshot_hours.assign(T, p.snapshot_hours);
    auto hour_of_day = [&](std::size_t t) { return std::fmod(static_cast<double>(t) * p.snapshot_hours, 24.0); };

    for (std::size_t i = 0; i < p.buses; ++i) {
        const double r = static_cast<double>(i / g.cols);
        const double c = static_cast<double>(i % g.cols);
        power::Bus b;
        b.id = padded('B', i + 1, p.buses);
        b.lat = round_to(lat0 + r * dlat + rng.uniform(-0.15, 0.15) * dlat, 4);
        b.lon = round_to(lon0 + c * dlon + rng.uniform(-0.15, 0.15) * dlon, 4);
        const double base = rng.uniform(800.0, 2500.0);
        for (std::size_t t = 0; t < T; ++t) {
            const double shape = 0.85 + 0.15 * std::sin(2.0 * std::numbers::pi * (hour_of_day(t) - 8.0) / 24.0);
            b.load.push_back(round_to(base * shape * rng.uniform(0.97, 1.03), 1));
        }
        sys.buses.push_back(std::move(b));
    }

    auto line = [&](std::size_t a, std::size_t b) {
        power::AcLine l;
        l.id = "L" + std::to_string(sys.lines.size() + 1);
        l.from = sys.buses[a].id;
        l.to = sys.buses[b].id;
        l.length_km = round_to(highway::haversine_distance(sys.buses[a].lat, sys.buses[a].lon, sys.buses[b].lat, sys.buses[b].lon) * 1.15, 1);
        l.reactance = round_to(3e-4 * l.length_km, 6);
        l.existing_mw = 10.0 * std::round(rng.uniform(40.0, 150.0));
        sys.lines.push_back(std::move(l));
    };
    for (std::size_t i = 0; i < p.buses; ++i) {
        if ((i % g.cols) + 1 < g.cols && i + 1 < p.buses) line(i, i + 1);
        if (i + g.cols < p.buses) line(i, i + g.cols);
    }
    if (p.buses >= 4) line(0, g.cols + 1 < p.buses ? g.cols + 1 : p.buses - 1);

    std::size_t north = 0, south = 0;
    for (std::size_t i = 0; i < p.buses; ++i) {
        if (sys.buses[i].lat > sys.buses[north].lat) north = i;
        if (sys.buses[i].lat < sys.buses[south].lat) south = i;
    }
    if (p.buses >= 4 && north != south) {
        power::DcLink k;
        k.id = "DC1";
        k.from = sys.buses[north].id;
        k.to = sys.buses[south].id;
        k.length_km = round_to(highway::haversine_distance(sys.buses[north].lat, sys.buses[north].lon,
                                                           sys.buses[south].lat, sys.buses[south].lon) * 1.1, 1);
        sys.links.push_back(std::move(k));
    }

    for (std::size_t i = 0; i < p.buses; ++i) {
        const power::Bus& b = sys.buses[i];
        const double windiness = 0.2 + 0.3 * std::clamp((b.lat - 47.0) / 8.0, 0.0, 1.0);
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);

        power::Generator w = power::generator_defaults("onwind");
        w.id = "wind_" + b.id;
        w.bus = b.id;
        w.p_nom_max = 10.0 * std::round(rng.uniform(200.0, 400.0));
        for (std::size_t t = 0; t < T; ++t) {
            const double hours = static_cast<double>(t) * p.snapshot_hours;
            const double a = windiness + 0.25 * std::sin(2.0 * std::numbers::pi * hours / 37.0 + phase) + rng.uniform(-0.12, 0.12);
            w.availability.push_back(round_to(std::clamp(a, 0.0, 1.0), 4));
        }
        sys.generators.push_back(std::move(w));

        power::Generator s = power::generator_defaults("solar");
        s.id = "solar_" + b.id;
        s.bus = b.id;
        s.p_nom_max = 10.0 * std::round(rng.uniform(150.0, 300.0));
        for (std::size_t t = 0; t < T; ++t) {
            const double a = std::max(0.0, std::sin(std::numbers::pi * (hour_of_day(t) - 6.0) / 12.0)) * rng.uniform(0.7, 1.0);
            s.availability.push_back(round_to(a, 4));
        }
        sys.generators.push_back(std::move(s));

        if (i % 2 == 0) {
            power::Generator c = power::generator_defaults("CCGT");
            c.id = "ccgt_" + b.id;
            c.bus = b.id;
            sys.generators.push_back(std::move(c));
        }
        power::Generator o = power::generator_defaults("OCGT");
        o.id = "ocgt_" + b.id;
        o.bus = b.id;
        sys.generators.push_back(std::move(o));
    }

    power::StorageUnit bat = power::storage_defaults("battery");
    bat.id = "battery_" + sys.buses[north].id;
    bat.bus = sys.buses[north].id;
    sys.storages.push_back(std::move(bat));
    if (south != north) {
        power::StorageUnit phs = power::storage_defaults("PHS");
        phs.id = "phs_" + sys.buses[south].id;
        phs.bus = sys.buses[south].id;
        phs.p_nom_max = 500.0;
        sys.storages.push_back(std::move(phs));
    }
    return sys;
}

}  // namespace h2g::synth
