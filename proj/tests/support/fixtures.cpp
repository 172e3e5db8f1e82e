#include "fixtures.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace fixture {

using namespace h2g::power;

PowerSystem single_bus_gas(std::size_t snapshots, double load_mw)
{
    PowerSystem sys;
    sys.buses.push_back({"B0", 50.0, 9.0, std::vector<double>(snapshots, load_mw)});
    Generator g = generator_defaults("CCGT");
    g.id = "gas";
    g.bus = "B0";
    sys.generators.push_back(g);
    sys.snapshot_hours.assign(snapshots, 8760.0 / static_cast<double>(snapshots));
    return sys;
}

PowerSystem north_south(bool congested, std::size_t snapshots)
{
    PowerSystem sys;
    sys.snapshot_hours.assign(snapshots, 2.0);
    std::vector<double> load(snapshots), wind(snapshots);
    for (std::size_t t = 0; t < snapshots; ++t) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(snapshots);
        load[t] = 800.0 + 200.0 * std::sin(phase);
        wind[t] = 0.55 + 0.35 * std::cos(phase);
    }
    sys.buses.push_back({"North", 54.0, 9.5, std::vector<double>(snapshots, 100.0)});
    sys.buses.push_back({"South", 48.5, 10.5, load});

    AcLine line;
    line.id = "NS";
    line.from = "North";
    line.to = "South";
    line.length_km = 600.0;
    line.reactance = 0.2;
    line.existing_mw = 300.0;
    if (congested) line.max_mw = 300.0;
    sys.lines.push_back(line);

    Generator w = generator_defaults("onwind");
    w.id = "wind_north";
    w.bus = "North";
    w.availability = wind;
    sys.generators.push_back(w);

    Generator g = generator_defaults("CCGT");
    g.id = "gas_south";
    g.bus = "South";
    sys.generators.push_back(g);
    Generator g2 = generator_defaults("OCGT");
    g2.id = "peak_north";
    g2.bus = "North";
    sys.generators.push_back(g2);
    return sys;
}

PowerSystem random_system(std::uint64_t seed, std::size_t buses, std::size_t snapshots)
{
    std::mt19937_64 rng(seed);
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    PowerSystem sys;
    sys.snapshot_hours.assign(snapshots, 2.0);
    for (std::size_t b = 0; b < buses; ++b) {
        std::vector<double> load(snapshots);
        const double base = u(50.0, 400.0);
        for (std::size_t t = 0; t < snapshots; ++t) load[t] = base * (0.8 + 0.4 * u(0.0, 1.0));
        sys.buses.push_back({"B" + std::to_string(b), u(47.5, 54.5), u(6.5, 14.5), load});
    }
    for (std::size_t b = 0; b + 1 < buses; ++b) {
        AcLine l;
        l.id = "L" + std::to_string(b);
        l.from = sys.buses[b].id;
        l.to = sys.buses[b + 1].id;
        l.length_km = std::round(u(80.0, 400.0));
        l.reactance = u(0.05, 0.3);
        l.existing_mw = std::round(u(50.0, 400.0));
        sys.lines.push_back(l);
    }
    if (buses >= 3) {
        AcLine l;
        l.id = "Lloop";
        l.from = sys.buses[0].id;
        l.to = sys.buses[buses - 1].id;
        l.length_km = std::round(u(80.0, 400.0));
        l.reactance = u(0.05, 0.3);
        l.existing_mw = std::round(u(50.0, 400.0));
        sys.lines.push_back(l);
        DcLink k;
        k.id = "DC0";
        k.from = sys.buses[1].id;
        k.to = sys.buses[buses - 1].id;
        k.length_km = std::round(u(200.0, 600.0));
        sys.links.push_back(k);
    }
    for (std::size_t b = 0; b < buses; ++b) {
        const std::string& bus = sys.buses[b].id;
        Generator w = generator_defaults("onwind");
        w.id = "wind" + std::to_string(b);
        w.bus = bus;
        w.p_nom_max = u(200.0, 1500.0);
        for (std::size_t t = 0; t < snapshots; ++t) w.availability.push_back(std::clamp(u(0.0, 1.0) * u(0.3, 1.0), 0.0, 1.0));
        sys.generators.push_back(w);
        Generator s = generator_defaults("solar");
        s.id = "solar" + std::to_string(b);
        s.bus = bus;
        for (std::size_t t = 0; t < snapshots; ++t) {
            const double hour = std::fmod(2.0 * static_cast<double>(t), 24.0);
            s.availability.push_back(std::max(0.0, std::sin(std::numbers::pi * (hour - 6.0) / 12.0)) * u(0.6, 1.0));
        }
        sys.generators.push_back(s);
        if (b % 2 == 0) {
            Generator g = generator_defaults(b % 4 == 0 ? "CCGT" : "OCGT");
            g.id = "gas" + std::to_string(b);
            g.bus = bus;
            sys.generators.push_back(g);
        }
    }
    StorageUnit bat = storage_defaults("battery");
    bat.id = "bat0";
    bat.bus = sys.buses[0].id;
    sys.storages.push_back(bat);
    if (buses >= 2) {
        StorageUnit phs = storage_defaults("PHS");
        phs.id = "phs1";
        phs.bus = sys.buses[1].id;
        phs.p_nom_max = 200.0;
        sys.storages.push_back(phs);
    }
    return sys;
}

}  // namespace fixture

namespace fixture {

CoupledFixture coupled(std::uint64_t seed, std::size_t snapshots)
{
    CoupledFixture f;
    f.sys = random_system(seed, 2 + seed % 3, snapshots);
    std::mt19937_64 rng(seed * 7919 + 1);
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    const std::size_t n = 2 + seed % 3;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& bus = f.sys.buses[static_cast<std::size_t>(u(0.0, static_cast<double>(f.sys.buses.size()) - 1e-9))];
        f.sites.push_back(h2g::catalog::make_site("S" + std::to_string(i), bus.lat + u(-0.3, 0.3), bus.lon + u(-0.3, 0.3),
                                                   std::round(u(5000.0, 30000.0))));
    }
    f.profile = h2g::catalog::synth_profile({}, snapshots, f.sys.snapshot_hours[0]);
    return f;
}

CoupledFixture north_south_stations(std::size_t snapshots)
{
    CoupledFixture f;
    f.sys = north_south(true, snapshots);
    for (const auto& b : f.sys.buses) f.sites.push_back(h2g::catalog::make_site("H_" + b.id, b.lat, b.lon, 12000.0));
    f.profile = h2g::catalog::synth_profile({}, snapshots, f.sys.snapshot_hours[0]);
    return f;
}

CoupledFixture five_bus_gradient(std::size_t snapshots)
{
    CoupledFixture f;
    PowerSystem& sys = f.sys;
    sys.snapshot_hours.assign(snapshots, 2.0);
    for (std::size_t b = 0; b < 5; ++b) {
        std::vector<double> load(snapshots);
        for (std::size_t t = 0; t < snapshots; ++t) {
            load[t] = (100.0 + 150.0 * static_cast<double>(b)) *
                      (1.0 + 0.2 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(snapshots)));
        }
        sys.buses.push_back({"W" + std::to_string(b), 52.0, 7.0 + 1.5 * static_cast<double>(b), load});
        if (b > 0) {
            AcLine l;
            l.id = "L" + std::to_string(b);
            l.from = "W" + std::to_string(b - 1);
            l.to = "W" + std::to_string(b);
            l.length_km = 100.0;
            l.existing_mw = 250.0;
            l.max_mw = 250.0;
            sys.lines.push_back(l);
        }
        Generator w = generator_defaults("onwind");
        w.id = "wind" + std::to_string(b);
        w.bus = sys.buses.back().id;
        w.p_nom_max = 900.0 - 200.0 * static_cast<double>(b);
        for (std::size_t t = 0; t < snapshots; ++t) {
            w.availability.push_back(0.5 + 0.3 * std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(snapshots)));
        }
        sys.generators.push_back(w);
        Generator g = generator_defaults("CCGT");
        g.id = "gas" + std::to_string(b);
        g.bus = sys.buses.back().id;
        sys.generators.push_back(g);
        f.sites.push_back(h2g::catalog::make_site("H" + std::to_string(b), sys.buses.back().lat, sys.buses.back().lon, 10000.0));
    }
    f.profile = h2g::catalog::synth_profile({}, snapshots, 2.0);
    return f;
}

}  // namespace fixture
