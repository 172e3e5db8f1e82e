#pragma once

#include "h2grid/catalog.hpp"
#include "h2grid/power.hpp"

#include <cstdint>

namespace fixture {

/// One bus, one CCGT, flat load, no carbon cap. Snapshots span a full year.
h2g::power::PowerSystem single_bus_gas(std::size_t snapshots, double load_mw);

/// North bus with cheap wind, south bus with load and gas, joined by one AC
/// line. With `congested` the line cannot be expanded and binds.
h2g::power::PowerSystem north_south(bool congested, std::size_t snapshots = 12);

/// Small meshed system with wind, solar, gas, battery, an AC loop and a DC
/// link; all series drawn from `seed`.
h2g::power::PowerSystem random_system(std::uint64_t seed, std::size_t buses, std::size_t snapshots);

struct CoupledFixture {
    h2g::power::PowerSystem sys;
    std::vector<h2g::catalog::HrsSite> sites;
    h2g::catalog::HrsDemandProfile profile;
};

/// random_system plus 2 to 4 stations near random buses with 5 to 30 t/day.
CoupledFixture coupled(std::uint64_t seed, std::size_t snapshots = 24);

/// north_south(true) with one station at each bus, equal demand.
CoupledFixture north_south_stations(std::size_t snapshots = 12);

/// Five buses west to east: wind falls and load rises along a congested
/// chain; one equal-demand station per bus.
CoupledFixture five_bus_gradient(std::size_t snapshots = 12);

}  // namespace fixture
