#pragma once

#include "h2grid/highway.hpp"
#include "h2grid/power.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace h2g::synth {

struct SynthParams {
    std::uint64_t seed = 42;
    std::size_t nodes = 8;
    std::size_t trips = 6;
    std::size_t buses = 4;
    std::size_t snapshots = 24;
    double snapshot_hours = 2.0;
    double flow_scale = 1.0;  // multiplies every trip flow
};

struct HighwayInstance {
    std::vector<highway::GeoNode> nodes;
    std::vector<highway::Edge> edges;
    std::vector<highway::OdTrip> trips;
};

/// Jittered grid of motorway junctions around central Germany (about 150 km
/// spacing), grid-neighbor edges with a detour factor, and OD trips between
/// distinct nodes at least 50 km apart by road. Throws Param for fewer than
/// two nodes.
HighwayInstance synth_highway(const SynthParams& params);

/// Buses on the same footprint with a meshed AC grid, wind stronger in the
/// north, solar on a daily sine, gas backup everywhere, a battery and pumped
/// hydro. Throws Param for zero buses or snapshots.
power::PowerSystem synth_power(const SynthParams& params);

/// mt19937_64 with a fixed mapping to [0, 1). The standard distributions are
/// implementation-defined, which would break cross-platform determinism.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n))); }

private:
    std::mt19937_64 engine_;
};

}  // namespace h2g::synth
