#include "frlm_oracle.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

namespace oracle {

using h2g::lp::LinearProgram;
using h2g::lp::Sense;
using h2g::lp::Term;

SitingInstance random_siting_instance(std::uint64_t seed, int max_nodes, int max_trips)
{
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    SitingInstance inst;
    const int n = pick(3, max_nodes);
    for (int i = 0; i < n; ++i) {
        inst.nodes.push_back({"N" + std::to_string(i), 48.0 + uniform(0.0, 5.0), 7.0 + uniform(0.0, 7.0),
                              uniform(0.0, 1.0) < 0.85});
    }
    // Spanning tree plus a few chords.
    for (int i = 1; i < n; ++i) {
        const int j = pick(0, i - 1);
        inst.edges.push_back({inst.nodes[j].id, inst.nodes[i].id, std::round(uniform(40.0, 260.0))});
    }
    const int chords = pick(0, n / 2);
    for (int c = 0; c < chords; ++c) {
        const int a = pick(0, n - 1);
        const int b = pick(0, n - 1);
        if (a == b) continue;
        bool dup = false;
        for (const auto& e : inst.edges) {
            if ((e.from == inst.nodes[a].id && e.to == inst.nodes[b].id) ||
                (e.to == inst.nodes[a].id && e.from == inst.nodes[b].id)) {
                dup = true;
            }
        }
        if (!dup) inst.edges.push_back({inst.nodes[a].id, inst.nodes[b].id, std::round(uniform(40.0, 260.0))});
    }

    const int t = pick(1, max_trips);
    for (int q = 0; q < t; ++q) {
        const int o = pick(0, n - 1);
        int d = pick(0, n - 1);
        if (d == o) d = (o + 1) % n;
        inst.trips.push_back({"q" + std::to_string(q), inst.nodes[o].id, inst.nodes[d].id,
                              std::round(uniform(5.0, 150.0))});
    }

    inst.config.range_km = std::round(uniform(200.0, 600.0));
    inst.config.initial_fuel_km = uniform(0.0, 1.0) < 0.5 ? -1.0 : std::round(uniform(0.3, 1.0) * inst.config.range_km);
    inst.config.fuel_per_km = 0.066;
    inst.config.node_capacity = std::round(uniform(300.0, 6000.0));
    return inst;
}

SubsetResult brute_force_siting(const std::vector<h2g::highway::GeoNode>& nodes,
                                const std::vector<h2g::highway::RoutedTrip>& trips,
                                const h2g::frlm::FrlmConfig& cfg)
{
    std::vector<std::string> cand;
    for (const auto& n : nodes) {
        if (n.is_candidate) cand.push_back(n.id);
    }
    std::sort(cand.begin(), cand.end());
    const double init = cfg.initial_fuel_km < 0.0 ? cfg.range_km : cfg.initial_fuel_km;

    struct ArcSet {
        std::vector<std::string> members;
    };
    struct Trip {
        std::string id;
        double kg_per_event;
        int events;
        std::vector<std::string> on_path;
        std::vector<ArcSet> uncovered;
    };
    std::vector<Trip> data;
    for (const auto& rt : trips) {
        const auto& seq = rt.path.node_sequence;
        std::vector<double> cum(seq.size(), 0.0);
        for (std::size_t a = 0; a < rt.path.arcs.size(); ++a) cum[a + 1] = cum[a] + rt.path.arcs[a].length_km;
        const double d = cum.back();
        Trip t;
        t.id = rt.trip.id;
        t.events = std::max(1, static_cast<int>(std::ceil(d / cfg.range_km - 1e-9)));
        t.kg_per_event = rt.trip.flow_per_day * cfg.fuel_per_km * d / t.events;
        for (const auto& s : seq) {
            if (std::binary_search(cand.begin(), cand.end(), s)) t.on_path.push_back(s);
        }
        for (std::size_t k = 1; k < seq.size(); ++k) {
            if (cum[k] <= init + 1e-9 * std::max(1.0, cfg.range_km)) continue;
            ArcSet as;
            for (std::size_t i = 0; i < k; ++i) {
                if (std::binary_search(cand.begin(), cand.end(), seq[i]) &&
                    cum[k] - cum[i] <= cfg.range_km + 1e-9 * std::max(1.0, cfg.range_km)) {
                    as.members.push_back(seq[i]);
                }
            }
            t.uncovered.push_back(as);
        }
        data.push_back(std::move(t));
    }

    auto feasible = [&](const std::set<std::string>& open) {
        for (const Trip& t : data) {
            for (const ArcSet& as : t.uncovered) {
                bool any = false;
                for (const auto& m : as.members) any = any || open.count(m) != 0;
                if (!any) return false;
            }
        }
        LinearProgram lp;
        std::map<std::string, std::vector<Term>> cap;
        for (const Trip& t : data) {
            std::map<std::string, h2g::lp::VarId> xv;
            std::vector<Term> total;
            for (const auto& node : t.on_path) {
                if (open.count(node) == 0) continue;
                auto v = lp.add_variable(node + "/" + t.id, 0.0, 1.0);
                xv.emplace(node, v);
                total.push_back({v, 1.0});
                cap[node].push_back({v, t.kg_per_event});
            }
            lp.add_constraint("total/" + t.id, total, Sense::Equal, t.events);
            int k = 0;
            for (const ArcSet& as : t.uncovered) {
                std::vector<Term> terms;
                for (const auto& m : as.members) {
                    if (xv.count(m) != 0) terms.push_back({xv.at(m), 1.0});
                }
                lp.add_constraint("arc/" + t.id + "/" + std::to_string(k++), terms, Sense::Equal, 1.0);
            }
        }
        for (auto& [node, terms] : cap) lp.add_constraint("cap/" + node, terms, Sense::LessEqual, cfg.node_capacity);
        return tableau_simplex(lp).feasible;
    };

    SubsetResult res;
    const std::size_t n = cand.size();
    for (std::size_t size = 0; size <= n; ++size) {
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) != size) continue;
            std::set<std::string> open;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (1u << i)) open.insert(cand[i]);
            }
            if (feasible(open)) {
                res.feasible = true;
                res.stations = static_cast<int>(size);
                res.best_subset.assign(open.begin(), open.end());
                return res;
            }
        }
    }
    return res;
}

}  // namespace oracle
