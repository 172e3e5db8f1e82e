#include "h2grid/coupling.hpp"

#include "h2grid/economics.hpp"
#include "h2grid/error.hpp"

#include <cmath>
#include <map>

namespace h2g::coupling {

using lp::Sense;
using lp::VarId;

double CouplingCosts::electrolyzer_annuity_per_mw() const
{
    return annuity(electrolyzer_capex_per_mw, discount_rate, electrolyzer_lifetime, electrolyzer_fom_pct);
}

double CouplingCosts::storage_annuity_per_mwh() const
{
    return annuity(storage_capex_per_mwh, discount_rate, storage_lifetime, storage_fom_pct);
}

void CouplingCosts::validate() const
{
    auto bad = [](const std::string& what) { throw Error(ErrorCode::Param, what); };
    if (!(efficiency > 0.0 && efficiency <= 1.0)) bad("electrolyzer efficiency must lie in (0, 1]");
    if (!(electrolyzer_capex_per_mw >= 0.0) || !(storage_capex_per_mwh >= 0.0) || !(connection_per_mw_km >= 0.0)) {
        bad("station costs must be non-negative");
    }
    if (!(storage_cap_mwh >= 0.0)) bad("station storage cap must be non-negative");
    if (!(electrolyzer_lifetime >= 1.0) || !(storage_lifetime >= 1.0) || !(connection_lifetime >= 1.0)) {
        bad("lifetimes must be at least one year");
    }
    if (!(discount_rate >= 0.0)) bad("discount rate must be non-negative");
}

std::vector<GridAttachment> attach_stations(const std::vector<catalog::HrsSite>& stations,
                                            const power::PowerSystem& sys, const CouplingCosts& costs)
{
    if (sys.buses.empty()) throw Error(ErrorCode::EmptySystem, "power system has no buses to attach stations to");
    costs.validate();
    const double per_km_annuity =
        annuity(costs.connection_per_mw_km, costs.discount_rate, costs.connection_lifetime, costs.connection_fom_pct);
    std::vector<GridAttachment> out;
    out.reserve(stations.size());
    for (const catalog::HrsSite& s : stations) {
        const power::Bus* best = nullptr;
        double best_d = 0.0;
        for (const power::Bus& b : sys.buses) {
            const double d = highway::haversine_distance(s.lat, s.lon, b.lat, b.lon);
            if (!best || d < best_d || (d == best_d && b.id < best->id)) {
                best = &b;
                best_d = d;
            }
        }
        out.push_back({s.id, best->id, best_d, best_d * costs.connection_per_mw_km, best_d * per_km_annuity});
    }
    return out;
}

std::vector<double> hydrogen_demand_mwh(const catalog::HrsSite& site, const catalog::HrsDemandProfile& profile,
                                        const power::PowerSystem& sys)
{
    if (profile.size() != sys.snapshots()) {
        throw Error(ErrorCode::InconsistentInput, "demand profile for station '" + site.id + "' has " +
                                                      std::to_string(profile.size()) + " snapshots, system has " +
                                                      std::to_string(sys.snapshots()));
    }
    const double scale = sys.year_scale();
    std::vector<double> kg = catalog::demand_series(site, profile);
    for (double& d : kg) d = d * kHydrogenKwhPerKg / 1000.0 / scale;
    return kg;
}

HrsNodeDesign local_sizing(const std::string& station_id, const std::vector<double>& demand_mwh,
                           const std::vector<double>& snapshot_hours, const GridAttachment& attachment,
                           const CouplingCosts& costs, const lp::SolverOptions& options)
{
    costs.validate();
    const std::size_t T = demand_mwh.size();
    if (snapshot_hours.size() != T) {
        throw Error(ErrorCode::InconsistentInput, "station '" + station_id + "' demand and snapshot lengths differ");
    }
    for (std::size_t t = 0; t < T; ++t) {
        if (!(demand_mwh[t] >= 0.0)) throw Error(ErrorCode::InconsistentInput, "negative hydrogen demand at '" + station_id + "'");
        if (!(snapshot_hours[t] > 0.0)) throw Error(ErrorCode::InconsistentInput, "snapshot durations must be positive");
    }

    lp::LinearProgram m;
    const double power_cost = costs.electrolyzer_annuity_per_mw() + attachment.connection_annuity_per_mw;
    const double energy_cost = costs.storage_annuity_per_mwh();
    const VarId P = m.add_variable("P", 0.0, lp::kInf, power_cost);
    const VarId E = m.add_variable("E", 0.0, costs.storage_cap_mwh, energy_cost);
    std::vector<VarId> p, soc;
    for (std::size_t t = 0; t < T; ++t) {
        p.push_back(m.add_variable("p[" + std::to_string(t) + "]", 0.0, lp::kInf));
        soc.push_back(m.add_variable("soc[" + std::to_string(t) + "]", 0.0, lp::kInf));
        m.add_constraint("p_max[" + std::to_string(t) + "]", {{p[t], 1.0}, {P, -1.0}}, Sense::LessEqual, 0.0);
        m.add_constraint("soc_max[" + std::to_string(t) + "]", {{soc[t], 1.0}, {E, -1.0}}, Sense::LessEqual, 0.0);
    }
    for (std::size_t t = 0; t < T; ++t) {
        const std::size_t prev = (t + T - 1) % T;
        std::vector<lp::Term> terms{{soc[t], 1.0}, {p[t], -costs.efficiency * snapshot_hours[t]}};
        if (prev != t) terms.push_back({soc[prev], -1.0});
        m.add_constraint("h2[" + std::to_string(t) + "]", std::move(terms), Sense::Equal, -demand_mwh[t]);
    }
    const lp::Solution sol = lp::solve_lp(m, options);
    if (sol.status == lp::Status::Infeasible) {
        throw Error(ErrorCode::Infeasible, "local sizing of station '" + station_id + "' is infeasible");
    }
    if (!sol.optimal()) {
        throw Error(ErrorCode::Internal, "local sizing of station '" + station_id + "' ended with status " +
                                             std::string(lp::to_string(sol.status)));
    }
    HrsNodeDesign d;
    d.station_id = station_id;
    d.bus_id = attachment.bus_id;
    d.distance_km = attachment.distance_km;
    d.power_mw = sol.value(P);
    d.energy_mwh = sol.value(E);
    d.capex_annual = d.power_mw * power_cost + d.energy_mwh * energy_cost;
    return d;
}

ScenarioMode scenario_mode(int mode)
{
    if (mode == 1) return ScenarioMode::OperationalOnly;
    if (mode == 2) return ScenarioMode::InvestmentAndOperational;
    throw Error(ErrorCode::Param, "scenario mode must be 1 or 2, got " + std::to_string(mode));
}

power::PowerSystem embed_hrs(const power::PowerSystem& sys, const std::vector<StationInput>& stations,
                             const std::vector<HrsNodeDesign>* designs, const ScenarioSpec& spec)
{
    spec.costs.validate();
    std::map<std::string, const HrsNodeDesign*> by_id;
    if (spec.mode == ScenarioMode::OperationalOnly) {
        if (!designs) throw Error(ErrorCode::MissingDesigns, "scenario 1 needs locally sized station designs");
        for (const HrsNodeDesign& d : *designs) by_id[d.station_id] = &d;
    }
    power::PowerSystem out = sys;
    for (const StationInput& s : stations) {
        if (s.demand_mwh.size() != sys.snapshots()) {
            throw Error(ErrorCode::InconsistentInput, "station '" + s.site.id + "' demand length does not match snapshots");
        }
        power::HrsUnit u;
        u.id = s.site.id;
        u.bus = s.attachment.bus_id;
        u.efficiency = spec.costs.efficiency;
        u.power_capex_per_mw = spec.costs.electrolyzer_capex_per_mw;
        u.power_fom_pct = spec.costs.electrolyzer_fom_pct;
        u.power_lifetime = spec.costs.electrolyzer_lifetime;
        u.connection_annuity_per_mw = s.attachment.connection_annuity_per_mw;
        u.energy_capex_per_mwh = spec.costs.storage_capex_per_mwh;
        u.energy_fom_pct = spec.costs.storage_fom_pct;
        u.energy_lifetime = spec.costs.storage_lifetime;
        u.e_nom_max = spec.costs.storage_cap_mwh;
        u.demand_mwh = s.demand_mwh;
        if (spec.mode == ScenarioMode::OperationalOnly) {
            auto it = by_id.find(s.site.id);
            if (it == by_id.end()) {
                throw Error(ErrorCode::MissingDesigns, "no local design for station '" + s.site.id + "'");
            }
            u.fixed_power_mw = it->second->power_mw;
            u.fixed_energy_mwh = std::min(it->second->energy_mwh, u.e_nom_max);
        }
        out.hrs.push_back(std::move(u));
    }
    return out;
}

ScenarioResult run_scenario(const power::PowerSystem& sys, const std::vector<catalog::HrsSite>& sites,
                            const catalog::HrsDemandProfile& profile, const ScenarioSpec& spec,
                            const lp::SolverOptions& options)
{
    ScenarioSpec used = spec;
    used.costs.discount_rate = sys.discount_rate;

    ScenarioResult res;
    res.mode = used.mode;
    const std::vector<GridAttachment> att = sites.empty() ? std::vector<GridAttachment>{}
                                                          : attach_stations(sites, sys, used.costs);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        res.stations.push_back({sites[i], att[i], hydrogen_demand_mwh(sites[i], profile, sys)});
    }
    if (used.mode == ScenarioMode::OperationalOnly) {
        for (const StationInput& s : res.stations) {
            res.local_designs.push_back(local_sizing(s.site.id, s.demand_mwh, sys.snapshot_hours, s.attachment, used.costs, options));
        }
    }
    const power::PowerSystem embedded = embed_hrs(sys, res.stations, &res.local_designs, used);
    res.solved = power::solve_case(embedded, used.mode == ScenarioMode::OperationalOnly ? "scenario 1" : "scenario 2", options);

    if (res.solved.optimal()) {
        const double ep = used.costs.electrolyzer_annuity_per_mw();
        const double es = used.costs.storage_annuity_per_mwh();
        for (std::size_t i = 0; i < res.stations.size(); ++i) {
            const StationInput& s = res.stations[i];
            HrsNodeDesign d;
            d.station_id = s.site.id;
            d.bus_id = s.attachment.bus_id;
            d.distance_km = s.attachment.distance_km;
            d.power_mw = res.solved.value(res.solved.model.index.hrs_power[i]);
            d.energy_mwh = res.solved.value(res.solved.model.index.hrs_energy[i]);
            d.capex_annual = d.power_mw * (ep + s.attachment.connection_annuity_per_mw) + d.energy_mwh * es;
            res.designs.push_back(d);
        }
    }
    return res;
}

std::vector<catalog::HrsSite> sites_from_siting(const highway::HighwayNetwork& net, const frlm::SitingSolution& solution)
{
    std::vector<catalog::HrsSite> out;
    for (const std::string& id : solution.stations) {
        const highway::GeoNode& n = net.node(id);
        auto it = solution.node_load.find(id);
        const double load = it == solution.node_load.end() ? 0.0 : it->second;
        out.push_back(catalog::make_site(id, n.lat, n.lon, std::max(0.0, load)));
    }
    return out;
}

}  // namespace h2g::coupling
