#include "h2grid/power.hpp"

#include "h2grid/economics.hpp"
#include "h2grid/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace h2g::power {

using lp::Sense;
using lp::Term;
using lp::VarId;

double PowerSystem::year_scale() const
{
    const double total = std::accumulate(snapshot_hours.begin(), snapshot_hours.end(), 0.0);
    return total > 0.0 ? year_hours / total : 1.0;
}

std::optional<std::size_t> PowerSystem::bus_index(const std::string& id) const
{
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (buses[i].id == id) return i;
    }
    return std::nullopt;
}

Generator generator_defaults(const std::string& carrier)
{
    Generator g;
    g.carrier = carrier;
    auto set = [&](double capex_kw, double fom, double vom, double eff, double fuel, double co2, double life) {
        g.capex_per_mw = capex_kw * 1000.0;
        g.fom_pct = fom;
        g.vom = vom;
        g.efficiency = eff;
        g.fuel_cost = fuel;
        g.co2_per_mwh_th = co2;
        g.lifetime = life;
    };
    if (carrier == "CCGT") set(800, 2.5, 4, 0.50, 21.6, kGasCo2PerMwhTh, 30);
    else if (carrier == "OCGT") set(400, 3.75, 3, 0.39, 21.6, kGasCo2PerMwhTh, 30);
    else if (carrier == "ror") set(3000, 2, 0, 1.0, 0, 0, 80);
    else if (carrier == "solar") set(600, 4.17, 0.01, 1.0, 0, 0, 25);
    else if (carrier == "biomass") set(2209, 4.53, 0, 0.468, 7, 0, 30);
    else if (carrier == "onwind") set(1110, 2.45, 2.3, 1.0, 0, 0, 30);
    else if (carrier == "offwind-ac" || carrier == "offwind-dc") set(1640, 2.30, 2.7, 1.0, 0, 0, 30);
    else throw Error(ErrorCode::Validation, "unknown generator carrier '" + carrier + "'");
    return g;
}

StorageUnit storage_defaults(const std::string& kind)
{
    StorageUnit s;
    s.kind = kind;
    if (kind == "battery") {
        s.power_capex_per_mw = 323000.0;
        s.power_fom_pct = 3.0;
        s.power_lifetime = 20.0;
        s.energy_capex_per_mwh = 154000.0;
        s.energy_lifetime = 15.0;
        s.eta_charge = 0.81;
        s.eta_discharge = 0.81;
    } else if (kind == "H2") {
        s.power_capex_per_mw = 510000.0 + 339000.0;
        // Weighted so the annuity matches electrolysis (4 %) plus fuel cell (3 %).
        s.power_fom_pct = (510000.0 * 4.0 + 339000.0 * 3.0) / (510000.0 + 339000.0);
        s.power_lifetime = 20.0;
        s.energy_capex_per_mwh = 19000.0;
        s.energy_lifetime = 20.0;
        s.eta_charge = 0.68;
        s.eta_discharge = 0.58;
    } else if (kind == "PHS") {
        s.power_capex_per_mw = 2000000.0;
        s.power_fom_pct = 1.0;
        s.power_lifetime = 80.0;
        s.eta_charge = std::sqrt(0.75);
        s.eta_discharge = std::sqrt(0.75);
        s.max_hours = 6.0;
    } else {
        throw Error(ErrorCode::Validation, "unknown storage kind '" + kind + "'");
    }
    return s;
}

std::vector<std::string> validate_system(const PowerSystem& sys)
{
    std::vector<std::string> issues;
    auto add = [&](const std::string& s) { issues.push_back(s); };
    const std::size_t T = sys.snapshots();

    if (sys.buses.empty()) add("system has no buses");
    if (T == 0) add("system has no snapshots");
    for (std::size_t t = 0; t < T; ++t) {
        if (!(sys.snapshot_hours[t] > 0.0) || !std::isfinite(sys.snapshot_hours[t])) {
            add("snapshot " + std::to_string(t) + " has a non-positive weight");
            break;
        }
    }
    if (!(sys.year_hours > 0.0)) add("year_hours must be positive");
    if (!(sys.co2_cap >= 0.0)) add("co2_cap must be non-negative");
    if (!(sys.discount_rate >= 0.0)) add("discount_rate must be non-negative");

    std::set<std::string> bus_ids;
    for (const Bus& b : sys.buses) {
        if (!bus_ids.insert(b.id).second) add("duplicate bus id '" + b.id + "'");
        if (!b.load.empty() && b.load.size() != T) add("load series of bus '" + b.id + "' has wrong length");
        for (double l : b.load) {
            if (!(l >= 0.0) || !std::isfinite(l)) {
                add("bus '" + b.id + "' has a negative or non-finite load");
                break;
            }
        }
    }
    auto known = [&](const std::string& bus) { return bus_ids.count(bus) != 0; };

    std::set<std::string> ids;
    for (const AcLine& l : sys.lines) {
        if (!ids.insert("line:" + l.id).second) add("duplicate line id '" + l.id + "'");
        if (!known(l.from) || !known(l.to)) add("line '" + l.id + "' references an unknown bus");
        if (l.from == l.to) add("line '" + l.id + "' connects a bus to itself");
        if (!(l.length_km >= 0.0)) add("line '" + l.id + "' has negative length");
        if (!(l.reactance > 0.0)) add("line '" + l.id + "' needs a positive reactance");
        if (!(l.existing_mw >= 0.0)) add("line '" + l.id + "' has negative capacity");
        if (!(l.max_capacity() >= l.existing_mw)) add("line '" + l.id + "' max capacity below existing");
        if (!(l.usable_fraction > 0.0 && l.usable_fraction <= 1.0)) add("line '" + l.id + "' usable fraction outside (0,1]");
    }
    for (const DcLink& k : sys.links) {
        if (!ids.insert("link:" + k.id).second) add("duplicate link id '" + k.id + "'");
        if (!known(k.from) || !known(k.to)) add("link '" + k.id + "' references an unknown bus");
        if (k.from == k.to) add("link '" + k.id + "' connects a bus to itself");
        if (!(k.length_km >= 0.0)) add("link '" + k.id + "' has negative length");
        if (!(k.existing_mw >= 0.0) || !(k.max_mw >= k.existing_mw)) add("link '" + k.id + "' has inconsistent capacities");
    }
    for (const Generator& g : sys.generators) {
        if (!ids.insert("gen:" + g.id).second) add("duplicate generator id '" + g.id + "'");
        if (!known(g.bus)) add("generator '" + g.id + "' references unknown bus '" + g.bus + "'");
        if (!g.availability.empty() && g.availability.size() != T) {
            add("availability series of generator '" + g.id + "' has wrong length");
        }
        for (double a : g.availability) {
            if (!(a >= 0.0 && a <= 1.0)) {
                add("availability of generator '" + g.id + "' outside [0,1]");
                break;
            }
        }
        if (!(g.efficiency > 0.0)) add("generator '" + g.id + "' needs a positive efficiency");
        if (!(g.p_nom_min >= 0.0) || !(g.p_nom_max >= g.p_nom_min)) add("generator '" + g.id + "' has inconsistent capacity limits");
        if (!(g.capex_per_mw >= 0.0) || !(g.lifetime >= 1.0)) add("generator '" + g.id + "' has invalid cost data");
    }
    for (const StorageUnit& s : sys.storages) {
        if (!ids.insert("sto:" + s.id).second) add("duplicate storage id '" + s.id + "'");
        if (!known(s.bus)) add("storage '" + s.id + "' references unknown bus '" + s.bus + "'");
        if (!(s.eta_charge > 0.0 && s.eta_charge <= 1.0) || !(s.eta_discharge > 0.0 && s.eta_discharge <= 1.0)) {
            add("storage '" + s.id + "' efficiencies outside (0,1]");
        }
        if (!(s.max_hours >= 0.0) || !(s.p_nom_max >= 0.0) || !(s.e_nom_max >= 0.0)) add("storage '" + s.id + "' has negative limits");
    }
    for (const HrsUnit& h : sys.hrs) {
        if (!ids.insert("hrs:" + h.id).second) add("duplicate station id '" + h.id + "'");
        if (!known(h.bus)) add("station '" + h.id + "' references unknown bus '" + h.bus + "'");
        if (!(h.efficiency > 0.0 && h.efficiency <= 1.0)) add("station '" + h.id + "' efficiency outside (0,1]");
        if (h.demand_mwh.size() != T) add("demand series of station '" + h.id + "' has wrong length");
        for (double d : h.demand_mwh) {
            if (!(d >= 0.0) || !std::isfinite(d)) {
                add("station '" + h.id + "' has a negative demand");
                break;
            }
        }
        if (h.fixed_power_mw && !(*h.fixed_power_mw >= 0.0)) add("station '" + h.id + "' fixed power is negative");
        if (h.fixed_energy_mwh && !(*h.fixed_energy_mwh >= 0.0 && *h.fixed_energy_mwh <= h.e_nom_max + 1e-9)) {
            add("station '" + h.id + "' fixed storage outside [0, cap]");
        }
    }
    return issues;
}

namespace {

std::string tname(const std::string& kind, const std::string& id, std::size_t t)
{
    return kind + "[" + id + "][" + std::to_string(t) + "]";
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i)
{
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace

ExpansionModel build_expansion_lp(const PowerSystem& sys)
{
    if (auto issues = validate_system(sys); !issues.empty()) {
        throw Error(ErrorCode::Validation, "invalid power system: " + issues.front(), issues);
    }
    ExpansionModel model;
    lp::LinearProgram& lp = model.lp;
    ExpansionIndex& ix = model.index;
    const std::size_t T = sys.snapshots();
    const std::size_t B = sys.buses.size();
    const double r = sys.discount_rate;

    auto bus_of = [&](const std::string& id) { return *sys.bus_index(id); };
    std::vector<std::vector<std::vector<Term>>> balance(B, std::vector<std::vector<Term>>(T));

    for (const Generator& g : sys.generators) {
        const VarId cap = lp.add_variable("gen_cap[" + g.id + "]", g.p_nom_min, g.p_nom_max,
                                          annuity(g.capex_per_mw, r, g.lifetime, g.fom_pct));
        ix.gen_cap.push_back(cap);
        auto& row = ix.gen_p.emplace_back();
        const std::size_t b = bus_of(g.bus);
        for (std::size_t t = 0; t < T; ++t) {
            const VarId p = lp.add_variable(tname("gen_p", g.id, t), 0.0, lp::kInf, g.marginal_cost() * sys.weight(t));
            row.push_back(p);
            const double avail = g.availability.empty() ? 1.0 : g.availability[t];
            lp.add_constraint(tname("gen_avail", g.id, t), {{p, 1.0}, {cap, -avail}}, Sense::LessEqual, 0.0, "gen_avail");
            balance[b][t].push_back({p, 1.0});
        }
    }

    for (const StorageUnit& s : sys.storages) {
        double power_cost = annuity(s.power_capex_per_mw, r, s.power_lifetime, s.power_fom_pct);
        const double energy_cost = annuity(s.energy_capex_per_mwh, r, s.energy_lifetime, s.energy_fom_pct);
        if (s.max_hours > 0.0) power_cost += s.max_hours * energy_cost;
        double p_max = s.p_nom_max;
        if (s.max_hours > 0.0 && std::isfinite(s.e_nom_max)) p_max = std::min(p_max, s.e_nom_max / s.max_hours);
        const VarId P = lp.add_variable("sto_p_nom[" + s.id + "]", 0.0, p_max, power_cost);
        ix.sto_power.push_back(P);
        std::optional<VarId> E;
        if (s.max_hours <= 0.0) E = lp.add_variable("sto_e_nom[" + s.id + "]", 0.0, s.e_nom_max, energy_cost);
        ix.sto_energy.push_back(E);

        auto& ch = ix.sto_charge.emplace_back();
        auto& dis = ix.sto_discharge.emplace_back();
        auto& soc = ix.sto_soc.emplace_back();
        const std::size_t b = bus_of(s.bus);
        for (std::size_t t = 0; t < T; ++t) {
            ch.push_back(lp.add_variable(tname("sto_charge", s.id, t), 0.0, lp::kInf));
            dis.push_back(lp.add_variable(tname("sto_discharge", s.id, t), 0.0, lp::kInf));
            soc.push_back(lp.add_variable(tname("sto_soc", s.id, t), 0.0, lp::kInf));
            lp.add_constraint(tname("sto_charge_max", s.id, t), {{ch[t], 1.0}, {P, -1.0}}, Sense::LessEqual, 0.0, "sto_limit");
            lp.add_constraint(tname("sto_discharge_max", s.id, t), {{dis[t], 1.0}, {P, -1.0}}, Sense::LessEqual, 0.0, "sto_limit");
            if (E) {
                lp.add_constraint(tname("sto_soc_max", s.id, t), {{soc[t], 1.0}, {*E, -1.0}}, Sense::LessEqual, 0.0, "sto_limit");
            } else {
                lp.add_constraint(tname("sto_soc_max", s.id, t), {{soc[t], 1.0}, {P, -s.max_hours}}, Sense::LessEqual, 0.0, "sto_limit");
            }
            balance[b][t].push_back({dis[t], 1.0});
            balance[b][t].push_back({ch[t], -1.0});
        }
        for (std::size_t t = 0; t < T; ++t) {
            const std::size_t prev = (t + T - 1) % T;
            const double dt = sys.snapshot_hours[t];
            std::vector<Term> terms{{soc[t], 1.0}, {ch[t], -s.eta_charge * dt}, {dis[t], dt / s.eta_discharge}};
            if (prev != t) terms.push_back({soc[prev], -1.0});
            lp.add_constraint(tname("sto_soc", s.id, t), std::move(terms), Sense::Equal, 0.0, "soc");
        }
    }

    // Angle references: one per connected AC component.
    std::vector<std::size_t> parent(B);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<bool> on_ac(B, false);
    for (const AcLine& l : sys.lines) {
        const std::size_t a = bus_of(l.from);
        const std::size_t b = bus_of(l.to);
        on_ac[a] = on_ac[b] = true;
        parent[find_root(parent, a)] = find_root(parent, b);
    }
    std::vector<bool> has_reference(B, false);
    ix.theta.assign(B, std::vector<std::optional<VarId>>(T));
    for (std::size_t b = 0; b < B; ++b) {
        if (!on_ac[b]) continue;
        const std::size_t root = find_root(parent, b);
        const bool reference = !has_reference[root];
        has_reference[root] = true;
        for (std::size_t t = 0; t < T; ++t) {
            ix.theta[b][t] = reference ? lp.add_variable(tname("theta", sys.buses[b].id, t), 0.0, 0.0)
                                       : lp.add_variable(tname("theta", sys.buses[b].id, t), -lp::kInf, lp::kInf);
        }
    }

    for (const AcLine& l : sys.lines) {
        const double cost = annuity(l.capex_per_mw_km * l.length_km, r, l.lifetime, l.fom_pct);
        const VarId ext = lp.add_variable("line_ext[" + l.id + "]", 0.0, l.max_capacity() - l.existing_mw, cost);
        ix.line_ext.push_back(ext);
        auto& flow = ix.line_flow.emplace_back();
        const std::size_t a = bus_of(l.from);
        const std::size_t b = bus_of(l.to);
        const double u = l.usable_fraction;
        for (std::size_t t = 0; t < T; ++t) {
            const VarId f = lp.add_variable(tname("line_flow", l.id, t), -lp::kInf, lp::kInf);
            flow.push_back(f);
            lp.add_constraint(tname("line_max", l.id, t), {{f, 1.0}, {ext, -u}}, Sense::LessEqual, u * l.existing_mw, "line_limit");
            lp.add_constraint(tname("line_min", l.id, t), {{f, -1.0}, {ext, -u}}, Sense::LessEqual, u * l.existing_mw, "line_limit");
            lp.add_constraint(tname("kvl", l.id, t),
                              {{f, l.reactance}, {*ix.theta[a][t], -1.0}, {*ix.theta[b][t], 1.0}}, Sense::Equal, 0.0, "kvl");
            balance[a][t].push_back({f, -1.0});
            balance[b][t].push_back({f, 1.0});
        }
    }

    for (const DcLink& k : sys.links) {
        const double cost = annuity(k.inverter_capex_per_mw + k.capex_per_mw_km * k.length_km, r, k.lifetime, k.fom_pct);
        const VarId ext = lp.add_variable("link_ext[" + k.id + "]", 0.0, k.max_mw - k.existing_mw, cost);
        ix.link_ext.push_back(ext);
        auto& flow = ix.link_flow.emplace_back();
        const std::size_t a = bus_of(k.from);
        const std::size_t b = bus_of(k.to);
        for (std::size_t t = 0; t < T; ++t) {
            const VarId f = lp.add_variable(tname("link_flow", k.id, t), -lp::kInf, lp::kInf);
            flow.push_back(f);
            lp.add_constraint(tname("link_max", k.id, t), {{f, 1.0}, {ext, -1.0}}, Sense::LessEqual, k.existing_mw, "link_limit");
            lp.add_constraint(tname("link_min", k.id, t), {{f, -1.0}, {ext, -1.0}}, Sense::LessEqual, k.existing_mw, "link_limit");
            balance[a][t].push_back({f, -1.0});
            balance[b][t].push_back({f, 1.0});
        }
    }

    for (const HrsUnit& h : sys.hrs) {
        const double power_cost = annuity(h.power_capex_per_mw, r, h.power_lifetime, h.power_fom_pct) + h.connection_annuity_per_mw;
        const double energy_cost = annuity(h.energy_capex_per_mwh, r, h.energy_lifetime, h.energy_fom_pct);
        const double p_lo = h.fixed_power_mw.value_or(0.0);
        const double p_hi = h.fixed_power_mw.value_or(lp::kInf);
        const double e_lo = h.fixed_energy_mwh.value_or(0.0);
        const double e_hi = h.fixed_energy_mwh.value_or(h.e_nom_max);
        const VarId P = lp.add_variable("hrs_p_nom[" + h.id + "]", p_lo, p_hi, power_cost);
        const VarId E = lp.add_variable("hrs_e_nom[" + h.id + "]", e_lo, e_hi, energy_cost);
        ix.hrs_power.push_back(P);
        ix.hrs_energy.push_back(E);
        auto& p = ix.hrs_p.emplace_back();
        auto& soc = ix.hrs_soc.emplace_back();
        auto& rows = ix.h2_balance.emplace_back();
        const std::size_t b = bus_of(h.bus);
        for (std::size_t t = 0; t < T; ++t) {
            p.push_back(lp.add_variable(tname("hrs_p", h.id, t), 0.0, lp::kInf));
            soc.push_back(lp.add_variable(tname("hrs_soc", h.id, t), 0.0, lp::kInf));
            lp.add_constraint(tname("hrs_p_max", h.id, t), {{p[t], 1.0}, {P, -1.0}}, Sense::LessEqual, 0.0, "hrs_limit");
            lp.add_constraint(tname("hrs_soc_max", h.id, t), {{soc[t], 1.0}, {E, -1.0}}, Sense::LessEqual, 0.0, "hrs_limit");
            balance[b][t].push_back({p[t], -1.0});
        }
        for (std::size_t t = 0; t < T; ++t) {
            const std::size_t prev = (t + T - 1) % T;
            std::vector<Term> terms{{soc[t], 1.0}, {p[t], -h.efficiency * sys.snapshot_hours[t]}};
            if (prev != t) terms.push_back({soc[prev], -1.0});
            rows.push_back(lp.add_constraint(tname("h2_balance", h.id, t), std::move(terms), Sense::Equal, -h.demand_mwh[t], "h2_balance"));
        }
    }

    ix.balance.assign(B, {});
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t t = 0; t < T; ++t) {
            const double load = sys.buses[b].load.empty() ? 0.0 : sys.buses[b].load[t];
            ix.balance[b].push_back(lp.add_constraint(tname("balance", sys.buses[b].id, t), std::move(balance[b][t]),
                                                      Sense::Equal, load, "balance"));
        }
    }

    if (std::isfinite(sys.co2_cap)) {
        std::vector<Term> terms;
        for (std::size_t g = 0; g < sys.generators.size(); ++g) {
            const double e = sys.generators[g].co2_per_mwh_el();
            if (e == 0.0) continue;
            for (std::size_t t = 0; t < T; ++t) terms.push_back({ix.gen_p[g][t], e * sys.weight(t)});
        }
        ix.co2 = lp.add_constraint("co2_cap", std::move(terms), Sense::LessEqual, sys.co2_cap, "co2");
    }
    return model;
}

SolvedCase solve_case(const PowerSystem& sys, std::string label, const lp::SolverOptions& options)
{
    SolvedCase c;
    c.label = std::move(label);
    c.system = sys;
    c.model = build_expansion_lp(sys);
    c.solution = lp::solve_lp(c.model.lp, options);
    return c;
}

void require_optimal(const SolvedCase& c, const std::string& stage)
{
    switch (c.solution.status) {
    case lp::Status::Optimal: return;
    case lp::Status::Infeasible:
        throw Error(ErrorCode::Infeasible, stage + ": power system problem is infeasible", c.solution.infeasible_rows);
    case lp::Status::Unbounded:
        throw Error(ErrorCode::Unbounded, stage + ": power system problem is unbounded");
    case lp::Status::IterationLimit:
        throw Error(ErrorCode::Internal, stage + ": simplex iteration limit reached");
    }
}

double case_emissions(const SolvedCase& c)
{
    const PowerSystem& sys = c.system;
    double e = 0.0;
    for (std::size_t g = 0; g < sys.generators.size(); ++g) {
        const double k = sys.generators[g].co2_per_mwh_el();
        if (k == 0.0) continue;
        for (std::size_t t = 0; t < sys.snapshots(); ++t) e += k * sys.weight(t) * c.value(c.model.index.gen_p[g][t]);
    }
    return e;
}

CaseCheck check_case(const SolvedCase& c)
{
    CaseCheck out;
    if (!c.optimal()) {
        out.issues.push_back("case is not optimal");
        return out;
    }
    const PowerSystem& sys = c.system;
    const ExpansionIndex& ix = c.model.index;
    const std::size_t T = sys.snapshots();
    const double r = sys.discount_rate;
    auto v = [&](VarId id) { return c.value(id); };

    std::vector<std::vector<double>> net(sys.buses.size(), std::vector<double>(T, 0.0));
    double cost = 0.0;
    for (std::size_t g = 0; g < sys.generators.size(); ++g) {
        const Generator& gen = sys.generators[g];
        const double cap = v(ix.gen_cap[g]);
        cost += cap * annuity(gen.capex_per_mw, r, gen.lifetime, gen.fom_pct);
        const std::size_t b = *sys.bus_index(gen.bus);
        for (std::size_t t = 0; t < T; ++t) {
            const double p = v(ix.gen_p[g][t]);
            const double avail = gen.availability.empty() ? 1.0 : gen.availability[t];
            if (p > avail * cap + 1e-6) out.issues.push_back("generator '" + gen.id + "' exceeds its availability");
            net[b][t] += p;
            cost += p * gen.marginal_cost() * sys.weight(t);
        }
    }
    for (std::size_t s = 0; s < sys.storages.size(); ++s) {
        const StorageUnit& st = sys.storages[s];
        const double P = v(ix.sto_power[s]);
        const double E = ix.sto_energy[s] ? v(*ix.sto_energy[s]) : st.max_hours * P;
        cost += P * annuity(st.power_capex_per_mw, r, st.power_lifetime, st.power_fom_pct) +
                E * annuity(st.energy_capex_per_mwh, r, st.energy_lifetime, st.energy_fom_pct);
        const std::size_t b = *sys.bus_index(st.bus);
        for (std::size_t t = 0; t < T; ++t) {
            const double ch = v(ix.sto_charge[s][t]);
            const double dis = v(ix.sto_discharge[s][t]);
            net[b][t] += dis - ch;
            const std::size_t prev = (t + T - 1) % T;
            const double dt = sys.snapshot_hours[t];
            const double gap = std::abs(v(ix.sto_soc[s][t]) - v(ix.sto_soc[s][prev]) - st.eta_charge * dt * ch + dt / st.eta_discharge * dis);
            out.max_soc_cycle_gap = std::max(out.max_soc_cycle_gap, gap);
            if (v(ix.sto_soc[s][t]) > E + 1e-6) out.issues.push_back("storage '" + st.id + "' exceeds its energy capacity");
        }
    }
    for (std::size_t l = 0; l < sys.lines.size(); ++l) {
        const AcLine& line = sys.lines[l];
        const double ext = v(ix.line_ext[l]);
        cost += ext * annuity(line.capex_per_mw_km * line.length_km, r, line.lifetime, line.fom_pct);
        const double cap = line.usable_fraction * (line.existing_mw + ext);
        const std::size_t a = *sys.bus_index(line.from);
        const std::size_t b = *sys.bus_index(line.to);
        for (std::size_t t = 0; t < T; ++t) {
            const double f = v(ix.line_flow[l][t]);
            net[a][t] -= f;
            net[b][t] += f;
            if (cap > 0.0) out.max_line_loading = std::max(out.max_line_loading, std::abs(f) / cap);
            if (std::abs(f) > cap + 1e-6) out.issues.push_back("AC flow on line '" + line.id + "' above the usable fraction of capacity");
        }
    }
    for (std::size_t k = 0; k < sys.links.size(); ++k) {
        const DcLink& link = sys.links[k];
        const double ext = v(ix.link_ext[k]);
        cost += ext * annuity(link.inverter_capex_per_mw + link.capex_per_mw_km * link.length_km, r, link.lifetime, link.fom_pct);
        const std::size_t a = *sys.bus_index(link.from);
        const std::size_t b = *sys.bus_index(link.to);
        for (std::size_t t = 0; t < T; ++t) {
            const double f = v(ix.link_flow[k][t]);
            net[a][t] -= f;
            net[b][t] += f;
            if (std::abs(f) > link.existing_mw + ext + 1e-6) out.issues.push_back("link '" + link.id + "' exceeds its capacity");
        }
    }
    for (std::size_t h = 0; h < sys.hrs.size(); ++h) {
        const HrsUnit& unit = sys.hrs[h];
        const double P = v(ix.hrs_power[h]);
        const double E = v(ix.hrs_energy[h]);
        cost += P * (annuity(unit.power_capex_per_mw, r, unit.power_lifetime, unit.power_fom_pct) + unit.connection_annuity_per_mw) +
                E * annuity(unit.energy_capex_per_mwh, r, unit.energy_lifetime, unit.energy_fom_pct);
        if (E > unit.e_nom_max + 1e-6) out.issues.push_back("station '" + unit.id + "' storage above its cap");
        const std::size_t b = *sys.bus_index(unit.bus);
        for (std::size_t t = 0; t < T; ++t) {
            const double p = v(ix.hrs_p[h][t]);
            net[b][t] -= p;
            const std::size_t prev = (t + T - 1) % T;
            const double produced = unit.efficiency * sys.snapshot_hours[t] * p;
            const double gap = std::abs(produced - unit.demand_mwh[t] - (v(ix.hrs_soc[h][t]) - v(ix.hrs_soc[h][prev])));
            out.max_h2_balance_violation = std::max(out.max_h2_balance_violation, gap);
            if (p > P + 1e-6) out.issues.push_back("station '" + unit.id + "' electrolyzer above its rating");
        }
    }
    for (std::size_t b = 0; b < sys.buses.size(); ++b) {
        for (std::size_t t = 0; t < T; ++t) {
            const double load = sys.buses[b].load.empty() ? 0.0 : sys.buses[b].load[t];
            out.max_balance_violation = std::max(out.max_balance_violation, std::abs(net[b][t] - load));
        }
    }
    out.co2_emissions = case_emissions(c);
    out.recomputed_objective = cost;

    if (out.max_balance_violation > 1e-6) out.issues.push_back("nodal balance violated");
    if (out.max_soc_cycle_gap > 1e-6) out.issues.push_back("storage state of charge is not cyclic");
    if (out.max_h2_balance_violation > 1e-6) out.issues.push_back("hydrogen balance violated");
    if (std::isfinite(sys.co2_cap) && out.co2_emissions > sys.co2_cap + 1e-6) out.issues.push_back("emissions above the cap");
    if (std::abs(cost - c.solution.objective) > 1e-8 * std::max(1.0, std::abs(cost))) {
        std::ostringstream s;
        s.precision(17);
        s << "objective " << c.solution.objective << " differs from recomputed cost " << cost;
        out.issues.push_back(s.str());
    }
    return out;
}

}  // namespace h2g::power
