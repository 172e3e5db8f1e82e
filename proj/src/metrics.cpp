#include "h2grid/metrics.hpp"

#include "h2grid/economics.hpp"
#include "h2grid/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace h2g::metrics {

using power::SolvedCase;

namespace {

void require_duals(const SolvedCase& c)
{
    if (!c.optimal() || c.solution.dual.size() != c.model.lp.num_constraints()) {
        throw Error(ErrorCode::MissingDuals, "case '" + c.label + "' carries no dual values");
    }
}

double median_of(std::vector<double> v)
{
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::size_t station_index(const SolvedCase& c, const std::string& id)
{
    for (std::size_t h = 0; h < c.system.hrs.size(); ++h) {
        if (c.system.hrs[h].id == id) return h;
    }
    throw Error(ErrorCode::InconsistentInput, "station '" + id + "' is not part of case '" + c.label + "'");
}

}  // namespace

std::vector<LmpSeries> extract_lmp(const SolvedCase& c)
{
    require_duals(c);
    const power::PowerSystem& sys = c.system;
    std::vector<LmpSeries> out;
    for (std::size_t b = 0; b < sys.buses.size(); ++b) {
        LmpSeries s;
        s.bus_id = sys.buses[b].id;
        for (std::size_t t = 0; t < sys.snapshots(); ++t) {
            s.price.push_back(c.solution.dual_value(c.model.index.balance[b][t]) / sys.weight(t));
        }
        const double n = static_cast<double>(s.price.size());
        if (n > 0) {
            s.mean = std::accumulate(s.price.begin(), s.price.end(), 0.0) / n;
            double ss = 0.0;
            for (double p : s.price) ss += (p - s.mean) * (p - s.mean);
            s.variance = ss / n;
        }
        s.median = median_of(s.price);
        out.push_back(std::move(s));
    }
    return out;
}

LcohBreakdown lcoh(const catalog::HrsSite& site, const SolvedCase& c, const LcohOptions& options)
{
    require_duals(c);
    const power::PowerSystem& sys = c.system;
    const std::size_t h = station_index(c, site.id);
    const power::HrsUnit& unit = sys.hrs[h];
    const std::size_t b = *sys.bus_index(unit.bus);
    const double r = sys.discount_rate;
    const double P = c.value(c.model.index.hrs_power[h]);
    const double E = c.value(c.model.index.hrs_energy[h]);

    LcohBreakdown out;
    out.station_id = site.id;
    out.bus_id = unit.bus;
    out.electrolyzer_capex = P * annuity(unit.power_capex_per_mw, r, unit.power_lifetime, unit.power_fom_pct);
    out.connection_capex = P * unit.connection_annuity_per_mw;
    out.storage_capex = E * annuity(unit.energy_capex_per_mwh, r, unit.energy_lifetime, unit.energy_fom_pct);

    double h2_mwh = 0.0;
    for (std::size_t t = 0; t < sys.snapshots(); ++t) {
        const double p = c.value(c.model.index.hrs_p[h][t]);
        const double w = sys.weight(t);
        const double lmp = c.solution.dual_value(c.model.index.balance[b][t]) / w;
        out.electricity_opex += lmp * p * w;
        out.vom_opex += options.vom_per_mwh_el * p * w;
        h2_mwh += unit.efficiency * p * sys.snapshot_hours[t] * sys.year_scale();
    }
    out.annual_kg = h2_mwh * 1000.0 / kHydrogenKwhPerKg;
    if (!(out.annual_kg > 1e-9)) {
        throw Error(ErrorCode::ZeroProduction, "station '" + site.id + "' produces no hydrogen; LCOH undefined");
    }
    if (options.include_expost) {
        const auto& cls = catalog::classify_station(site.daily_demand_kg, options.catalog);
        out.expost_capex = catalog::expost_capex(cls, options.expost_lifetime, r, options.catalog);
    }
    const double total = out.total();
    out.lcoh = total / out.annual_kg;
    out.capex_share = total != 0.0 ? out.capex() / total : 0.0;
    out.opex_share = total != 0.0 ? 1.0 - out.capex_share : 0.0;
    return out;
}

double weighted_lcoh(const std::vector<LcohBreakdown>& stations)
{
    double cost = 0.0, kg = 0.0;
    for (const LcohBreakdown& s : stations) {
        cost += s.lcoh * s.annual_kg;
        kg += s.annual_kg;
    }
    if (!(kg > 0.0)) throw Error(ErrorCode::ZeroProduction, "no hydrogen produced at any station");
    return cost / kg;
}

ExpansionVolume expansion_volume(const SolvedCase& c)
{
    const power::PowerSystem& sys = c.system;
    double built = 0.0, base = 0.0;
    for (std::size_t l = 0; l < sys.lines.size(); ++l) {
        built += c.value(c.model.index.line_ext[l]) * sys.lines[l].length_km;
        base += sys.lines[l].existing_mw * sys.lines[l].length_km;
    }
    for (std::size_t k = 0; k < sys.links.size(); ++k) {
        built += c.value(c.model.index.link_ext[k]) * sys.links[k].length_km;
        base += sys.links[k].existing_mw * sys.links[k].length_km;
    }
    ExpansionVolume v;
    v.twkm = built / 1e6;
    if (base > 0.0) {
        v.percent = built / base * 100.0;
    } else if (built > 0.0) {
        v.percent = std::numeric_limits<double>::infinity();
    }
    return v;
}

SystemCostReport system_cost_report(const SolvedCase& c)
{
    const power::PowerSystem& sys = c.system;
    const auto& ix = c.model.index;
    const double r = sys.discount_rate;
    const std::size_t T = sys.snapshots();
    SystemCostReport rep;
    for (std::size_t g = 0; g < sys.generators.size(); ++g) {
        const power::Generator& gen = sys.generators[g];
        rep.generation += c.value(ix.gen_cap[g]) * annuity(gen.capex_per_mw, r, gen.lifetime, gen.fom_pct);
        for (std::size_t t = 0; t < T; ++t) rep.generation += c.value(ix.gen_p[g][t]) * gen.marginal_cost() * sys.weight(t);
    }
    for (std::size_t s = 0; s < sys.storages.size(); ++s) {
        const power::StorageUnit& st = sys.storages[s];
        const double P = c.value(ix.sto_power[s]);
        const double E = ix.sto_energy[s] ? c.value(*ix.sto_energy[s]) : st.max_hours * P;
        rep.storage += P * annuity(st.power_capex_per_mw, r, st.power_lifetime, st.power_fom_pct) +
                       E * annuity(st.energy_capex_per_mwh, r, st.energy_lifetime, st.energy_fom_pct);
    }
    for (std::size_t l = 0; l < sys.lines.size(); ++l) {
        const power::AcLine& line = sys.lines[l];
        rep.transmission += c.value(ix.line_ext[l]) * annuity(line.capex_per_mw_km * line.length_km, r, line.lifetime, line.fom_pct);
    }
    for (std::size_t k = 0; k < sys.links.size(); ++k) {
        const power::DcLink& link = sys.links[k];
        rep.transmission += c.value(ix.link_ext[k]) *
                            annuity(link.inverter_capex_per_mw + link.capex_per_mw_km * link.length_km, r, link.lifetime, link.fom_pct);
    }
    for (std::size_t h = 0; h < sys.hrs.size(); ++h) {
        const power::HrsUnit& u = sys.hrs[h];
        rep.hrs_electrolyzers += c.value(ix.hrs_power[h]) *
                                 (annuity(u.power_capex_per_mw, r, u.power_lifetime, u.power_fom_pct) + u.connection_annuity_per_mw);
        rep.hrs_storage += c.value(ix.hrs_energy[h]) * annuity(u.energy_capex_per_mwh, r, u.energy_lifetime, u.energy_fom_pct);
        for (std::size_t t = 0; t < T; ++t) rep.delivered_mwh += c.value(ix.hrs_p[h][t]) * sys.weight(t);
    }
    for (const power::Bus& b : sys.buses) {
        for (std::size_t t = 0; t < T && !b.load.empty(); ++t) rep.delivered_mwh += b.load[t] * sys.weight(t);
    }
    rep.total = rep.generation + rep.storage + rep.transmission + rep.hrs_electrolyzers + rep.hrs_storage;
    rep.relative_eur_per_mwh = rep.delivered_mwh > 0.0 ? rep.total / rep.delivered_mwh : 0.0;
    const ExpansionVolume v = expansion_volume(c);
    rep.expansion_twkm = v.twkm;
    rep.expansion_pct = v.percent;
    rep.co2_t = power::case_emissions(c);
    return rep;
}

double correlate(const std::vector<double>& xs, const std::vector<double>& ys)
{
    if (xs.size() != ys.size()) throw Error(ErrorCode::InconsistentInput, "correlation inputs differ in length");
    if (xs.size() < 2) throw Error(ErrorCode::Degenerate, "correlation needs at least two points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::Degenerate, "correlation of a constant series is undefined");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace h2g::metrics
