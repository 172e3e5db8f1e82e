#include "h2grid/report.hpp"

#include "h2grid/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace h2g::report {

namespace {

using io::csv_line;
using io::format_number;
using json = nlohmann::ordered_json;

std::string num(double v) { return format_number(v); }

// Green (low) to red (high) in the simplestyle marker-color convention.
std::string ramp_color(double v, double lo, double hi)
{
    const double x = hi > lo ? std::clamp((v - lo) / (hi - lo), 0.0, 1.0) : 0.5;
    const int r = static_cast<int>(std::lround(40 + x * (215 - 40)));
    const int g = static_cast<int>(std::lround(170 - x * (170 - 48)));
    const int b = static_cast<int>(std::lround(80 - x * (80 - 39)));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

json point(double lat, double lon, json properties)
{
    json f;
    f["type"] = "Feature";
    f["geometry"] = {{"type", "Point"}, {"coordinates", json::array({lon, lat})}};
    f["properties"] = std::move(properties);
    return f;
}

std::string collection(json features)
{
    json fc;
    fc["type"] = "FeatureCollection";
    fc["features"] = std::move(features);
    return fc.dump(2) + "\n";
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string stations_csv(const frlm::FrlmModel& model, const frlm::SitingSolution& sol)
{
    std::string out = csv_line({"node_id", "open", "load_kg_per_day"});
    const std::set<std::string> open(sol.stations.begin(), sol.stations.end());
    for (const std::string& id : model.candidates) {
        auto it = sol.node_load.find(id);
        const double load = it == sol.node_load.end() ? 0.0 : it->second;
        out += csv_line({id, open.count(id) ? "1" : "0", num(load)});
    }
    return out;
}

std::string siting_summary_csv(const frlm::FrlmModel& model, const frlm::SitingSolution& sol)
{
    double total = 0.0, lo = 0.0, hi = 0.0;
    bool first = true;
    for (const std::string& id : sol.stations) {
        auto it = sol.node_load.find(id);
        const double load = it == sol.node_load.end() ? 0.0 : it->second;
        total += load;
        lo = first ? load : std::min(lo, load);
        hi = first ? load : std::max(hi, load);
        first = false;
    }
    double fuel = 0.0;
    for (const auto& t : model.trips) fuel += t.flow * model.config.fuel_per_km * t.distance_km;
    const double n = static_cast<double>(sol.stations.size());
    std::string out = csv_line({"metric", "value"});
    out += csv_line({"stations", std::to_string(sol.stations.size())});
    out += csv_line({"trips", std::to_string(model.trips.size())});
    out += csv_line({"candidates", std::to_string(model.candidates.size())});
    out += csv_line({"fuel_demand_kg_per_day", num(fuel)});
    out += csv_line({"total_load_kg_per_day", num(total)});
    out += csv_line({"mean_load_kg_per_day", num(n > 0 ? total / n : 0.0)});
    out += csv_line({"min_load_kg_per_day", num(lo)});
    out += csv_line({"max_load_kg_per_day", num(hi)});
    out += csv_line({"node_capacity_kg_per_day", num(model.config.node_capacity)});
    out += csv_line({"range_km", num(model.config.range_km)});
    out += csv_line({"branch_nodes", std::to_string(sol.nodes_explored)});
    return out;
}

std::string allocations_csv(const frlm::SitingSolution& sol, const frlm::FrlmModel& model)
{
    std::string out = csv_line({"node_id", "trip_id", "share", "kg_per_day"});
    for (const frlm::Allocation& a : sol.allocations) {
        double kg = 0.0;
        for (const frlm::AllocationVar& x : model.x) {
            if (x.node == a.node && model.trips[x.trip].id == a.trip_id) kg = x.kg_per_unit * a.value;
        }
        out += csv_line({a.node, a.trip_id, num(a.value), num(kg)});
    }
    return out;
}

std::string stations_geojson(const highway::HighwayNetwork& net, const frlm::SitingSolution& sol)
{
    json features = json::array();
    for (const std::string& id : sol.stations) {
        const highway::GeoNode& n = net.node(id);
        auto it = sol.node_load.find(id);
        features.push_back(point(n.lat, n.lon, {{"id", id}, {"load_kg_per_day", it == sol.node_load.end() ? 0.0 : it->second}}));
    }
    return collection(std::move(features));
}

std::string lmp_csv(const std::vector<metrics::LmpSeries>& lmp)
{
    std::vector<std::string> head{"snapshot"};
    for (const auto& s : lmp) head.push_back(s.bus_id);
    std::string out = csv_line(head);
    const std::size_t T = lmp.empty() ? 0 : lmp.front().price.size();
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<std::string> row{std::to_string(t)};
        for (const auto& s : lmp) row.push_back(num(s.price[t]));
        out += csv_line(row);
    }
    return out;
}

std::string lmp_summary_csv(const std::vector<metrics::LmpSeries>& lmp)
{
    std::string out = csv_line({"bus_id", "mean_lmp", "median_lmp", "variance_lmp"});
    for (const auto& s : lmp) out += csv_line({s.bus_id, num(s.mean), num(s.median), num(s.variance)});
    return out;
}

std::string capacities_csv(const power::SolvedCase& c)
{
    const power::PowerSystem& sys = c.system;
    const auto& ix = c.model.index;
    std::string out = csv_line({"kind", "id", "bus", "carrier", "capacity_mw", "energy_mwh", "existing_mw"});
    for (std::size_t g = 0; g < sys.generators.size(); ++g) {
        const auto& gen = sys.generators[g];
        out += csv_line({"generator", gen.id, gen.bus, gen.carrier, num(c.value(ix.gen_cap[g])), "", ""});
    }
    for (std::size_t s = 0; s < sys.storages.size(); ++s) {
        const auto& st = sys.storages[s];
        const double P = c.value(ix.sto_power[s]);
        const double E = ix.sto_energy[s] ? c.value(*ix.sto_energy[s]) : st.max_hours * P;
        out += csv_line({"storage", st.id, st.bus, st.kind, num(P), num(E), ""});
    }
    for (std::size_t l = 0; l < sys.lines.size(); ++l) {
        const auto& line = sys.lines[l];
        out += csv_line({"line", line.id, line.from + "-" + line.to, "AC", num(line.existing_mw + c.value(ix.line_ext[l])), "",
                         num(line.existing_mw)});
    }
    for (std::size_t k = 0; k < sys.links.size(); ++k) {
        const auto& link = sys.links[k];
        out += csv_line({"link", link.id, link.from + "-" + link.to, "DC", num(link.existing_mw + c.value(ix.link_ext[k])), "",
                         num(link.existing_mw)});
    }
    for (std::size_t h = 0; h < sys.hrs.size(); ++h) {
        const auto& u = sys.hrs[h];
        out += csv_line({"hrs", u.id, u.bus, "electrolysis", num(c.value(ix.hrs_power[h])), num(c.value(ix.hrs_energy[h])), ""});
    }
    return out;
}

std::string cost_report_csv(const metrics::SystemCostReport& rep)
{
    std::string out = csv_line({"metric", "value", "unit"});
    out += csv_line({"total_cost", num(rep.total), "EUR/a"});
    out += csv_line({"generation_cost", num(rep.generation), "EUR/a"});
    out += csv_line({"storage_cost", num(rep.storage), "EUR/a"});
    out += csv_line({"transmission_cost", num(rep.transmission), "EUR/a"});
    out += csv_line({"hrs_electrolyzer_cost", num(rep.hrs_electrolyzers), "EUR/a"});
    out += csv_line({"hrs_storage_cost", num(rep.hrs_storage), "EUR/a"});
    out += csv_line({"delivered_energy", num(rep.delivered_mwh), "MWh/a"});
    out += csv_line({"relative_cost", num(rep.relative_eur_per_mwh), "EUR/MWh"});
    out += csv_line({"grid_expansion", num(rep.expansion_twkm), "TWkm"});
    out += csv_line({"grid_expansion_share", num(rep.expansion_pct), "%"});
    out += csv_line({"co2_emissions", num(rep.co2_t), "t/a"});
    return out;
}

std::string buses_geojson(const power::PowerSystem& sys, const std::vector<metrics::LmpSeries>& lmp)
{
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < lmp.size(); ++i) {
        lo = i == 0 ? lmp[i].median : std::min(lo, lmp[i].median);
        hi = i == 0 ? lmp[i].median : std::max(hi, lmp[i].median);
    }
    json features = json::array();
    for (const auto& s : lmp) {
        auto b = sys.bus_index(s.bus_id);
        if (!b) continue;
        const power::Bus& bus = sys.buses[*b];
        features.push_back(point(bus.lat, bus.lon,
                                 {{"id", bus.id},
                                  {"median_lmp", finite_or_null(s.median)},
                                  {"mean_lmp", finite_or_null(s.mean)},
                                  {"marker-color", ramp_color(s.median, lo, hi)}}));
    }
    return collection(std::move(features));
}

std::string designs_csv(const std::vector<coupling::HrsNodeDesign>& designs)
{
    std::string out = csv_line({"station_id", "bus_id", "distance_km", "electrolyzer_mw", "storage_mwh", "capex_eur_per_a"});
    for (const auto& d : designs) {
        out += csv_line({d.station_id, d.bus_id, num(d.distance_km), num(d.power_mw), num(d.energy_mwh), num(d.capex_annual)});
    }
    return out;
}

std::string lcoh_csv(const std::vector<StationLcoh>& rows)
{
    std::string out = csv_line({"station_id", "bus_id", "daily_demand_kg", "annual_kg", "electrolyzer_capex", "storage_capex",
                                "connection_capex", "expost_capex", "electricity_opex", "vom_opex", "lcoh_eur_per_kg",
                                "capex_share", "opex_share"});
    for (const auto& r : rows) {
        if (!r.lcoh) {
            out += csv_line({r.site.id, r.bus_id, num(r.site.daily_demand_kg), "0", "", "", "", "", "", "", "undefined", "", ""});
            continue;
        }
        const auto& b = *r.lcoh;
        out += csv_line({r.site.id, r.bus_id, num(r.site.daily_demand_kg), num(b.annual_kg), num(b.electrolyzer_capex),
                         num(b.storage_capex), num(b.connection_capex), num(b.expost_capex), num(b.electricity_opex),
                         num(b.vom_opex), num(b.lcoh), num(b.capex_share), num(b.opex_share)});
    }
    return out;
}

std::string hrs_geojson(const std::vector<StationLcoh>& rows)
{
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& r : rows) {
        if (!r.lcoh) continue;
        lo = first ? r.lcoh->lcoh : std::min(lo, r.lcoh->lcoh);
        hi = first ? r.lcoh->lcoh : std::max(hi, r.lcoh->lcoh);
        first = false;
    }
    json features = json::array();
    for (const auto& r : rows) {
        json props = {{"id", r.site.id}, {"bus_id", r.bus_id}, {"daily_demand_kg", r.site.daily_demand_kg}};
        if (r.lcoh) {
            props["lcoh_eur_per_kg"] = r.lcoh->lcoh;
            props["marker-color"] = ramp_color(r.lcoh->lcoh, lo, hi);
        } else {
            props["lcoh_eur_per_kg"] = nullptr;
            props["marker-color"] = "#808080";
        }
        features.push_back(point(r.site.lat, r.site.lon, std::move(props)));
    }
    return collection(std::move(features));
}

std::string summary_csv(const std::vector<CaseSummary>& cases)
{
    std::vector<std::string> head{"metric", "unit"};
    for (const auto& c : cases) head.push_back(c.label);
    std::string out = csv_line(head);
    auto row = [&](const std::string& name, const std::string& unit, auto&& get) {
        std::vector<std::string> r{name, unit};
        for (const auto& c : cases) r.push_back(get(c));
        out += csv_line(r);
    };
    auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string("undefined"); };
    row("total_annual_system_cost", "EUR/a", [](const CaseSummary& c) { return num(c.cost.total); });
    row("relative_system_cost", "EUR/MWh", [](const CaseSummary& c) { return num(c.cost.relative_eur_per_mwh); });
    row("generation_cost", "EUR/a", [](const CaseSummary& c) { return num(c.cost.generation); });
    row("storage_cost", "EUR/a", [](const CaseSummary& c) { return num(c.cost.storage); });
    row("transmission_cost", "EUR/a", [](const CaseSummary& c) { return num(c.cost.transmission); });
    row("hrs_electrolyzer_cost", "EUR/a", [](const CaseSummary& c) { return num(c.cost.hrs_electrolyzers); });
    row("hrs_storage_cost", "EUR/a", [](const CaseSummary& c) { return num(c.cost.hrs_storage); });
    row("hrs_electrolyzer_capacity", "MW", [](const CaseSummary& c) { return num(c.electrolyzer_mw); });
    row("hrs_storage_capacity", "MWh", [](const CaseSummary& c) { return num(c.hydrogen_storage_mwh); });
    row("grid_expansion", "TWkm", [](const CaseSummary& c) { return num(c.cost.expansion_twkm); });
    row("grid_expansion_share", "%", [](const CaseSummary& c) { return num(c.cost.expansion_pct); });
    row("co2_emissions", "t/a", [](const CaseSummary& c) { return num(c.cost.co2_t); });
    row("weighted_lcoh", "EUR/kg", [&](const CaseSummary& c) { return opt(c.weighted_lcoh); });
    row("hydrogen_capex_share", "-", [&](const CaseSummary& c) { return opt(c.capex_share); });
    return out;
}

std::string cost_chart_svg(const std::vector<CaseSummary>& cases)
{
    struct Category {
        const char* name;
        const char* color;
        double metrics::SystemCostReport::*field;
    };
    const Category cats[] = {
        {"generation", "#4e79a7", &metrics::SystemCostReport::generation},
        {"storage", "#59a14f", &metrics::SystemCostReport::storage},
        {"transmission", "#f28e2b", &metrics::SystemCostReport::transmission},
        {"HRS electrolyzers", "#e15759", &metrics::SystemCostReport::hrs_electrolyzers},
        {"HRS storage", "#b07aa1", &metrics::SystemCostReport::hrs_storage},
    };
    const int ncat = static_cast<int>(std::size(cats));
    const int ncase = static_cast<int>(cases.size());
    double vmax = 0.0;
    for (const auto& c : cases) {
        for (const auto& k : cats) vmax = std::max(vmax, c.cost.*k.field / 1e6);
    }
    if (!(vmax > 0.0)) vmax = 1.0;

    const int bar = 18, gap = 30, left = 70, top = 40, height = 300;
    const int group = ncase * bar;
    const int width = left + ncat * (group + gap) + 180;
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f", v);
        return std::string(buf);
    };
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(top + height + 60) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s += "<text x=\"" + std::to_string(left) + "\" y=\"20\" font-size=\"13\">Annual system cost by category (MEUR/a)</text>\n";
    s += "<line x1=\"" + std::to_string(left) + "\" y1=\"" + std::to_string(top + height) + "\" x2=\"" +
         std::to_string(width - 170) + "\" y2=\"" + std::to_string(top + height) + "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const int y = top + height - tick * height / 4;
        s += "<text x=\"" + std::to_string(left - 6) + "\" y=\"" + std::to_string(y + 4) + "\" text-anchor=\"end\">" +
             fmt(vmax * tick / 4.0) + "</text>\n";
    }
    const char* shades[] = {"1", "0.75", "0.5", "0.3"};
    for (int k = 0; k < ncat; ++k) {
        const int x0 = left + gap / 2 + k * (group + gap);
        for (int c = 0; c < ncase; ++c) {
            const double v = cases[c].cost.*cats[k].field / 1e6;
            const int h = static_cast<int>(std::lround(std::max(0.0, v) / vmax * height));
            s += "<rect x=\"" + std::to_string(x0 + c * bar) + "\" y=\"" + std::to_string(top + height - h) + "\" width=\"" +
                 std::to_string(bar - 2) + "\" height=\"" + std::to_string(h) + "\" fill=\"" + cats[k].color +
                 "\" fill-opacity=\"" + shades[c % 4] + "\"><title>" + cases[c].label + ": " + fmt(v) + "</title></rect>\n";
        }
        s += "<text x=\"" + std::to_string(x0 + group / 2) + "\" y=\"" + std::to_string(top + height + 16) +
             "\" text-anchor=\"middle\">" + cats[k].name + "</text>\n";
    }
    for (int c = 0; c < ncase; ++c) {
        const int y = top + 10 + c * 18;
        s += "<rect x=\"" + std::to_string(width - 160) + "\" y=\"" + std::to_string(y - 9) +
             "\" width=\"12\" height=\"12\" fill=\"#555555\" fill-opacity=\"" + shades[c % 4] + "\"/>\n";
        s += "<text x=\"" + std::to_string(width - 142) + "\" y=\"" + std::to_string(y + 1) + "\">" + cases[c].label + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace h2g::report
