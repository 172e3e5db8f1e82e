#pragma once

#include "h2grid/catalog.hpp"
#include "h2grid/power.hpp"

#include <string>
#include <vector>

namespace h2g::metrics {

struct LmpSeries {
    std::string bus_id;
    std::vector<double> price;  // EUR/MWh
    double mean = 0.0;
    double median = 0.0;
    double variance = 0.0;  // population
};

/// Balance duals divided by snapshot weight. Throws MissingDuals unless the
/// case is optimal with a dual per row.
std::vector<LmpSeries> extract_lmp(const power::SolvedCase& c);

struct LcohOptions {
    bool include_expost = true;  // compressor, dispenser, cooling, etc. by size class
    double expost_lifetime = 20.0;
    double vom_per_mwh_el = 0.0;
    catalog::Catalog catalog = catalog::Catalog::defaults();
};

struct LcohBreakdown {
    std::string station_id;
    std::string bus_id;
    double electrolyzer_capex = 0.0;  // EUR/a
    double storage_capex = 0.0;
    double connection_capex = 0.0;
    double expost_capex = 0.0;
    double electricity_opex = 0.0;
    double vom_opex = 0.0;
    double annual_kg = 0.0;
    double lcoh = 0.0;  // EUR/kg
    double capex_share = 0.0;
    double opex_share = 0.0;

    double capex() const { return electrolyzer_capex + storage_capex + connection_capex + expost_capex; }
    double opex() const { return electricity_opex + vom_opex; }
    double total() const { return capex() + opex(); }
};

/// Cost of hydrogen at one station of a solved case. Throws ZeroProduction
/// when the station produces nothing, InconsistentInput when it is absent.
LcohBreakdown lcoh(const catalog::HrsSite& site, const power::SolvedCase& c, const LcohOptions& options = {});

/// Production-weighted mean LCOH. Throws ZeroProduction for an empty input.
double weighted_lcoh(const std::vector<LcohBreakdown>& stations);

struct SystemCostReport {
    double total = 0.0;  // EUR/a
    double generation = 0.0;
    double storage = 0.0;
    double transmission = 0.0;
    double hrs_electrolyzers = 0.0;  // incl. grid connection
    double hrs_storage = 0.0;
    double delivered_mwh = 0.0;      // electric load plus electrolyzer consumption, per year
    double relative_eur_per_mwh = 0.0;
    double expansion_twkm = 0.0;
    double expansion_pct = 0.0;
    double co2_t = 0.0;
};

SystemCostReport system_cost_report(const power::SolvedCase& c);

struct ExpansionVolume {
    double twkm = 0.0;
    double percent = 0.0;  // of the initial MW*km; 0 when nothing existed and nothing was built
};

ExpansionVolume expansion_volume(const power::SolvedCase& c);

/// Pearson coefficient. Throws InconsistentInput on unequal lengths and
/// Degenerate for fewer than two points or a constant series.
double correlate(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace h2g::metrics
