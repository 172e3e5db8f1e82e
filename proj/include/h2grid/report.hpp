#pragma once

#include "h2grid/coupling.hpp"
#include "h2grid/frlm.hpp"
#include "h2grid/highway.hpp"
#include "h2grid/metrics.hpp"
#include "h2grid/power.hpp"

#include <optional>
#include <string>
#include <vector>

// Text renderers for run artifacts. Every function is pure and formats
// numbers with io::format_number so equal inputs give equal bytes.
namespace h2g::report {

/// node_id,open,load_kg_per_day over every candidate node.
std::string stations_csv(const frlm::FrlmModel& model, const frlm::SitingSolution& sol);
/// metric,value: stations, trips, total/mean/min/max load.
std::string siting_summary_csv(const frlm::FrlmModel& model, const frlm::SitingSolution& sol);
std::string allocations_csv(const frlm::SitingSolution& sol, const frlm::FrlmModel& model);
/// Point per open station with its load.
std::string stations_geojson(const highway::HighwayNetwork& net, const frlm::SitingSolution& sol);

/// snapshot,<bus>... with LMPs in EUR/MWh.
std::string lmp_csv(const std::vector<metrics::LmpSeries>& lmp);
/// bus_id,mean_lmp,median_lmp,variance_lmp
std::string lmp_summary_csv(const std::vector<metrics::LmpSeries>& lmp);
/// kind,id,bus,carrier,capacity_mw,energy_mwh,existing_mw
std::string capacities_csv(const power::SolvedCase& c);
std::string cost_report_csv(const metrics::SystemCostReport& rep);
/// Buses colored by median LMP.
std::string buses_geojson(const power::PowerSystem& sys, const std::vector<metrics::LmpSeries>& lmp);

std::string designs_csv(const std::vector<coupling::HrsNodeDesign>& designs);

struct StationLcoh {
    catalog::HrsSite site;
    std::string bus_id;
    std::optional<metrics::LcohBreakdown> lcoh;  // empty when the station produces nothing
};

/// One row per station; a station without production reports "undefined".
std::string lcoh_csv(const std::vector<StationLcoh>& rows);
/// Stations colored by LCOH.
std::string hrs_geojson(const std::vector<StationLcoh>& rows);

struct CaseSummary {
    std::string label;
    metrics::SystemCostReport cost;
    double electrolyzer_mw = 0.0;
    double hydrogen_storage_mwh = 0.0;
    std::optional<double> weighted_lcoh;  // EUR/kg
    std::optional<double> capex_share;    // of total hydrogen cost
};

/// metric,<label>... one column per case.
std::string summary_csv(const std::vector<CaseSummary>& cases);
/// Grouped bars of annual cost categories per case, in MEUR/a.
std::string cost_chart_svg(const std::vector<CaseSummary>& cases);

}  // namespace h2g::report
