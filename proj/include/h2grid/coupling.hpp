#pragma once

#include "h2grid/catalog.hpp"
#include "h2grid/economics.hpp"
#include "h2grid/frlm.hpp"
#include "h2grid/highway.hpp"
#include "h2grid/power.hpp"

#include <optional>
#include <string>
#include <vector>

namespace h2g::coupling {

/// Station-side technology costs. Defaults follow the electrolysis and
/// low-pressure storage rows of the technology table.
struct CouplingCosts {
    double efficiency = 0.68;  // HHV basis
    double electrolyzer_capex_per_mw = 510000.0;
    double electrolyzer_fom_pct = 4.0;
    double electrolyzer_lifetime = 20.0;
    double storage_capex_per_mwh = 19000.0;
    double storage_fom_pct = 0.0;
    double storage_lifetime = 20.0;
    double storage_cap_mwh = kMaxStationStorageMwh;
    double connection_per_mw_km = power::kHvacEurPerMwKm;
    double connection_fom_pct = power::kHvacFomPct;
    double connection_lifetime = power::kHvacLifetime;
    double discount_rate = kDefaultDiscountRate;

    double electrolyzer_annuity_per_mw() const;
    double storage_annuity_per_mwh() const;
    void validate() const;  // Param
};

struct GridAttachment {
    std::string station_id;
    std::string bus_id;
    double distance_km = 0.0;
    double connection_cost_per_mw = 0.0;     // EUR/MW, overnight
    double connection_annuity_per_mw = 0.0;  // EUR/MW/a
};

/// Nearest bus by great-circle distance, ties to the smallest bus id.
/// Throws EmptySystem when the system has no buses.
std::vector<GridAttachment> attach_stations(const std::vector<catalog::HrsSite>& stations,
                                            const power::PowerSystem& sys, const CouplingCosts& costs = {});

/// Hydrogen demand per snapshot in MWh for the modeled horizon. The profile
/// spreads the annual demand over the snapshots; the share of the year the
/// horizon stands for is taken from the system. Throws InconsistentInput on
/// a length mismatch.
std::vector<double> hydrogen_demand_mwh(const catalog::HrsSite& site, const catalog::HrsDemandProfile& profile,
                                        const power::PowerSystem& sys);

struct HrsNodeDesign {
    std::string station_id;
    std::string bus_id;
    double distance_km = 0.0;
    double power_mw = 0.0;
    double energy_mwh = 0.0;
    double capex_annual = 0.0;  // electrolyzer + connection + storage, EUR/a
};

/// Cheapest electrolyzer and store that serve the demand with cyclic state of
/// charge, ignoring electricity prices.
HrsNodeDesign local_sizing(const std::string& station_id, const std::vector<double>& demand_mwh,
                           const std::vector<double>& snapshot_hours, const GridAttachment& attachment,
                           const CouplingCosts& costs = {}, const lp::SolverOptions& options = {});

enum class ScenarioMode { OperationalOnly = 1, InvestmentAndOperational = 2 };

/// Throws Param unless mode is 1 or 2.
ScenarioMode scenario_mode(int mode);

struct ScenarioSpec {
    ScenarioMode mode = ScenarioMode::InvestmentAndOperational;
    CouplingCosts costs;
};

struct StationInput {
    catalog::HrsSite site;
    GridAttachment attachment;
    std::vector<double> demand_mwh;
};

/// Copy of `sys` with one HrsUnit per station. Scenario 1 pins power and
/// energy to `designs` (matched by station id) and throws MissingDesigns when
/// any is absent.
power::PowerSystem embed_hrs(const power::PowerSystem& sys, const std::vector<StationInput>& stations,
                             const std::vector<HrsNodeDesign>* designs, const ScenarioSpec& spec);

struct ScenarioResult {
    ScenarioMode mode = ScenarioMode::InvestmentAndOperational;
    std::vector<StationInput> stations;
    std::vector<HrsNodeDesign> local_designs;  // scenario 1 only
    std::vector<HrsNodeDesign> designs;        // capacities in the solved case
    power::SolvedCase solved;
};

/// attach, size locally (scenario 1), embed and solve. Solver status is left
/// in `solved`; call power::require_optimal to turn it into an error.
ScenarioResult run_scenario(const power::PowerSystem& sys, const std::vector<catalog::HrsSite>& sites,
                            const catalog::HrsDemandProfile& profile, const ScenarioSpec& spec,
                            const lp::SolverOptions& options = {});

/// One site per opened station, placed at its node with the allocated load.
std::vector<catalog::HrsSite> sites_from_siting(const highway::HighwayNetwork& net,
                                                const frlm::SitingSolution& solution);

}  // namespace h2g::coupling
