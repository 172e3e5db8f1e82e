#pragma once

#include "h2grid/lp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace h2g::power {

inline constexpr double kLineUsableFraction = 0.70;
inline constexpr double kDcLinkMaxMw = 10000.0;
inline constexpr double kGasCo2PerMwhTh = 0.187;
inline constexpr double kHvacEurPerMwKm = 400.0;
inline constexpr double kHvacFomPct = 2.0;
inline constexpr double kHvacLifetime = 40.0;

struct Bus {
    std::string id;
    double lat = 0.0;
    double lon = 0.0;
    std::vector<double> load;  // MW per snapshot, empty means zero
};

struct AcLine {
    std::string id;
    std::string from;
    std::string to;
    double length_km = 0.0;
    double reactance = 0.1;     // held fixed under expansion
    double existing_mw = 0.0;
    double max_mw = -1.0;       // negative means 2 * existing
    double usable_fraction = kLineUsableFraction;
    double capex_per_mw_km = kHvacEurPerMwKm;
    double fom_pct = kHvacFomPct;
    double lifetime = kHvacLifetime;

    double max_capacity() const { return max_mw < 0.0 ? 2.0 * existing_mw : max_mw; }
};

struct DcLink {
    std::string id;
    std::string from;
    std::string to;
    double length_km = 0.0;
    double existing_mw = 0.0;
    double max_mw = kDcLinkMaxMw;
    double inverter_capex_per_mw = 150000.0;
    double capex_per_mw_km = 400.0;  // 2000 for submarine cable
    double fom_pct = 2.0;
    double lifetime = 40.0;
};

struct Generator {
    std::string id;
    std::string bus;
    std::string carrier;
    double capex_per_mw = 0.0;
    double fom_pct = 0.0;
    double vom = 0.0;               // EUR/MWh_el
    double efficiency = 1.0;
    double fuel_cost = 0.0;         // EUR/MWh_th
    double co2_per_mwh_th = 0.0;
    double lifetime = 25.0;
    double p_nom_min = 0.0;
    double p_nom_max = lp::kInf;    // geographical potential
    std::vector<double> availability;  // per snapshot in [0,1], empty means 1

    double marginal_cost() const { return vom + fuel_cost / efficiency; }
    double co2_per_mwh_el() const { return co2_per_mwh_th / efficiency; }
};

struct StorageUnit {
    std::string id;
    std::string bus;
    std::string kind;  // battery, H2, PHS or custom
    double power_capex_per_mw = 0.0;
    double power_fom_pct = 0.0;
    double power_lifetime = 20.0;
    double energy_capex_per_mwh = 0.0;
    double energy_fom_pct = 0.0;
    double energy_lifetime = 20.0;
    double eta_charge = 1.0;
    double eta_discharge = 1.0;
    double max_hours = 0.0;         // > 0 fixes energy = max_hours * power
    double p_nom_max = lp::kInf;
    double e_nom_max = lp::kInf;
};

/// Electrolyzer with a hydrogen store serving an exogenous hydrogen demand.
struct HrsUnit {
    std::string id;
    std::string bus;
    double efficiency = 0.68;
    double power_capex_per_mw = 510000.0;  // plus grid connection when embedded
    double power_fom_pct = 4.0;
    double power_lifetime = 20.0;
    double connection_annuity_per_mw = 0.0;  // EUR/MW/a, added to the power cost
    double energy_capex_per_mwh = 19000.0;
    double energy_fom_pct = 0.0;
    double energy_lifetime = 20.0;
    double e_nom_max = 999.9;
    std::optional<double> fixed_power_mw;
    std::optional<double> fixed_energy_mwh;
    std::vector<double> demand_mwh;  // hydrogen per snapshot (HHV)
};

struct PowerSystem {
    std::vector<Bus> buses;
    std::vector<AcLine> lines;
    std::vector<DcLink> links;
    std::vector<Generator> generators;
    std::vector<StorageUnit> storages;
    std::vector<HrsUnit> hrs;
    std::vector<double> snapshot_hours;  // duration of each snapshot
    double year_hours = 8760.0;          // dispatch terms are scaled to this many hours
    double co2_cap = lp::kInf;           // t/a
    double discount_rate = 0.07;

    std::size_t snapshots() const noexcept { return snapshot_hours.size(); }
    /// year_hours / sum of snapshot durations; 1 for a full modeled year.
    double year_scale() const;
    /// Objective weight of snapshot t: duration * year_scale.
    double weight(std::size_t t) const { return snapshot_hours.at(t) * year_scale(); }
    std::optional<std::size_t> bus_index(const std::string& id) const;
};

/// Table-based defaults for solar, onwind, offwind-ac, offwind-dc, ror,
/// biomass, OCGT, CCGT. Throws Validation for unknown carriers.
Generator generator_defaults(const std::string& carrier);

/// Defaults for battery, H2 and PHS storage.
StorageUnit storage_defaults(const std::string& kind);

/// Referential integrity, series lengths, bounds. Empty when valid.
std::vector<std::string> validate_system(const PowerSystem& sys);

struct ExpansionIndex {
    std::vector<lp::VarId> gen_cap;
    std::vector<std::vector<lp::VarId>> gen_p;  // [generator][t]
    std::vector<lp::VarId> sto_power;
    std::vector<std::optional<lp::VarId>> sto_energy;  // absent for fixed-hours units
    std::vector<std::vector<lp::VarId>> sto_charge, sto_discharge, sto_soc;
    std::vector<lp::VarId> line_ext;
    std::vector<std::vector<lp::VarId>> line_flow;
    std::vector<lp::VarId> link_ext;
    std::vector<std::vector<lp::VarId>> link_flow;
    std::vector<std::vector<std::optional<lp::VarId>>> theta;  // [bus][t]
    std::vector<lp::VarId> hrs_power, hrs_energy;
    std::vector<std::vector<lp::VarId>> hrs_p, hrs_soc;
    std::vector<std::vector<lp::RowId>> balance;     // [bus][t]
    std::vector<std::vector<lp::RowId>> h2_balance;  // [hrs][t]
    std::optional<lp::RowId> co2;
};

struct ExpansionModel {
    lp::LinearProgram lp;
    ExpansionIndex index;
};

/// Greenfield investment and dispatch LP with linearized DC flow.
/// Throws Validation when validate_system reports problems.
ExpansionModel build_expansion_lp(const PowerSystem& sys);

struct SolvedCase {
    std::string label;
    PowerSystem system;
    ExpansionModel model;
    lp::Solution solution;

    bool optimal() const { return solution.optimal(); }
    double value(lp::VarId v) const { return solution.value(v); }
};

SolvedCase solve_case(const PowerSystem& sys, std::string label = "", const lp::SolverOptions& options = {});

/// Throws Infeasible/Unbounded/Internal naming `stage` unless the case is optimal.
void require_optimal(const SolvedCase& c, const std::string& stage);

struct CaseCheck {
    double max_balance_violation = 0.0;  // MW
    double max_line_loading = 0.0;       // |flow| / (0.7 * capacity), max over lines
    double max_soc_cycle_gap = 0.0;
    double max_h2_balance_violation = 0.0;  // MWh
    double co2_emissions = 0.0;             // t/a
    double recomputed_objective = 0.0;
    std::vector<std::string> issues;
};

/// Recomputes physical and cost identities from primal values alone.
CaseCheck check_case(const SolvedCase& c);

/// Emissions in t/a and total annual generation in MWh.
double case_emissions(const SolvedCase& c);

}  // namespace h2g::power
