#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace h2g::catalog {

struct StationSizeClass {
    std::string label;
    double hdv_per_day = 0.0;
    double demand_kg_per_day = 0.0;
    double lp_storage_kg = 0.0;
    double hp_storage_kg = 0.0;
    double electrolyzer_mw = 0.0;
};

/// Million euro per station for components outside the power-system model.
struct StationCostSheet {
    std::string label;
    double hp_storage = 0.0;
    double dispenser = 0.0;
    double compressors = 0.0;
    double cooling = 0.0;
    double safety = 0.0;
    double total = 0.0;  // authoritative; not the sum of the columns
};

struct Catalog {
    std::vector<StationSizeClass> classes;  // ascending demand
    std::vector<StationCostSheet> costs;    // same labels as classes

    static const Catalog& defaults();
    const StationCostSheet& cost_of(const std::string& label) const;
    /// Throws Validation when classes are unsorted or costs are missing.
    void validate() const;
};

/// Smallest class whose demand covers daily_demand. OverCap above 30 t/day
/// (or the largest class), Domain for non-positive demand.
const StationSizeClass& classify_station(double daily_demand_kg, const Catalog& catalog = Catalog::defaults());

inline constexpr double kExpostLifetimeYears = 20.0;

/// Annualized euro per year for compressors, high-pressure storage, dispensers,
/// cooling and safety (the cost-sheet total).
double expost_capex(const StationSizeClass& cls, double lifetime_years = kExpostLifetimeYears,
                    double discount = 0.07, const Catalog& catalog = Catalog::defaults());

struct ProfileParams {
    double night_factor = 0.3;
    double weekend_factor = 0.5;
    double seasonal_amplitude = 0.1;
    int night_start_hour = 22;
    int night_end_hour = 6;
    /// Throws Param on negative factors or an amplitude outside [0, 1].
    void validate() const;
};

/// Unnormalized weight of the hour starting at `hour_of_year` (hour 0 is
/// Monday 00:00 in mid-winter).
double profile_shape(const ProfileParams& params, double hour_of_year);

struct HrsDemandProfile {
    std::vector<double> weights;
    double snapshot_hours = 1.0;
    ProfileParams params;
    std::size_t size() const noexcept { return weights.size(); }
};

/// Weekly truck pattern with reduced nights and weekends under a seasonal
/// cosine, sampled at the start of each snapshot and normalized to sum 1.
HrsDemandProfile synth_profile(const ProfileParams& params, std::size_t snapshots, double snapshot_hours = 1.0);

/// Normalizes arbitrary non-negative weights to sum 1.
HrsDemandProfile profile_from_weights(std::vector<double> weights, double snapshot_hours);

struct HrsSite {
    std::string id;
    double lat = 0.0;
    double lon = 0.0;
    double annual_demand_kg = 0.0;
    double daily_demand_kg = 0.0;
};

/// Builds a site from its daily demand; OverCap above 30 t/day.
HrsSite make_site(std::string id, double lat, double lon, double daily_demand_kg);

/// d_t = annual_demand * w_t in kg per snapshot.
std::vector<double> demand_series(const HrsSite& site, const HrsDemandProfile& profile);

/// Break-even hydrogen price per unit of h2_energy against diesel.
double diesel_parity(double energy_at_wheel_kwh_per_100km, double eta_diesel, double eta_fcev,
                     double diesel_kwh_per_l, double diesel_price_eur_per_l, double h2_kwh_per_unit);

/// Inputs of the diesel comparison table. The diesel efficiency is the one
/// implied by the tabulated 360.7 kWh/100 km at the tank.
struct DieselComparison {
    double energy_at_wheel = 120.0;
    double diesel_tank_kwh = 360.7;
    double eta_fcev = 0.55;
    double eta_bev = 0.75;
    double diesel_kwh_per_l = 10.0;
    double diesel_price = 1.2;
    double h2_kwh_per_kg = 33.3;
    double eta_diesel() const { return energy_at_wheel / diesel_tank_kwh; }
};

}  // namespace h2g::catalog
