#include "h2grid/catalog.hpp"

#include "h2grid/economics.hpp"
#include "h2grid/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace h2g::catalog {

const Catalog& Catalog::defaults()
{
    static const Catalog catalog{
        {
            {"XS", 15, 938, 938, 113, 2},
            {"S", 31, 1875, 1875, 225, 5},
            {"M", 61, 3750, 3750, 450, 9},
            {"L", 123, 7500, 7500, 900, 19},
            {"XL", 246, 15000, 15000, 1800, 37},
            {"XXL", 492, 30000, 30000, 3600, 74},
        },
        {
            {"XS", 0.13, 0.11, 1.58, 0.12, 0.14, 0.59},
            {"S", 0.26, 0.11, 2.76, 0.12, 0.14, 1.19},
            {"M", 0.51, 0.21, 5.52, 0.12, 0.28, 2.37},
            {"L", 1.03, 0.43, 10.65, 0.12, 0.56, 4.74},
            {"XL", 2.06, 0.86, 21.30, 0.12, 1.12, 9.48},
            {"XXL", 2.06, 0.86, 21.30, 0.12, 1.12, 18.96},
        },
    };
    return catalog;
}

const StationCostSheet& Catalog::cost_of(const std::string& label) const
{
    for (const auto& c : costs) {
        if (c.label == label) return c;
    }
    throw Error(ErrorCode::InconsistentInput, "no cost sheet for station class '" + label + "'");
}

void Catalog::validate() const
{
    std::vector<std::string> issues;
    if (classes.empty()) issues.push_back("catalog has no size classes");
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (!(classes[i].demand_kg_per_day > 0.0)) issues.push_back("class " + classes[i].label + " has no demand");
        if (i > 0 && !(classes[i].demand_kg_per_day > classes[i - 1].demand_kg_per_day)) {
            issues.push_back("class demands must be strictly increasing");
        }
        const bool costed = std::any_of(costs.begin(), costs.end(),
                                        [&](const StationCostSheet& c) { return c.label == classes[i].label; });
        if (!costed) issues.push_back("class " + classes[i].label + " has no cost sheet");
    }
    if (!issues.empty()) throw Error(ErrorCode::Validation, "invalid station catalog: " + issues.front(), issues);
}

const StationSizeClass& classify_station(double daily_demand_kg, const Catalog& catalog)
{
    if (!(daily_demand_kg > 0.0)) throw Error(ErrorCode::Domain, "station demand must be positive");
    if (daily_demand_kg > kMaxStationDemandKgPerDay) {
        throw Error(ErrorCode::OverCap, "station demand exceeds the 30 t/day node limit");
    }
    for (const auto& cls : catalog.classes) {
        if (cls.demand_kg_per_day >= daily_demand_kg) return cls;
    }
    throw Error(ErrorCode::OverCap, "station demand exceeds the largest size class");
}

double expost_capex(const StationSizeClass& cls, double lifetime_years, double discount, const Catalog& catalog)
{
    return catalog.cost_of(cls.label).total * 1e6 * annuity_factor(discount, lifetime_years);
}

void ProfileParams::validate() const
{
    std::vector<std::string> issues;
    if (!(night_factor >= 0.0)) issues.push_back("night_factor must be non-negative");
    if (!(weekend_factor >= 0.0)) issues.push_back("weekend_factor must be non-negative");
    if (!(seasonal_amplitude >= 0.0 && seasonal_amplitude <= 1.0)) {
        issues.push_back("seasonal_amplitude must lie in [0, 1]");
    }
    if (night_start_hour < 0 || night_start_hour > 24 || night_end_hour < 0 || night_end_hour > 24) {
        issues.push_back("night hours must lie in [0, 24]");
    }
    if (!issues.empty()) throw Error(ErrorCode::Param, "invalid profile parameters: " + issues.front(), issues);
}

double profile_shape(const ProfileParams& params, double hour_of_year)
{
    const double week_hour = std::fmod(hour_of_year, 168.0);
    const int day = static_cast<int>(week_hour / 24.0);
    const int hour = static_cast<int>(std::fmod(week_hour, 24.0));
    double w = 1.0;
    const bool night = params.night_start_hour > params.night_end_hour
                           ? (hour >= params.night_start_hour || hour < params.night_end_hour)
                           : (hour >= params.night_start_hour && hour < params.night_end_hour);
    if (night) w *= params.night_factor;
    if (day >= 5) w *= params.weekend_factor;
    w *= 1.0 + params.seasonal_amplitude * std::cos(2.0 * std::numbers::pi * hour_of_year / kHoursPerYear);
    return w;
}

HrsDemandProfile profile_from_weights(std::vector<double> weights, double snapshot_hours)
{
    if (weights.empty()) throw Error(ErrorCode::Param, "profile needs at least one snapshot");
    if (!(snapshot_hours > 0.0)) throw Error(ErrorCode::Param, "snapshot length must be positive");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::Param, "profile weights must be non-negative");
        sum += w;
    }
    if (!(sum > 0.0)) throw Error(ErrorCode::Param, "profile weights sum to zero");
    for (double& w : weights) w /= sum;
    HrsDemandProfile p;
    p.weights = std::move(weights);
    p.snapshot_hours = snapshot_hours;
    return p;
}

HrsDemandProfile synth_profile(const ProfileParams& params, std::size_t snapshots, double snapshot_hours)
{
    params.validate();
    if (snapshots == 0) throw Error(ErrorCode::Param, "profile needs at least one snapshot");
    std::vector<double> w(snapshots);
    for (std::size_t t = 0; t < snapshots; ++t) w[t] = profile_shape(params, static_cast<double>(t) * snapshot_hours);
    HrsDemandProfile p = profile_from_weights(std::move(w), snapshot_hours);
    p.params = params;
    return p;
}

HrsSite make_site(std::string id, double lat, double lon, double daily_demand_kg)
{
    if (!(daily_demand_kg >= 0.0)) throw Error(ErrorCode::Domain, "station demand must be non-negative");
    if (daily_demand_kg > kMaxStationDemandKgPerDay * (1.0 + 1e-9)) {
        throw Error(ErrorCode::OverCap, "station '" + id + "' exceeds the 30 t/day node limit");
    }
    return HrsSite{std::move(id), lat, lon, daily_demand_kg * 365.0, daily_demand_kg};
}

std::vector<double> demand_series(const HrsSite& site, const HrsDemandProfile& profile)
{
    std::vector<double> d(profile.size());
    for (std::size_t t = 0; t < d.size(); ++t) d[t] = site.annual_demand_kg * profile.weights[t];
    return d;
}

double diesel_parity(double energy_at_wheel_kwh_per_100km, double eta_diesel, double eta_fcev,
                     double diesel_kwh_per_l, double diesel_price_eur_per_l, double h2_kwh_per_unit)
{
    auto efficiency_ok = [](double eta) { return eta > 0.0 && eta <= 1.0; };
    if (!efficiency_ok(eta_diesel) || !efficiency_ok(eta_fcev)) {
        throw Error(ErrorCode::Domain, "powertrain efficiencies must lie in (0, 1]");
    }
    if (!(diesel_kwh_per_l > 0.0) || !(h2_kwh_per_unit > 0.0)) {
        throw Error(ErrorCode::Domain, "energy contents must be positive");
    }
    const double diesel_eur_per_100km = diesel_price_eur_per_l * (energy_at_wheel_kwh_per_100km / eta_diesel) / diesel_kwh_per_l;
    const double h2_units_per_100km = (energy_at_wheel_kwh_per_100km / eta_fcev) / h2_kwh_per_unit;
    return diesel_eur_per_100km / h2_units_per_100km;
}

}  // namespace h2g::catalog
