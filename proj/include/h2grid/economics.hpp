#pragma once

namespace h2g {

inline constexpr double kHydrogenKwhPerKg = 33.33;  // higher heating value
inline constexpr double kMaxStationDemandKgPerDay = 30000.0;
inline constexpr double kMaxStationStorageMwh = 999.9;
inline constexpr double kHoursPerYear = 8760.0;
inline constexpr double kDefaultDiscountRate = 0.07;

/// r / (1 - (1+r)^-n); 1/n at r = 0. Throws Domain for r < 0 or n < 1.
double annuity_factor(double discount, double lifetime_years);

/// capex * annuity_factor + capex * fom_pct / 100.
double annuity(double capex, double discount, double lifetime_years, double fom_pct = 0.0);

}  // namespace h2g
