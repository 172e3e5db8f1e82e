#include "h2grid/economics.hpp"

#include "h2grid/error.hpp"

#include <cmath>

namespace h2g {

double annuity_factor(double discount, double lifetime_years)
{
    if (!(discount >= 0.0) || !std::isfinite(discount)) {
        throw Error(ErrorCode::Domain, "discount rate must be non-negative");
    }
    if (!(lifetime_years >= 1.0)) throw Error(ErrorCode::Domain, "lifetime must be at least one year");
    if (discount == 0.0) return 1.0 / lifetime_years;
    if (std::isinf(lifetime_years)) return discount;
    // expm1/log1p keep the factor accurate for tiny rates.
    return discount / -std::expm1(-lifetime_years * std::log1p(discount));
}

double annuity(double capex, double discount, double lifetime_years, double fom_pct)
{
    return capex * annuity_factor(discount, lifetime_years) + capex * fom_pct / 100.0;
}

}  // namespace h2g
