#include "h2grid/error.hpp"

namespace h2g {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::Unreachable: return "UNREACHABLE";
    case ErrorCode::InconsistentInput: return "INCONSISTENT_INPUT";
    case ErrorCode::Infeasible: return "INFEASIBLE";
    case ErrorCode::Unbounded: return "UNBOUNDED";
    case ErrorCode::OverCap: return "OVER_CAP";
    case ErrorCode::Param: return "PARAM";
    case ErrorCode::Validation: return "VALIDATION";
    case ErrorCode::EmptySystem: return "EMPTY_SYSTEM";
    case ErrorCode::MissingDesigns: return "MISSING_DESIGNS";
    case ErrorCode::MissingDuals: return "MISSING_DUALS";
    case ErrorCode::ZeroProduction: return "ZERO_PRODUCTION";
    case ErrorCode::Degenerate: return "DEGENERATE";
    case ErrorCode::Parse: return "PARSE";
    case ErrorCode::Io: return "IO";
    case ErrorCode::Internal: return "INTERNAL";
    }
    return "UNKNOWN";
}

int exit_code_for(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::Infeasible:
    case ErrorCode::Unbounded:
        return 2;
    case ErrorCode::Internal:
    case ErrorCode::MissingDuals:
    case ErrorCode::Degenerate:
        return 3;
    default:
        return 1;
    }
}

}  // namespace h2g
