#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace h2g {

enum class ErrorCode {
    Domain,
    Unreachable,
    InconsistentInput,
    Infeasible,
    Unbounded,
    OverCap,
    Param,
    Validation,
    EmptySystem,
    MissingDesigns,
    MissingDuals,
    ZeroProduction,
    Degenerate,
    Parse,
    Io,
    Internal,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carried through every module. `details` holds itemized
/// diagnostics (violated constraints, parse locations) when there are several.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::vector<std::string> details = {})
        : std::runtime_error(message), code_(code), details_(std::move(details))
    {
    }

    ErrorCode code() const noexcept { return code_; }
    const std::vector<std::string>& details() const noexcept { return details_; }

private:
    ErrorCode code_;
    std::vector<std::string> details_;
};

/// Process exit code class: 1 input error, 2 infeasible/unbounded, 3 internal.
int exit_code_for(ErrorCode code) noexcept;

}  // namespace h2g
