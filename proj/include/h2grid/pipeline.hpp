#pragma once

#include "h2grid/config.hpp"
#include "h2grid/error.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace h2g::pipeline {

namespace fs = std::filesystem;

inline constexpr std::string_view kCommands[] = {"site", "power", "couple", "synth", "report"};

struct StageRecord {
    std::string name;
    std::string status;  // ok or failed
    double seconds = 0.0;
};

struct SolverRecord {
    std::string stage;
    std::string status;
    double objective = 0.0;
    std::size_t iterations = 0;
    double duality_gap = 0.0;
};

struct RunReport {
    std::string command;
    int exit_code = 0;
    std::string message;  // first line of the failure, prefixed with the stage
    std::vector<std::string> warnings;
    fs::path out_dir;
    std::vector<fs::path> outputs;  // relative to out_dir, in write order
    std::vector<StageRecord> stages;
    std::vector<SolverRecord> solvers;
};

/// Runs one subcommand. Never throws: failures end up in the report's exit
/// code (1 input, 2 infeasible or unbounded, 3 internal) and message. A
/// manifest.json listing every output with its SHA-256 is written to the
/// output directory in all cases, provided the directory can be created.
/// `config_error` records a failure that happened while assembling `cfg`.
RunReport run(std::string_view command, const RunConfig& cfg, const std::optional<Error>& config_error = std::nullopt);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const fs::path& path);  // Io when unreadable

std::string_view version() noexcept;

}  // namespace h2g::pipeline
