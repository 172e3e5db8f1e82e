#pragma once

#include "h2grid/catalog.hpp"
#include "h2grid/highway.hpp"
#include "h2grid/power.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace h2g::io {

namespace fs = std::filesystem;

/// Header-first comma-separated table. Rows keep their 1-based line number so
/// parse errors can point at the offending line.
class CsvTable {
public:
    static CsvTable parse(std::string_view text, std::string source);
    static CsvTable read(const fs::path& path);  // Io when unreadable

    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t rows() const noexcept { return rows_.size(); }
    std::optional<std::size_t> column(std::string_view name) const;
    /// Throws Parse naming the file when the column is missing.
    std::size_t require_column(std::string_view name) const;

    const std::string& cell(std::size_t row, std::size_t col) const { return rows_[row][col]; }
    std::size_t line(std::size_t row) const { return lines_[row]; }
    const std::string& source() const noexcept { return source_; }

    double number(std::size_t row, std::size_t col) const;  // Parse on bad input
    bool boolean(std::size_t row, std::size_t col) const;   // 1/0/true/false/yes/no
    [[noreturn]] void fail(std::size_t row, const std::string& what) const;

private:
    std::string source_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::size_t> lines_;
};

/// Shortest text that parses back to the same double.
std::string format_number(double v);

/// Joins fields with commas, quoting any that need it.
std::string csv_line(const std::vector<std::string>& fields);

/// Writes atomically enough for our purposes: truncates and checks the stream.
void write_text(const fs::path& path, std::string_view text);

// Highway inputs.
std::vector<highway::GeoNode> read_nodes(const fs::path& path);
std::vector<highway::Edge> read_edges(const fs::path& path);
std::vector<highway::OdTrip> read_trips(const fs::path& path);
std::string nodes_csv(const std::vector<highway::GeoNode>& nodes);
std::string edges_csv(const std::vector<highway::Edge>& edges);
std::string trips_csv(const std::vector<highway::OdTrip>& trips);

/// Station list with id,lat,lon,daily_demand_kg.
std::vector<catalog::HrsSite> read_sites(const fs::path& path);
std::string sites_csv(const std::vector<catalog::HrsSite>& sites);

/// Power system directory:
///   buses.csv        id,lat,lon
///   lines.csv        id,from,to,length_km,reactance,existing_mw[,max_mw]        (optional)
///   links.csv        id,from,to,length_km,existing_mw[,max_mw,capex_per_mw_km]  (optional)
///   generators.csv   id,bus,carrier[,p_nom_max,p_nom_min,capex_per_mw,vom,fuel_cost,efficiency]
///   storages.csv     id,bus,kind[,p_nom_max,e_nom_max]                          (optional)
///   loads.csv        snapshot,<bus ids...> in MW
///   availability_<carrier>.csv  snapshot,<bus ids...> per unit (optional per carrier)
/// Every snapshot lasts `snapshot_hours`.
power::PowerSystem read_power_system(const fs::path& dir, double snapshot_hours);

/// Writes the files read_power_system expects; returns the paths written.
std::vector<fs::path> write_power_system(const power::PowerSystem& sys, const fs::path& dir);

}  // namespace h2g::io
