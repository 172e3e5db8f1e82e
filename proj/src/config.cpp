#include "h2grid/config.hpp"

#include "h2grid/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>

namespace h2g::pipeline {

const std::vector<ConfigKey>& config_keys()
{
    static const std::vector<ConfigKey> keys{
        {"nodes", "", true, "highway nodes CSV (id,lat,lon,is_candidate)"},
        {"edges", "", true, "highway edges CSV (from,to,length_km)"},
        {"trips", "", true, "OD trips CSV (id,origin,destination,flow_per_day)"},
        {"stations", "", true, "station list CSV (id,lat,lon,daily_demand_kg); skips siting in couple"},
        {"power", "", true, "power system directory"},
        {"out", "out", true, "output directory"},
        {"seed", "42", false, "seed for synth"},
        {"mode", "2", false, "scenario: 1, 2 or both"},
        {"format", "csv", false, "csv, or geojson to add GeoJSON layers"},
        {"range_km", "", false, "vehicle range; required for siting"},
        {"initial_fuel_km", "", false, "fuel at trip start in km; default is the range"},
        {"fuel_per_km", "0.066", false, "hydrogen use in kg/km"},
        {"node_capacity_kg", "30000", false, "station capacity in kg/day"},
        {"min_trip_km", "50", false, "shorter trips are dropped"},
        {"dt_hours", "2", false, "snapshot length in hours"},
        {"year_hours", "8760", false, "hours the snapshots stand for"},
        {"co2_cap_t", "inf", false, "annual CO2 cap in t"},
        {"discount_rate", "0.07", false, "discount rate for annuities"},
        {"electrolyzer_capex_per_mw", "510000", false, "station electrolyzer EUR/MW"},
        {"electrolyzer_efficiency", "0.68", false, "HHV efficiency"},
        {"storage_capex_per_mwh", "19000", false, "low-pressure store EUR/MWh"},
        {"storage_cap_mwh", "999.9", false, "store cap per station"},
        {"connection_eur_per_mw_km", "400", false, "grid connection cost"},
        {"profile_night", "0.3", false, "night demand factor"},
        {"profile_weekend", "0.5", false, "weekend demand factor"},
        {"profile_seasonal", "0.1", false, "seasonal amplitude"},
        {"synth_nodes", "8", false, "synth: highway nodes"},
        {"synth_trips", "6", false, "synth: OD trips"},
        {"synth_buses", "4", false, "synth: buses"},
        {"synth_snapshots", "24", false, "synth: snapshots"},
    };
    return keys;
}

namespace {

const ConfigKey* find_key(const std::string& name)
{
    for (const ConfigKey& k : config_keys()) {
        if (k.name == name) return &k;
    }
    return nullptr;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig::RunConfig()
{
    for (const ConfigKey& k : config_keys()) {
        if (!k.default_value.empty()) values_[k.name] = k.default_value;
    }
}

void RunConfig::assign(const std::string& key, std::string value, const fs::path& base)
{
    const ConfigKey* k = find_key(key);
    if (!k) throw Error(ErrorCode::Param, "unknown config key '" + key + "'");
    if (value.empty()) {
        values_.erase(key);
        return;
    }
    if (k->is_path) {
        fs::path p(value);
        if (p.is_relative()) p = base / p;
        value = p.lexically_normal().string();
    }
    values_[key] = std::move(value);
}

void RunConfig::load_file(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path.string() + "'");
    const fs::path base = fs::absolute(path).parent_path();
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        try {
            assign(key, trim(line.substr(eq + 1)), base);
        } catch (const Error& e) {
            throw Error(ErrorCode::Param, path.string() + ":" + std::to_string(no) + ": " + e.what());
        }
    }
}

void RunConfig::apply_env()
{
    for (const ConfigKey& k : config_keys()) {
        std::string var = "H2G_" + k.name;
        std::transform(var.begin(), var.end(), var.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        if (const char* v = std::getenv(var.c_str())) assign(k.name, trim(v), fs::current_path());
    }
}

void RunConfig::set(const std::string& key, const std::string& value) { assign(key, trim(value), fs::current_path()); }

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string RunConfig::text(const std::string& key) const
{
    auto it = values_.find(key);
    return it == values_.end() ? std::string{} : it->second;
}

double RunConfig::number(const std::string& key) const
{
    const std::string s = text(key);
    if (s.empty()) throw Error(ErrorCode::Param, "config key '" + key + "' is required");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || std::isnan(v)) {
        throw Error(ErrorCode::Param, "config key '" + key + "': '" + s + "' is not a number");
    }
    return v;
}

long RunConfig::integer(const std::string& key) const
{
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 1e15) throw Error(ErrorCode::Param, "config key '" + key + "' must be an integer");
    return static_cast<long>(v);
}

std::optional<fs::path> RunConfig::path(const std::string& key) const
{
    const std::string s = text(key);
    if (s.empty()) return std::nullopt;
    return fs::path(s);
}

fs::path RunConfig::required_path(const std::string& key) const
{
    auto p = path(key);
    if (!p) throw Error(ErrorCode::Param, "config key '" + key + "' is required");
    return *p;
}

std::string RunConfig::canonical() const
{
    std::string out;
    for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
    return out;
}

}  // namespace h2g::pipeline
