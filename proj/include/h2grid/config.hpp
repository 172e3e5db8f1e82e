#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace h2g::pipeline {

namespace fs = std::filesystem;

struct ConfigKey {
    std::string name;
    std::string default_value;  // empty means unset
    bool is_path = false;
    std::string help;
};

/// Every key the tool understands, in documentation order.
const std::vector<ConfigKey>& config_keys();

/// Flat key = value settings. Later sources override earlier ones: defaults,
/// then the config file, then H2G_* environment variables, then explicit sets.
class RunConfig {
public:
    RunConfig();

    /// Lines of `key = value`; `#` starts a comment. Relative paths are taken
    /// relative to the file. Throws Io, Parse (with line number) or Param.
    void load_file(const fs::path& path);
    /// H2G_<KEY> in upper case, e.g. H2G_RANGE_KM.
    void apply_env();
    /// Throws Param for unknown keys. Relative paths resolve against the
    /// working directory.
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    std::string text(const std::string& key) const;  // "" when unset
    double number(const std::string& key) const;     // Param when unset or malformed
    long integer(const std::string& key) const;
    std::optional<fs::path> path(const std::string& key) const;
    fs::path required_path(const std::string& key) const;  // Param naming the key

    /// Sorted `key=value` lines of every set key; hashed into the manifest.
    std::string canonical() const;
    const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    void assign(const std::string& key, std::string value, const fs::path& base);
    std::map<std::string, std::string> values_;
};

}  // namespace h2g::pipeline
