// Command-line front end. Talks to the library only through h2grid.h.
#include "h2grid/h2grid.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

struct Options {
    std::string config;
    std::string mode;
    std::string seed;
    std::string out;
    std::string format;
    std::vector<std::string> sets;
    bool quiet = false;
};

using ConfigPtr = std::unique_ptr<h2g_config, decltype(&h2g_config_free)>;
using ResultPtr = std::unique_ptr<h2g_result, decltype(&h2g_result_free)>;

void print_keys()
{
    for (size_t i = 0; i < h2g_config_key_count(); ++i) {
        const std::string def = h2g_config_key_default(i);
        std::printf("%-26s %-10s %s\n", h2g_config_key_name(i), def.empty() ? "-" : def.c_str(), h2g_config_key_help(i));
    }
}

int run(const std::string& command, const Options& opt)
{
    ConfigPtr cfg(h2g_config_new(), h2g_config_free);
    if (!cfg) {
        std::fprintf(stderr, "error: %s\n", h2g_last_error());
        return 3;
    }
    // Failures below are remembered by the handle and reported by h2g_run,
    // which still writes the manifest.
    if (!opt.config.empty()) h2g_config_load(cfg.get(), opt.config.c_str());
    h2g_config_apply_env(cfg.get());
    for (const std::string& kv : opt.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
            return 1;
        }
        h2g_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    }
    const std::pair<const char*, const std::string*> flags[] = {
        {"mode", &opt.mode}, {"seed", &opt.seed}, {"out", &opt.out}, {"format", &opt.format}};
    for (const auto& [key, value] : flags) {
        if (!value->empty()) h2g_config_set(cfg.get(), key, value->c_str());
    }

    h2g_result* raw = nullptr;
    const h2g_status st = h2g_run(cfg.get(), command.c_str(), &raw);
    ResultPtr result(raw, h2g_result_free);
    if (!result) {
        std::fprintf(stderr, "error: %s\n", h2g_last_error());
        return st == H2G_ERR_ARGUMENT ? 3 : static_cast<int>(st);
    }
    for (size_t i = 0; i < h2g_result_warning_count(result.get()); ++i) {
        std::fprintf(stderr, "warning: %s\n", h2g_result_warning(result.get(), i));
    }
    const int code = h2g_result_exit_code(result.get());
    if (code != 0) {
        std::fprintf(stderr, "error: %s\n", h2g_result_message(result.get()));
    } else if (!opt.quiet) {
        const std::string dir = h2g_result_out_dir(result.get());
        for (size_t i = 0; i < h2g_result_output_count(result.get()); ++i) {
            std::printf("%s/%s\n", dir.c_str(), h2g_result_output(result.get(), i));
        }
        std::printf("%s/manifest.json\n", dir.c_str());
    }
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hydrogen refueling station siting and power-grid coupling"};
    app.set_version_flag("--version", std::string(h2g_version()));
    app.require_subcommand(0, 1);
    bool list_keys = false;
    app.add_flag("--list-keys", list_keys, "Print every config key with its default");

    Options opt;
    const char* help[][2] = {
        {"site", "Site refueling stations on the highway network"},
        {"power", "Solve the power system without stations (baseline)"},
        {"couple", "Couple stations to the power system (mode 1, 2 or both)"},
        {"synth", "Write a seeded synthetic instance"},
        {"report", "Baseline and both scenarios with a summary table and chart"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, text] : help) {
        CLI::App* sub = app.add_subcommand(name, text);
        sub->add_option("-c,--config", opt.config, "key = value config file")->check(CLI::ExistingFile);
        sub->add_option("--mode", opt.mode, "Scenario mode")->check(CLI::IsMember({"1", "2", "both"}));
        sub->add_option("--seed", opt.seed, "Random seed");
        sub->add_option("-o,--out", opt.out, "Output directory");
        sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "geojson"}));
        sub->add_option("--set", opt.sets, "Override a config key (key=value), repeatable");
        sub->add_flag("-q,--quiet", opt.quiet, "Do not list written files");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (list_keys) {
        print_keys();
        return 0;
    }
    for (CLI::App* sub : subs) {
        if (sub->parsed()) return run(sub->get_name(), opt);
    }
    std::fputs(app.help().c_str(), stdout);
    return 1;
}
