#include "h2grid/h2grid.h"

#include "h2grid/catalog.hpp"
#include "h2grid/config.hpp"
#include "h2grid/economics.hpp"
#include "h2grid/pipeline.hpp"

#include <optional>
#include <string>
#include <vector>

struct h2g_config {
    h2g::pipeline::RunConfig cfg;
    std::optional<h2g::Error> error;  // first failure while assembling cfg
    std::string scratch;
};

struct h2g_result {
    h2g::pipeline::RunReport report;
    std::string out_dir;
    std::vector<std::string> outputs;
};

namespace {

thread_local std::string last_error;

h2g_status status_for(int exit_code)
{
    switch (exit_code) {
    case 0: return H2G_OK;
    case 1: return H2G_ERR_INPUT;
    case 2: return H2G_ERR_INFEASIBLE;
    default: return H2G_ERR_INTERNAL;
    }
}

h2g_status argument_error(const char* what)
{
    last_error = std::string("null argument: ") + what;
    return H2G_ERR_ARGUMENT;
}

// Runs fn, converting exceptions into a status. Errors are kept on the handle
// when one is given.
template <class F>
h2g_status guarded(h2g_config* cfg, F&& fn)
{
    try {
        fn();
        return H2G_OK;
    } catch (const h2g::Error& e) {
        last_error = e.what();
        if (cfg && !cfg->error) cfg->error = e;
        return status_for(h2g::exit_code_for(e.code()));
    } catch (const std::exception& e) {
        last_error = e.what();
        if (cfg && !cfg->error) cfg->error = h2g::Error(h2g::ErrorCode::Internal, e.what());
        return H2G_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return H2G_ERR_INTERNAL;
    }
}

const h2g::pipeline::ConfigKey* key_at(size_t i)
{
    const auto& keys = h2g::pipeline::config_keys();
    return i < keys.size() ? &keys[i] : nullptr;
}

}  // namespace

extern "C" {

const char* h2g_version(void)
{
    static const std::string v(h2g::pipeline::version());
    return v.c_str();
}

const char* h2g_last_error(void) { return last_error.c_str(); }

size_t h2g_config_key_count(void) { return h2g::pipeline::config_keys().size(); }
const char* h2g_config_key_name(size_t i) { return key_at(i) ? key_at(i)->name.c_str() : nullptr; }
const char* h2g_config_key_default(size_t i) { return key_at(i) ? key_at(i)->default_value.c_str() : nullptr; }
const char* h2g_config_key_help(size_t i) { return key_at(i) ? key_at(i)->help.c_str() : nullptr; }

h2g_config* h2g_config_new(void)
{
    try {
        return new h2g_config{};
    } catch (const std::exception& e) {
        last_error = e.what();
        return nullptr;
    }
}

void h2g_config_free(h2g_config* cfg) { delete cfg; }

h2g_status h2g_config_load(h2g_config* cfg, const char* path)
{
    if (!cfg) return argument_error("cfg");
    if (!path) return argument_error("path");
    return guarded(cfg, [&] { cfg->cfg.load_file(path); });
}

h2g_status h2g_config_apply_env(h2g_config* cfg)
{
    if (!cfg) return argument_error("cfg");
    return guarded(cfg, [&] { cfg->cfg.apply_env(); });
}

h2g_status h2g_config_set(h2g_config* cfg, const char* key, const char* value)
{
    if (!cfg) return argument_error("cfg");
    if (!key) return argument_error("key");
    if (!value) return argument_error("value");
    return guarded(cfg, [&] { cfg->cfg.set(key, value); });
}

const char* h2g_config_get(h2g_config* cfg, const char* key)
{
    if (!cfg || !key || !cfg->cfg.has(key)) return nullptr;
    cfg->scratch = cfg->cfg.text(key);
    return cfg->scratch.c_str();
}

h2g_status h2g_run(h2g_config* cfg, const char* command, h2g_result** result)
{
    if (!cfg) return argument_error("cfg");
    if (!command) return argument_error("command");
    if (!result) return argument_error("result");
    *result = nullptr;
    int exit_code = 0;
    const h2g_status st = guarded(nullptr, [&] {
        auto* r = new h2g_result{};
        r->report = h2g::pipeline::run(command, cfg->cfg, cfg->error);
        r->out_dir = r->report.out_dir.string();
        for (const auto& p : r->report.outputs) r->outputs.push_back(p.generic_string());
        *result = r;
        exit_code = r->report.exit_code;
        if (exit_code != 0) last_error = r->report.message;
    });
    return st != H2G_OK ? st : status_for(exit_code);
}

void h2g_result_free(h2g_result* result) { delete result; }

int h2g_result_exit_code(const h2g_result* r) { return r ? r->report.exit_code : 3; }
const char* h2g_result_message(const h2g_result* r) { return r ? r->report.message.c_str() : ""; }
const char* h2g_result_out_dir(const h2g_result* r) { return r ? r->out_dir.c_str() : ""; }
size_t h2g_result_warning_count(const h2g_result* r) { return r ? r->report.warnings.size() : 0; }

const char* h2g_result_warning(const h2g_result* r, size_t i)
{
    return r && i < r->report.warnings.size() ? r->report.warnings[i].c_str() : nullptr;
}

size_t h2g_result_output_count(const h2g_result* r) { return r ? r->outputs.size() : 0; }

const char* h2g_result_output(const h2g_result* r, size_t i)
{
    return r && i < r->outputs.size() ? r->outputs[i].c_str() : nullptr;
}

h2g_status h2g_annuity(double capex, double discount_rate, double lifetime_years, double fom_pct, double* out)
{
    if (!out) return argument_error("out");
    return guarded(nullptr, [&] { *out = h2g::annuity(capex, discount_rate, lifetime_years, fom_pct); });
}

h2g_status h2g_diesel_parity(double energy_at_wheel_kwh_per_100km, double eta_diesel, double eta_fcev,
                             double diesel_kwh_per_l, double diesel_price_eur_per_l, double h2_kwh_per_unit, double* out)
{
    if (!out) return argument_error("out");
    return guarded(nullptr, [&] {
        *out = h2g::catalog::diesel_parity(energy_at_wheel_kwh_per_100km, eta_diesel, eta_fcev, diesel_kwh_per_l,
                                           diesel_price_eur_per_l, h2_kwh_per_unit);
    });
}

}  // extern "C"
