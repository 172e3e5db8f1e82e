/* C interface of the h2grid shared library.
 *
 * Handles are opaque. Functions report failure through h2g_status; the text
 * of the most recent failure on the calling thread is available from
 * h2g_last_error(). Strings returned by the library stay valid until the
 * owning handle is modified or freed.
 */
#ifndef H2GRID_H
#define H2GRID_H

#include <stddef.h>

#if defined(_WIN32)
#define H2G_API __declspec(dllexport)
#else
#define H2G_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 0-3 coincide with the process exit codes of the command-line tool. */
typedef enum h2g_status {
    H2G_OK = 0,
    H2G_ERR_INPUT = 1,      /* malformed or inconsistent input, bad parameter */
    H2G_ERR_INFEASIBLE = 2, /* infeasible or unbounded optimization problem */
    H2G_ERR_INTERNAL = 3,
    H2G_ERR_ARGUMENT = 4    /* NULL handle or pointer passed to the API */
} h2g_status;

typedef struct h2g_config h2g_config;
typedef struct h2g_result h2g_result;

H2G_API const char* h2g_version(void);
H2G_API const char* h2g_last_error(void);

/* Documented configuration keys. */
H2G_API size_t h2g_config_key_count(void);
H2G_API const char* h2g_config_key_name(size_t index);
H2G_API const char* h2g_config_key_default(size_t index);
H2G_API const char* h2g_config_key_help(size_t index);

/* A new configuration holds the defaults. Failures in load/set/apply_env are
 * also remembered by the handle, so a later h2g_run still writes a manifest
 * describing the failure. */
H2G_API h2g_config* h2g_config_new(void);
H2G_API void h2g_config_free(h2g_config* cfg);
H2G_API h2g_status h2g_config_load(h2g_config* cfg, const char* path);
H2G_API h2g_status h2g_config_apply_env(h2g_config* cfg);
H2G_API h2g_status h2g_config_set(h2g_config* cfg, const char* key, const char* value);
/* NULL when the key is unset or unknown. */
H2G_API const char* h2g_config_get(h2g_config* cfg, const char* key);

/* Runs "site", "power", "couple", "synth" or "report". On return *result is
 * set whenever cfg, command and result are non-NULL, even on failure. */
H2G_API h2g_status h2g_run(h2g_config* cfg, const char* command, h2g_result** result);
H2G_API void h2g_result_free(h2g_result* result);
H2G_API int h2g_result_exit_code(const h2g_result* result);
H2G_API const char* h2g_result_message(const h2g_result* result);
H2G_API const char* h2g_result_out_dir(const h2g_result* result);
H2G_API size_t h2g_result_warning_count(const h2g_result* result);
H2G_API const char* h2g_result_warning(const h2g_result* result, size_t index);
H2G_API size_t h2g_result_output_count(const h2g_result* result);
H2G_API const char* h2g_result_output(const h2g_result* result, size_t index);

/* Equivalent annual cost of an investment including fixed O&M in % of capex. */
H2G_API h2g_status h2g_annuity(double capex, double discount_rate, double lifetime_years, double fom_pct, double* out);
/* Hydrogen price per unit at which fuel cost per km equals diesel. */
H2G_API h2g_status h2g_diesel_parity(double energy_at_wheel_kwh_per_100km, double eta_diesel, double eta_fcev,
                                     double diesel_kwh_per_l, double diesel_price_eur_per_l, double h2_kwh_per_unit,
                                     double* out);

#ifdef __cplusplus
}
#endif

#endif
