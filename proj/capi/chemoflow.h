/* C interface to the chemoflow solver library.
 *
 * All entry points return a status code; 0 means success.  On failure a
 * thread-local message is available through chf_last_error().  Configurations
 * are held behind an opaque handle created from a JSON file or string and
 * released with chf_config_free().
 */
#ifndef CHEMOFLOW_H
#define CHEMOFLOW_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CHF_API __declspec(dllexport)
#else
#define CHF_API __attribute__((visibility("default")))
#endif

typedef enum chf_status {
  CHF_OK = 0,
  CHF_ERR_CHECK = 1,  /* a verification check failed        */
  CHF_ERR_CONFIG = 2, /* invalid configuration              */
  CHF_ERR_SOLVER = 3  /* solver failure                     */
} chf_status;

typedef struct chf_config chf_config;

/* Parse a JSON config file; on success *out owns a new handle. */
CHF_API chf_status chf_config_load(const char* path, chf_config** out);
/* Parse a JSON config from a string. */
CHF_API chf_status chf_config_parse(const char* json_text, chf_config** out);
CHF_API void chf_config_free(chf_config* cfg);

/* Override the output directory stored in the config. */
CHF_API chf_status chf_config_set_output_dir(chf_config* cfg, const char* dir);
/* Directory the config will write into (valid until the next setter call). */
CHF_API const char* chf_config_output_dir(const chf_config* cfg);

/* Run the time stepper; writes trajectory.csv, final_state.csv, report.json. */
CHF_API chf_status chf_simulate(const chf_config* cfg);

/* Solve the stationary system; writes stationary.csv, stationary_report.json. */
CHF_API chf_status chf_stationary(const chf_config* cfg);

/* Run the kernel verification suite.  *json_out receives a malloc'd JSON
 * table (free with chf_string_free); returns CHF_ERR_CHECK if any row fails. */
CHF_API chf_status chf_kernels_verify(char** json_out);

/* One run per value of the swept parameter ("epsilon", "tau" or "n"), plus
 * sweep_summary.csv; returns CHF_ERR_CHECK if any individual run failed. */
CHF_API chf_status chf_sweep(const chf_config* cfg, const char* param, const double* values,
                             size_t n_values);

/* Message describing the most recent failure on this thread. */
CHF_API const char* chf_last_error(void);

CHF_API void chf_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CHEMOFLOW_H */
