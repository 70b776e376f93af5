/* C interface to the beacon-referenced cyclic pursuit toolkit.
 *
 * All entry points are thread-compatible: distinct handles may be used from
 * distinct threads concurrently; a single handle must not be shared without
 * external synchronization. Error messages are written into caller-provided
 * buffers (always NUL-terminated when err_len > 0). */
#ifndef BEACON_PURSUIT_H
#define BEACON_PURSUIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BCP_API __declspec(dllexport)
#else
#define BCP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bcp_status {
  BCP_OK = 0,
  BCP_E_INVALID_ARGUMENT = 1,
  BCP_E_CONFIG = 2,
  BCP_E_DEGENERATE_GEOMETRY = 3,
  BCP_E_ASSUMPTION = 4,
  BCP_E_DEGENERATE_FAMILY = 5,
  BCP_E_NO_SUCH_EQUILIBRIUM = 6,
  BCP_E_INCONSISTENT_SHAPE = 7,
  BCP_E_ILL_CONDITIONED = 8,
  BCP_E_NUMERIC = 9,
  BCP_E_IO = 10,
} bcp_status;

typedef struct bcp_scenario bcp_scenario; /* opaque parsed config */
typedef struct bcp_report bcp_report;     /* opaque set of output documents */

BCP_API const char* bcp_version(void);
BCP_API const char* bcp_status_name(bcp_status s);

/* Parse a scenario config from JSON text / from a file. On success stores a
 * new handle in *out (free with bcp_scenario_free). */
BCP_API bcp_status bcp_scenario_parse(const char* json_text,
                                      bcp_scenario** out, char* err,
                                      size_t err_len);
BCP_API bcp_status bcp_scenario_load(const char* path, bcp_scenario** out,
                                     char* err, size_t err_len);
BCP_API void bcp_scenario_free(bcp_scenario* s);

/* Override the scenario seed (used by random/perturbed initial states). */
BCP_API void bcp_scenario_set_seed(bcp_scenario* s, uint64_t seed);

/* Number of agents in the scenario. */
BCP_API int bcp_scenario_agents(const bcp_scenario* s);

/* Run one verb. On success stores a report handle in *out (free with
 * bcp_report_free). */
BCP_API bcp_status bcp_run_equilibria(const bcp_scenario* s, bcp_report** out,
                                      char* err, size_t err_len);
BCP_API bcp_status bcp_run_stability(const bcp_scenario* s, bcp_report** out,
                                     char* err, size_t err_len);
BCP_API bcp_status bcp_run_simulation(const bcp_scenario* s,
                                      int emit_plot_data, bcp_report** out,
                                      char* err, size_t err_len);
BCP_API bcp_status bcp_run_sweep(const bcp_scenario* s, int max_threads,
                                 bcp_report** out, char* err, size_t err_len);

/* Documents held by a report: name (file name), NUL-terminated data, size. */
BCP_API size_t bcp_report_count(const bcp_report* r);
BCP_API const char* bcp_report_name(const bcp_report* r, size_t idx);
BCP_API const char* bcp_report_data(const bcp_report* r, size_t idx);
BCP_API size_t bcp_report_size(const bcp_report* r, size_t idx);
BCP_API void bcp_report_free(bcp_report* r);

#ifdef __cplusplus
}
#endif

#endif /* BEACON_PURSUIT_H */
