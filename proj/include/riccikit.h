/* riccikit — C interface to the semi-Riemannian verification engine.
 *
 * Usage pattern:
 *
 *   rk_config* cfg = rk_config_create();
 *   if (rk_config_load_file(cfg, "run.json") != RK_OK) { ... rk_last_error() ... }
 *   rk_config_set_seed(cfg, 7);
 *   rk_report* rep = NULL;
 *   rk_status st = rk_run(cfg, "curvature", &rep);
 *   if (st == RK_OK) { puts(rk_report_json(rep)); }
 *   rk_report_destroy(rep);
 *   rk_config_destroy(cfg);
 *
 * All functions are thread-safe as long as each rk_config / rk_report is
 * used from one thread at a time; rk_last_error() is thread-local.
 */
#ifndef RICCIKIT_H
#define RICCIKIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define RK_API __declspec(dllexport)
#else
#define RK_API __attribute__((visibility("default")))
#endif

typedef enum rk_status {
  RK_OK = 0,
  RK_ERR_INVALID_ARGUMENT = 1, /* null handle, bad index, bad parameter   */
  RK_ERR_PARSE = 2,            /* malformed JSON or expression text        */
  RK_ERR_CONFIG = 3,           /* configuration semantically unusable      */
  RK_ERR_DOMAIN = 4,           /* evaluation left a chart's domain         */
  RK_ERR_DEGENERATE_METRIC = 5,/* metric not invertible at a sample point  */
  RK_ERR_PRECONDITION = 6,     /* documented operation precondition failed */
  RK_ERR_IO = 7,               /* file could not be read or written        */
  RK_ERR_INTERNAL = 8          /* unexpected failure inside the library    */
} rk_status;

/* Opaque handles.  Create/destroy in pairs; never free() them directly. */
typedef struct rk_config rk_config;
typedef struct rk_report rk_report;

/* Library version string, e.g. "1.0.0".  Never NULL. */
RK_API const char* rk_version(void);

/* Stable name for a status code, e.g. "RK_ERR_CONFIG".  Never NULL. */
RK_API const char* rk_status_name(rk_status status);

/* Message for the most recent failure on this thread ("" if none).  The
 * pointer stays valid until the next failing call on the same thread. */
RK_API const char* rk_last_error(void);

/* -------------------------------------------------------------------- */
/* Configuration                                                        */

/* Fresh, empty configuration.  Returns NULL only on allocation failure.
 * A configuration becomes runnable once a JSON document is loaded or a
 * builtin metric is selected. */
RK_API rk_config* rk_config_create(void);

/* Load a JSON configuration document from a file / from memory.  Replaces
 * any previously loaded document; explicit setters below still apply on
 * top of it. */
RK_API rk_status rk_config_load_file(rk_config* cfg, const char* path);
RK_API rk_status rk_config_load_json(rk_config* cfg, const char* json_text);

/* Select a builtin metric by name (e.g. "cone3"), overriding the loaded
 * document's metric if any.  Field expressions from the document are kept
 * only when the coordinate names match the new chart. */
RK_API rk_status rk_config_set_metric(rk_config* cfg, const char* builtin_name);

/* Override the sampling seed / sample count / coupling constant used in
 * the energy-tensor checks. */
RK_API rk_status rk_config_set_seed(rk_config* cfg, uint64_t seed);
RK_API rk_status rk_config_set_samples(rk_config* cfg, int samples);
RK_API rk_status rk_config_set_coupling(rk_config* cfg, double four_pi_g);

RK_API void rk_config_destroy(rk_config* cfg);

/* -------------------------------------------------------------------- */
/* Running                                                              */

/* Run one command ("curvature", "conformal", "atp", "flow", "report-all")
 * against the configuration.  On RK_OK, *out_report owns the result and
 * must be released with rk_report_destroy.  On failure *out_report is set
 * to NULL and rk_last_error() describes the problem.  A report whose
 * checks failed numerically is still RK_OK — inspect rk_report_pass. */
RK_API rk_status rk_run(const rk_config* cfg, const char* command, rk_report** out_report);

/* Space-separated names of the commands accepted by rk_run. */
RK_API const char* rk_command_list(void);

/* -------------------------------------------------------------------- */
/* Report access                                                        */

/* 1 if every check passed, else 0. */
RK_API int rk_report_pass(const rk_report* rep);

/* Full report serialized as JSON (stable key order, trailing newline) /
 * as a human-readable table.  Pointers are owned by the report. */
RK_API const char* rk_report_json(const rk_report* rep);
RK_API const char* rk_report_table(const rk_report* rep);

/* Individual checks: count, then per-index accessors.  Out-of-range
 * indices yield NULL / NaN / 0. */
RK_API size_t rk_report_check_count(const rk_report* rep);
RK_API const char* rk_report_check_name(const rk_report* rep, size_t index);
RK_API double rk_report_check_residual(const rk_report* rep, size_t index);
RK_API double rk_report_check_tol(const rk_report* rep, size_t index);
RK_API int rk_report_check_pass(const rk_report* rep, size_t index);

RK_API void rk_report_destroy(rk_report* rep);

#ifdef __cplusplus
}
#endif

#endif /* RICCIKIT_H */
