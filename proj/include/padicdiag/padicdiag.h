#ifndef PADICDIAG_H
#define PADICDIAG_H

/* C interface to padicdiag. Handles are opaque; every call that can fail
 * returns a pd_status and leaves a message for pd_last_error() in the
 * calling thread. Strings returned through char** are owned by the caller
 * and released with pd_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PD_API __declspec(dllexport)
#elif defined(__GNUC__)
#define PD_API __attribute__((visibility("default")))
#else
#define PD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pd_status {
  PD_OK = 0,
  PD_ERR_INVALID_ARGUMENT = 1,
  PD_ERR_PRECISION = 2,
  PD_ERR_DIVISION_BY_ZERO = 3,
  PD_ERR_DOMAIN = 4,
  PD_ERR_IO = 5,
  PD_ERR_INTERNAL = 6,
  PD_ERR_NULL_ARGUMENT = 7
} pd_status;

typedef enum pd_format { PD_FORMAT_JSON = 0, PD_FORMAT_TEXT = 1 } pd_format;
typedef enum pd_verify_level { PD_VERIFY_QUICK = 0, PD_VERIFY_FULL = 1 } pd_verify_level;
typedef enum pd_check_status { PD_CHECK_PASS = 0, PD_CHECK_FAIL = 1, PD_CHECK_SKIPPED = 2 } pd_check_status;

typedef struct pd_scenario pd_scenario;
typedef struct pd_report pd_report;

PD_API const char* pd_version(void);
/* Message of the last failed call in this thread, "" if none. */
PD_API const char* pd_last_error(void);
PD_API const char* pd_status_name(pd_status s);
PD_API void pd_string_free(char* s);

/* Scenario configuration. Keys are "section.key", e.g. "field.p". */
PD_API pd_status pd_scenario_new(pd_scenario** out);
PD_API void pd_scenario_free(pd_scenario* s);
PD_API pd_status pd_scenario_load_file(pd_scenario* s, const char* path);
PD_API pd_status pd_scenario_load_string(pd_scenario* s, const char* text);
PD_API pd_status pd_scenario_set(pd_scenario* s, const char* key, const char* value);
PD_API pd_status pd_scenario_get(const pd_scenario* s, const char* key, char** out);
PD_API pd_status pd_scenario_apply_preset(pd_scenario* s, const char* name);
PD_API pd_status pd_scenario_validate(const pd_scenario* s);
/* Newline separated list of keys / presets. */
PD_API pd_status pd_scenario_keys(char** out);
PD_API pd_status pd_scenario_presets(char** out);

/* Runs the selected suites. Config errors fail the call; failed checks do not. */
PD_API pd_status pd_run_scenario(const pd_scenario* s, pd_report** out);
/* mutation: NULL or "none", "boundary-sign", "pi-identity". */
PD_API pd_status pd_verify(pd_verify_level level, uint64_t seed, const char* mutation, pd_report** out);

PD_API void pd_report_free(pd_report* r);
/* 1 if no check failed, 0 otherwise (also for NULL). */
PD_API int pd_report_passed(const pd_report* r);
PD_API size_t pd_report_check_count(const pd_report* r);
PD_API pd_status pd_report_count(const pd_report* r, pd_check_status status, size_t* out);
PD_API pd_status pd_report_check_name(const pd_report* r, size_t index, char** out);
PD_API pd_status pd_report_check_status(const pd_report* r, size_t index, pd_check_status* out);
PD_API pd_status pd_report_total_ms(const pd_report* r, double* out);
PD_API pd_status pd_report_to_string(const pd_report* r, pd_format format, int include_timing, char** out);
PD_API pd_status pd_report_write(const pd_report* r, pd_format format, int include_timing, const char* path);
PD_API pd_status pd_report_from_json(const char* text, pd_report** out);
/* 1 when both reports hold the same data. */
PD_API int pd_report_equal(const pd_report* a, const pd_report* b);

#ifdef __cplusplus
}
#endif

#endif
