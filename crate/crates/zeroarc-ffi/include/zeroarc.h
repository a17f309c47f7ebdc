/* C interface for the zeroarc recurrence zero-set solver.
 *
 * Generated by cbindgen from crates/zeroarc-ffi; regenerate by building
 * that crate (`cargo build -p zeroarc-ffi`).  Do not edit by hand. */

#ifndef ZEROARC_H
#define ZEROARC_H



#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result band for every fallible call.  The numeric values match the exit
// codes of the companion command-line tool where the concepts overlap.
typedef enum ZaStatus {
  // The call succeeded.
  ZA_STATUS_OK = 0,
  // The input (JSON, recurrence shape, or parameters) was rejected.
  ZA_STATUS_INPUT = 1,
  // An internal invariant was violated — a bug in the library, never a
  // property of the input.
  ZA_STATUS_INTERNAL = 3,
  // A required pointer argument was null.
  ZA_STATUS_NULL_ARGUMENT = 4,
  // A string argument was not valid UTF-8.
  ZA_STATUS_BAD_ENCODING = 5,
} ZaStatus;

// A parsed recurrence specification (opaque).
typedef struct ZaRecurrence ZaRecurrence;

// A finished zero-set analysis (opaque).
typedef struct ZaReport ZaReport;

// Analysis parameters, by value.  `za_options_default` fills in the same
// defaults the command-line tool uses; a zero `prime` means "choose the
// smallest admissible prime".
typedef struct ZaOptions {
  // Working prime, or 0 to search for the smallest admissible one.
  uint64_t prime;
  // Refinement iterations M; coefficients are certified mod p^(M+1).
  uint32_t precision;
  // Ceiling for automatic precision escalation on inconclusive classes.
  uint32_t precision_cap;
  // Exhaustive-evaluation horizon for locating zeros and anchoring
  // progressions.
  uint64_t horizon;
  // Give up if the period search exceeds this modulus.
  uint64_t period_cap;
  // Accept recurrences whose trailing coefficient is a unit only after
  // passing to an unramified extension (wider prime search).
  bool extension_mode;
} ZaOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; never free this pointer.
const char *za_version(void);

// Explanation of the most recent failure on this thread, or null if no
// call has failed yet.  Borrowed; valid until the next failing call.
const char *za_last_error_message(void);

// The defaults the command-line tool uses.
struct ZaOptions za_options_default(void);

// Parse a recurrence from its JSON description.  On success `*out` owns a
// handle that must be released with `za_recurrence_free`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum ZaStatus za_recurrence_parse_json(const char *json, struct ZaRecurrence **out);

// Check that a recurrence is in solved form with an invertible trailing
// coefficient (optionally after base extension), without analyzing it.
//
// # Safety
// `rec` must be a live handle from `za_recurrence_parse_json`.
enum ZaStatus za_recurrence_validate(const struct ZaRecurrence *rec, bool extension_mode);

// Release a recurrence handle.  Null is allowed.
//
// # Safety
// `rec` must be null or a live handle, and is dead afterwards.
void za_recurrence_free(struct ZaRecurrence *rec);

// Analyze a recurrence into a certified zero-set report.  `opts` may be
// null for defaults.  On success `*out` owns a handle that must be
// released with `za_report_free`.
//
// # Safety
// `rec` must be a live handle; `opts` null or valid for reads; `out`
// valid for writes.
enum ZaStatus za_analyze(const struct ZaRecurrence *rec,
                         const struct ZaOptions *opts,
                         struct ZaReport **out);

// Whether every residue class is certified exactly (`COMPLETE` or
// `ALL_ZERO`).  Null reports as false.
//
// # Safety
// `report` must be null or a live handle.
bool za_report_fully_certified(const struct ZaReport *report);

// The exit code the command-line tool would report for this analysis:
// 0 when fully certified, 2 when some class is only bounded or
// inconclusive.  Null reports as -1.
//
// # Safety
// `report` must be null or a live handle.
int32_t za_report_exit_code(const struct ZaReport *report);

// Whether `n` lies in the certified zero set.
//
// # Safety
// `report` must be a live handle; `out` valid for writes.
enum ZaStatus za_report_contains(const struct ZaReport *report, uint64_t n, bool *out);

// Serialize a report to pretty-printed JSON.  The returned string must be
// released with `za_string_free`.
//
// # Safety
// `report` must be a live handle; `out` valid for writes.
enum ZaStatus za_report_to_json(const struct ZaReport *report, char **out);

// Deserialize a report previously produced by `za_report_to_json` (or the
// command-line tool's `--json` output).  On success `*out` owns a handle.
//
// # Safety
// `json` must be a NUL-terminated string; `out` valid for writes.
enum ZaStatus za_report_from_json(const char *json, struct ZaReport **out);

// Check a report's membership claims against exact evaluation of the
// recurrence for all n <= upto.  Writes whether they agree everywhere.
//
// # Safety
// `rec` and `report` must be live handles; `agree` valid for writes.
enum ZaStatus za_verify(const struct ZaRecurrence *rec,
                        const struct ZaReport *report,
                        uint64_t upto,
                        bool *agree);

// Release a report handle.  Null is allowed.
//
// # Safety
// `report` must be null or a live handle, and is dead afterwards.
void za_report_free(struct ZaReport *report);

// Release a string returned through an out-pointer.  Null is allowed.
//
// # Safety
// `s` must be null or exactly as returned by this library, and is dead
// afterwards.
void za_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ZEROARC_H */
