#ifndef FRESCO_H
#define FRESCO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FrescoStatus {
  FRESCO_STATUS_OK = 0,
  FRESCO_STATUS_NULL_ARGUMENT = 1,
  FRESCO_STATUS_INVALID_UTF8 = 2,
  // Malformed expression, case file or parameter value.
  FRESCO_STATUS_VALIDATION = 3,
  // The computation failed on valid input.
  FRESCO_STATUS_PIPELINE = 4,
  FRESCO_STATUS_PANIC = 5,
} FrescoStatus;

// A parsed case file.
typedef struct FrescoCase FrescoCase;

// The result of analyzing a case; may be partial.
typedef struct FrescoReport FrescoReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread. Valid until the next call
// on the same thread; never null.
const char *fresco_last_error(void);

// Library version, static storage.
const char *fresco_version(void);

// Parses a case file given as JSON text.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum FrescoStatus fresco_case_from_json(const char *json, struct FrescoCase **out);

// # Safety
// `case` must come from [`fresco_case_from_json`] or be null.
void fresco_case_free(struct FrescoCase *case_);

// Runs the pipeline. `truncation` 0 keeps the case value; `lambda` may be
// null. On a pipeline failure the status is `Pipeline` and `*out` still
// holds the partial report.
//
// # Safety
// `case` must be a live handle, `lambda` null or NUL-terminated, and
// `out` a valid pointer.
enum FrescoStatus fresco_case_analyze(const struct FrescoCase *case_,
                                      uint32_t truncation,
                                      const char *lambda,
                                      struct FrescoReport **out);

// The report as JSON with sorted keys. Borrowed from the handle.
//
// # Safety
// `report` must be a live handle.
const char *fresco_report_json(const struct FrescoReport *report);

// The report in text form. Borrowed from the handle.
//
// # Safety
// `report` must be a live handle.
const char *fresco_report_text(const struct FrescoReport *report);

// # Safety
// `report` must be a live handle.
bool fresco_report_is_complete(const struct FrescoReport *report);

// # Safety
// `report` must come from [`fresco_case_analyze`] or be null.
void fresco_report_free(struct FrescoReport *report);

// Bernstein polynomial of a homogeneous operator, e.g. `"(a-3b)(a-2b)(a-b)"`.
//
// # Safety
// `expr` must be NUL-terminated and `out` a valid pointer.
enum FrescoStatus fresco_bpoly(const char *expr, char **out);

// Applies an operator to a target such as `"s^1*Log^2"` in `Theta`.
//
// # Safety
// `expr` and `target` must be NUL-terminated and `out` a valid pointer.
enum FrescoStatus fresco_xi(const char *expr, const char *target, uint32_t truncation, char **out);

// # Safety
// `s` must come from this library or be null.
void fresco_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRESCO_H */
