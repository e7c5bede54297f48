#ifndef QCAT_H
#define QCAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `Ok` and `Negative` mirror the command-line exit codes 0 and
 * 1; the others are failures with a message in [`qcat_last_error`].
 */
typedef enum QcatStatus {
  QCAT_STATUS_OK = 0,
  QCAT_STATUS_NEGATIVE = 1,
  QCAT_STATUS_INPUT_ERROR = 2,
  QCAT_STATUS_NULL_POINTER = 3,
  QCAT_STATUS_UTF8 = 4,
  QCAT_STATUS_PANIC = 5,
} QcatStatus;

/**
 * A parsed document.
 */
typedef struct QcatDocument QcatDocument;

/**
 * The report of a command.
 */
typedef struct QcatReport QcatReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON document. Path references inside it are rejected.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QcatStatus qcat_document_parse(const char *json, bool allow_float, struct QcatDocument **out);

/**
 * Canonical JSON of a document, or null on a null handle.
 *
 * # Safety
 * `doc` must be null or a live handle from [`qcat_document_parse`].
 */
char *qcat_document_to_json(const struct QcatDocument *doc);

/**
 * Quantale tag of a document (`bool2`, `cost`, `unit` or `delta`). The
 * string is static and must not be freed.
 *
 * # Safety
 * `doc` must be null or a live handle.
 */
const char *qcat_document_quantale(const struct QcatDocument *doc);

/**
 * # Safety
 * `doc` must be null or a handle not yet freed.
 */
void qcat_document_free(struct QcatDocument *doc);

/**
 * Runs a command on parsed documents. `params` is a JSON object (or null)
 * with the command's parameters: `object`, `morphism`, `to`, `depth`,
 * `family`, `quantale`, and the flags `allow_float`, `inexact`.
 *
 * Returns `Ok` or `Negative` with a report in `*out`, or a failure code.
 *
 * # Safety
 * `command` must be a NUL-terminated string, `docs` must point to `len` live
 * handles (or be null when `len` is 0), `params` must be null or a
 * NUL-terminated string, and `out` a valid pointer.
 */
enum QcatStatus qcat_run(const char *command,
                         const struct QcatDocument *const *docs,
                         size_t len,
                         const char *params,
                         struct QcatReport **out);

/**
 * Like [`qcat_run`] with the documents given as a JSON array string.
 *
 * # Safety
 * `command` and `docs_json` must be NUL-terminated strings, `params` null
 * or NUL-terminated, and `out` a valid pointer.
 */
enum QcatStatus qcat_run_json(const char *command,
                              const char *docs_json,
                              const char *params,
                              struct QcatReport **out);

/**
 * 0 for a positive report, 1 for a negative one, -1 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
int32_t qcat_report_exit_code(const struct QcatReport *report);

/**
 * # Safety
 * `report` must be null or a live handle.
 */
char *qcat_report_to_json(const struct QcatReport *report);

/**
 * # Safety
 * `report` must be null or a live handle.
 */
char *qcat_report_to_text(const struct QcatReport *report);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void qcat_report_free(struct QcatReport *report);

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * call into the library on the same thread; do not free.
 */
const char *qcat_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void qcat_string_free(char *s);

/**
 * Library version; static, do not free.
 */
const char *qcat_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCAT_H */
