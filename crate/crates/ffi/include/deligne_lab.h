#ifndef DELIGNE_LAB_H
#define DELIGNE_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. The first four match the `dlab` exit codes.
typedef enum DlStatus {
  DL_STATUS_OK = 0,
  DL_STATUS_INVALID_INPUT = 2,
  DL_STATUS_NUMERICAL = 3,
  DL_STATUS_THRESHOLD_EXCEEDED = 4,
  DL_STATUS_NULL_POINTER = 10,
  DL_STATUS_UTF8 = 11,
  DL_STATUS_PANIC = 12,
} DlStatus;

// A hermitian line bundle `O(d)` with its metric.
typedef struct DlBundle DlBundle;

// A family of plane curves over a rectangle of the `s`-plane.
typedef struct DlFamily DlFamily;

// Quadrature settings.
typedef struct DlQuadConfig DlQuadConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until
// the next call into the library from the same thread.
const char *dl_last_error(void);

// Library version as a static string.
const char *dl_version(void);

// Frees a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void dl_string_free(char *s);

// The Legendre family `y²z = x(x - z)(x - s z)`.
struct DlFamily *dl_family_legendre(void);

// Parses a family from JSON.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum DlStatus dl_family_from_json(const char *json, struct DlFamily **out_family);

// # Safety
// `f` must come from this library and not have been freed.
void dl_family_free(struct DlFamily *f);

// `O(degree)` with the Fubini–Study metric.
struct DlBundle *dl_bundle_fubini_study(uint32_t degree);

// Parses a bundle (`{"degree": d, "weight": {...}}`) from JSON.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum DlStatus dl_bundle_from_json(const char *json, struct DlBundle **out_bundle);

// # Safety
// `b` must come from this library and not have been freed.
void dl_bundle_free(struct DlBundle *b);

// Default quadrature settings with the given tolerances.
struct DlQuadConfig *dl_quad_config_new(double rel_tol, double abs_tol);

// # Safety
// `c` must come from this library and not have been freed.
void dl_quad_config_free(struct DlQuadConfig *c);

// `∫_{X_s} c_1(bundle)`, which equals `deg(X_s) · deg(bundle)`.
//
// # Safety
// Handles must be live; output pointers writable.
enum DlStatus dl_fiber_mass(const struct DlFamily *family,
                            const struct DlBundle *bundle,
                            const struct DlQuadConfig *config,
                            double s_re,
                            double s_im,
                            double *out_value,
                            double *out_error);

// `log ‖⟨l0, l1⟩‖(s)` for a pairing given as JSON (`family`, `bundle0`,
// `bundle1`, `section0`, `section1`).
//
// # Safety
// `input_json` must be a NUL-terminated string; handles live; output
// pointers writable.
enum DlStatus dl_pairing_log_norm(const char *input_json,
                                  const struct DlQuadConfig *config,
                                  double s_re,
                                  double s_im,
                                  double *out_log_norm,
                                  double *out_error);

// Runs a full task config (the `dlab --config` format) and returns the
// result document as JSON in `*out_json`. Nothing is written to disk;
// family files are resolved against the working directory. Returns
// [`DlStatus::ThresholdExceeded`] (with the document set) when an
// identity defect exceeds its threshold.
//
// # Safety
// `config_json` must be a NUL-terminated string; `out_json` writable.
// Free the result with [`dl_string_free`].
enum DlStatus dl_run_task_json(const char *config_json, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DELIGNE_LAB_H */
