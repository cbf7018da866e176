#ifndef POISSONLAB_H
#define POISSONLAB_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PlStatus {
  PL_STATUS_OK = 0,
  PL_STATUS_NULL_POINTER = 1,
  PL_STATUS_INVALID_UTF8 = 2,
  PL_STATUS_CONFIG = 3,
  PL_STATUS_DIMENSION_MISMATCH = 4,
  PL_STATUS_NUMERICAL = 5,
  PL_STATUS_UNKNOWN = 6,
  PL_STATUS_BUFFER_TOO_SMALL = 7,
  PL_STATUS_INDEX_OUT_OF_RANGE = 8,
  PL_STATUS_PANIC = 9,
} PlStatus;

typedef struct PlAlgebra PlAlgebra;

typedef struct PlGroup PlGroup;

typedef struct PlPoisson PlPoisson;

typedef struct PlReport PlReport;

// One report record in plain data. `residual` is NaN when the check could
// not be evaluated.
typedef struct PlRecord {
  double residual;
  double tolerance;
  bool passed;
  size_t samples;
  uint64_t seed;
} PlRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, empty after a success.
//
// # Safety
// `buf` must point to `capacity` writable bytes or be null with `capacity` 0.
enum PlStatus pl_last_error_message(char *buf, size_t capacity, size_t *needed);

// Static NUL-terminated version string.
const char *pl_version(void);

// Catalog algebra: `so3`, `sl2`, `h3`, `abelian<n>`, `broken`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` writable.
enum PlStatus pl_algebra_by_name(const char *name, struct PlAlgebra **out);

// Algebra from `count` rows `[i, j, k, c]` (1-based) meaning `c^k_ij = c`,
// with `c^k_ji = −c` implied.
//
// # Safety
// `constants` must hold `4 * count` doubles; `name` NUL-terminated; `out` writable.
enum PlStatus pl_algebra_from_constants(const char *name,
                                        size_t dim,
                                        const double *constants,
                                        size_t count,
                                        struct PlAlgebra **out);

// # Safety
// `algebra` must be a live handle and `out` writable.
enum PlStatus pl_algebra_dim(const struct PlAlgebra *algebra, size_t *out);

// # Safety
// `algebra` must be a live handle and `out` writable.
enum PlStatus pl_algebra_jacobi_residual(const struct PlAlgebra *algebra, double *out);

// `[x, y]` written to `out`; all three arrays have the algebra dimension.
//
// # Safety
// `x`, `y` must hold `dim` doubles and `out` `capacity` writable doubles.
enum PlStatus pl_algebra_bracket(const struct PlAlgebra *algebra,
                                 const double *x,
                                 const double *y,
                                 size_t dim,
                                 double *out,
                                 size_t capacity);

// # Safety
// `algebra` must come from this library and not be used afterwards.
void pl_algebra_free(struct PlAlgebra *algebra);

// Catalog group: `r<n>`, `h3`, `so3`, `sl2`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` writable.
enum PlStatus pl_group_by_name(const char *name, struct PlGroup **out);

// # Safety
// `group` must be a live handle and `out` writable.
enum PlStatus pl_group_dim(const struct PlGroup *group, size_t *out);

// Side length of the defining matrices.
//
// # Safety
// `group` must be a live handle and `out` writable.
enum PlStatus pl_group_matrix_size(const struct PlGroup *group, size_t *out);

// `exp(Σ x_i E_i)` as a row-major `size × size` matrix.
//
// # Safety
// `x` must hold `dim` doubles and `out` `capacity` writable doubles.
enum PlStatus pl_group_exp(const struct PlGroup *group,
                           const double *x,
                           size_t dim,
                           double *out,
                           size_t capacity);

// # Safety
// `group` must come from this library and not be used afterwards.
void pl_group_free(struct PlGroup *group);

// Lie–Poisson structure on the dual of `algebra`.
//
// # Safety
// `algebra` must be a live handle and `out` writable.
enum PlStatus pl_poisson_lie(const struct PlAlgebra *algebra, struct PlPoisson **out);

// Canonical structure on `R^(2n)`.
//
// # Safety
// `out` must be writable.
enum PlStatus pl_poisson_symplectic(size_t n, struct PlPoisson **out);

// # Safety
// `pi` must be a live handle and `out` writable.
enum PlStatus pl_poisson_dim(const struct PlPoisson *pi, size_t *out);

// `π^{ij}(x)` as a row-major `dim × dim` matrix.
//
// # Safety
// `x` must hold `dim` doubles and `out` `capacity` writable doubles.
enum PlStatus pl_poisson_eval(const struct PlPoisson *pi,
                              const double *x,
                              size_t dim,
                              double *out,
                              size_t capacity);

// Jacobi residual over `count` points stored back to back.
//
// # Safety
// `points` must hold `count * dim` doubles and `out` be writable.
enum PlStatus pl_poisson_jacobi_residual(const struct PlPoisson *pi,
                                         const double *points,
                                         size_t count,
                                         double *out);

// # Safety
// `pi` must come from this library and not be used afterwards.
void pl_poisson_free(struct PlPoisson *pi);

// Runs the suites of a TOML configuration. `seed` may be null to keep the
// configured seed. A configuration error returns `PL_STATUS_CONFIG`; failed
// checks still produce a report.
//
// # Safety
// `config` must be NUL-terminated, `seed` null or readable, `out` writable.
enum PlStatus pl_run(const char *config, const uint64_t *seed, struct PlReport **out);

// # Safety
// `report` must be a live handle and `out` writable.
enum PlStatus pl_report_len(const struct PlReport *report, size_t *out);

// Exit code the command line would return for this report, or -1 for a null handle.
//
// # Safety
// `report` must be null or a live handle.
int32_t pl_report_exit_code(const struct PlReport *report);

// # Safety
// `report` must be a live handle and `out` writable.
enum PlStatus pl_report_record(const struct PlReport *report, size_t index, struct PlRecord *out);

// `suite/check` name of a record.
//
// # Safety
// `buf` must point to `capacity` writable bytes; `needed` null or writable.
enum PlStatus pl_report_check_name(const struct PlReport *report,
                                   size_t index,
                                   char *buf,
                                   size_t capacity,
                                   size_t *needed);

// The report as JSON lines.
//
// # Safety
// `buf` must point to `capacity` writable bytes; `needed` null or writable.
enum PlStatus pl_report_jsonl(const struct PlReport *report,
                              char *buf,
                              size_t capacity,
                              size_t *needed);

// # Safety
// `report` must come from this library and not be used afterwards.
void pl_report_free(struct PlReport *report);

// Text of `poissonlab list`.
//
// # Safety
// `buf` must point to `capacity` writable bytes; `needed` null or writable.
enum PlStatus pl_catalog(char *buf, size_t capacity, size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POISSONLAB_H */
