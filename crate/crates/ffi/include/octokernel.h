#ifndef OCTOKERNEL_H
#define OCTOKERNEL_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum OkStatus {
  OK_STATUS_OK = 0,
  OK_STATUS_NULL_POINTER = 1,
  OK_STATUS_INVALID_ARGUMENT = 2,
  OK_STATUS_ZERO_DIVISOR = 3,
  OK_STATUS_SINGULARITY = 4,
  OK_STATUS_DOMAIN = 5,
  OK_STATUS_UNSUPPORTED_DIMENSION = 6,
  OK_STATUS_ILL_CONDITIONED = 7,
  OK_STATUS_IO = 8,
  OK_STATUS_SERIALIZATION = 9,
  OK_STATUS_PANIC = 10,
} OkStatus;

// Suite configuration handle.
typedef struct OkConfig OkConfig;

// Verification report handle.
typedef struct OkReport OkReport;

// Coefficients of `e0..e7`.
typedef struct OkOctonion {
  double c[8];
} OkOctonion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *ok_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *ok_version(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void ok_string_free(char *s);

struct OkOctonion ok_octonion_mul(struct OkOctonion x, struct OkOctonion y);

struct OkOctonion ok_octonion_conj(struct OkOctonion x);

double ok_octonion_norm(struct OkOctonion x);

// `(xy)z - x(yz)`.
struct OkOctonion ok_octonion_associator(struct OkOctonion x,
                                         struct OkOctonion y,
                                         struct OkOctonion z);

// # Safety
// `out` must be null or valid for writes.
enum OkStatus ok_octonion_inverse(struct OkOctonion x, struct OkOctonion *out);

// Cauchy kernel `E(x)`.
//
// # Safety
// `out` must be null or valid for writes.
enum OkStatus ok_cauchy(struct OkOctonion x, struct OkOctonion *out);

// Cauchy kernel `E(x, a)`.
//
// # Safety
// `out` must be null or valid for writes.
enum OkStatus ok_cauchy_at(struct OkOctonion x, struct OkOctonion a, struct OkOctonion *out);

// Szego kernel `S(x, a)`, or its dilation `S^r` for `r < 1`.
//
// # Safety
// `out` must be null or valid for writes.
enum OkStatus ok_szego(struct OkOctonion x, struct OkOctonion a, double r, struct OkOctonion *out);

// Bergman kernel `B(x, a)`.
//
// # Safety
// `out` must be null or valid for writes.
enum OkStatus ok_bergman(struct OkOctonion x, struct OkOctonion a, struct OkOctonion *out);

// Unified kernel `K_m(x, a)` for `m` in {2, 8}.
//
// # Safety
// `out` must be null or valid for writes.
enum OkStatus ok_unified(struct OkOctonion x,
                         struct OkOctonion a,
                         uint32_t m,
                         struct OkOctonion *out);

// New configuration with default settings.
struct OkConfig *ok_config_new(void);

// # Safety
// `cfg` must be null or a handle from [`ok_config_new`], not yet freed.
void ok_config_free(struct OkConfig *cfg);

// # Safety
// `cfg` must be null or a live configuration handle.
enum OkStatus ok_config_set_seed(struct OkConfig *cfg, uint64_t seed);

// # Safety
// `cfg` must be null or a live configuration handle.
enum OkStatus ok_config_set_samples(struct OkConfig *cfg, uint64_t n);

// `strategy` is one of the `OkStrategy` values.
//
// # Safety
// `cfg` must be null or a live configuration handle.
enum OkStatus ok_config_set_strategy(struct OkConfig *cfg, uint32_t strategy);

// Finite-difference step and whether to apply Richardson extrapolation.
//
// # Safety
// `cfg` must be null or a live configuration handle.
enum OkStatus ok_config_set_step(struct OkConfig *cfg, double h, bool richardson);

// # Safety
// `cfg` must be null or a live configuration handle.
enum OkStatus ok_config_set_max_degree(struct OkConfig *cfg, uint32_t k);

// Replace the kernel base points with `points[0..n]`.
//
// # Safety
// `cfg` must be null or a live configuration handle; `points` must be null
// or valid for `n` reads.
enum OkStatus ok_config_set_points(struct OkConfig *cfg, const struct OkOctonion *points, size_t n);

// Run the suite named `suite` (`algebra`, `analyticity`, `szego`,
// `bergman`, `parseval`, `counterexample`, `unified` or `all`). On success
// `*out` receives a report handle; a report with failing checks is still a
// success.
//
// # Safety
// `cfg` must be a live configuration handle, `suite` a NUL-terminated
// string, and `out` valid for writes.
enum OkStatus ok_run_suite(const struct OkConfig *cfg, const char *suite, struct OkReport **out);

// # Safety
// `report` must be null or a handle from [`ok_run_suite`], not yet freed.
void ok_report_free(struct OkReport *report);

// 1 if every check passed, 0 if any failed, -1 for a null handle.
//
// # Safety
// `report` must be null or a live report handle.
int ok_report_passed(const struct OkReport *report);

// Number of check rows, 0 for a null handle.
//
// # Safety
// `report` must be null or a live report handle.
size_t ok_report_check_count(const struct OkReport *report);

// Number of failing check rows, 0 for a null handle.
//
// # Safety
// `report` must be null or a live report handle.
size_t ok_report_failure_count(const struct OkReport *report);

// Serialize the report; `*out` receives a string to release with
// [`ok_string_free`].
//
// # Safety
// `report` must be a live report handle and `out` valid for writes.
enum OkStatus ok_report_serialize(const struct OkReport *report, bool csv, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OCTOKERNEL_H */
