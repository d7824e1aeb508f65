#ifndef HOLDER_BOUNDS_H
#define HOLDER_BOUNDS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum HbStatus {
  HB_STATUS_OK = 0,
  HB_STATUS_NULL_POINTER = 1,
  HB_STATUS_DIMENSION = 2,
  HB_STATUS_DOMAIN = 3,
  HB_STATUS_USAGE = 4,
  HB_STATUS_EXCEPTIONAL_EXPONENT = 5,
  HB_STATUS_SIGN_CONDITION = 6,
  HB_STATUS_INVALID_INPUT = 7,
  HB_STATUS_TRANSFORM_PARSE = 8,
  HB_STATUS_INVARIANT = 9,
  HB_STATUS_PANIC = 10,
} HbStatus;

/**
 * Opaque instance: a discrete measure with two functions on its atoms.
 */
typedef struct HbInstance HbInstance;

typedef struct HbBoundReport {
  double mu_fg;
  double holder;
  double b_p;
  double b_q;
  double symmetrized;
  bool improves_holder;
  bool violates_holder_order;
} HbBoundReport;

typedef struct HbCsIdentityReport {
  double lhs;
  double rhs_main;
  double improvement;
  double residual;
  double eps_bound;
} HbCsIdentityReport;

typedef struct HbGapPoint {
  double t;
  double d1;
  double d2;
  double min_gap;
} HbGapPoint;

/**
 * `t`, `min_gap` and `holder` are meaningful only when `found` is true.
 */
typedef struct HbScanResult {
  bool found;
  double t;
  double min_gap;
  double holder;
  double max_min_gap;
  double t_at_max;
} HbScanResult;

typedef struct HbSearchSummary {
  double best_gap;
  uint64_t best_trial;
  uint64_t violations_found;
} HbSearchSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *hb_version(void);

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into this library on the same thread.
 */
const char *hb_last_error_message(void);

/**
 * Builds an instance from `len` weights and function values.
 *
 * # Safety
 * `weights`, `f` and `g` must each point to `len` readable doubles, and
 * `out` must be valid for writing one pointer.
 */
enum HbStatus hb_instance_new(const double *weights,
                              const double *f,
                              const double *g,
                              uintptr_t len,
                              struct HbInstance **out);

/**
 * Releases an instance. NULL is ignored.
 *
 * # Safety
 * `inst` must be NULL or a handle from [`hb_instance_new`] not yet freed.
 */
void hb_instance_free(struct HbInstance *inst);

/**
 * Number of atoms, or 0 for NULL.
 *
 * # Safety
 * `inst` must be NULL or a live handle.
 */
uintptr_t hb_instance_len(const struct HbInstance *inst);

/**
 * Hölder bound `μ(f^p)^{1/p} μ(g^q)^{1/q}`.
 *
 * # Safety
 * `inst` must be a live handle and `out` valid for writing one double.
 */
enum HbStatus hb_holder_rhs(const struct HbInstance *inst, double p, double *out);

/**
 * Max-min bound `B_p`.
 *
 * # Safety
 * `inst` must be a live handle and `out` valid for writing one double.
 */
enum HbStatus hb_maxmin_bound(const struct HbInstance *inst, double p, double *out);

/**
 * `B_p ∧ B_q`.
 *
 * # Safety
 * `inst` must be a live handle and `out` valid for writing one double.
 */
enum HbStatus hb_symmetrized_bound(const struct HbInstance *inst, double p, double *out);

/**
 * Bound induced by a product-preserving transform given in text form
 * (`scale:k`, `swap`, `maxmin`, `a>b>c`).
 *
 * # Safety
 * `inst` must be a live handle, `spec` a NUL-terminated string and `out`
 * valid for writing one double.
 */
enum HbStatus hb_transformed_bound(const struct HbInstance *inst,
                                   double p,
                                   const char *spec,
                                   double *out);

/**
 * # Safety
 * `inst` must be a live handle and `out` valid for writing.
 */
enum HbStatus hb_bound_report(const struct HbInstance *inst, double p, struct HbBoundReport *out);

/**
 * The `p = 2` improvement identity with `a = f²`, `b = g²`.
 *
 * # Safety
 * `inst` must be a live handle and `out` valid for writing.
 */
enum HbStatus hb_cs_identity(const struct HbInstance *inst, struct HbCsIdentityReport *out);

/**
 * Closed-form gap pair of the counterexample family at `t`.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum HbStatus hb_family_gap(double p, double m, double w, double t, struct HbGapPoint *out);

/**
 * Closed-form `d'(0)`.
 *
 * # Safety
 * `out` must be valid for writing one double.
 */
enum HbStatus hb_family_derivative(double p, double m, double w, double *out);

/**
 * Finite-difference `d'_j(0)` with step `h`, `j` in {1, 2}.
 *
 * # Safety
 * `out` must be valid for writing one double.
 */
enum HbStatus hb_family_fd_derivative(double p,
                                      double m,
                                      double w,
                                      double h,
                                      uint8_t j,
                                      double *out);

/**
 * Smallest log-grid `t` in `[1e-6, t_max]` where `B_p ∧ B_q` beats Hölder.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum HbStatus hb_family_scan(double p,
                             double m,
                             double w,
                             double t_max,
                             uintptr_t steps,
                             struct HbScanResult *out);

/**
 * Seeded random search over `trials` instances with values in `[low, high)`.
 * `threads = 0` selects one worker per core; the result does not depend on it.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum HbStatus hb_search(double p,
                        uintptr_t atoms,
                        uint64_t trials,
                        uint64_t seed,
                        double low,
                        double high,
                        uintptr_t threads,
                        struct HbSearchSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOLDER_BOUNDS_H */
