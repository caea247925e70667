#ifndef WFX_H
#define WFX_H

/* Generated by cbindgen from the wfx-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function.
typedef enum WfxStatus {
  // Success.
  WFX_OK = 0,
  // A required pointer argument was null.
  WFX_NULL_ARGUMENT = 1,
  // A parameter was out of range or otherwise rejected.
  WFX_INVALID_ARGUMENT = 2,
  // Two objects live on different grids.
  WFX_SPACE_MISMATCH = 3,
  // A computation produced or received a non-finite value, or an
  // iterative bracket failed to close.
  WFX_NUMERIC = 4,
  // The requested combination is outside the implemented range.
  WFX_UNSUPPORTED = 5,
  // Serialization or I/O failure.
  WFX_IO = 6,
} WfxStatus;

// Basis family selector for `wfx_basis_new`.
typedef enum WfxBasisKind {
  // Dyadic cubes.
  WFX_BASIS_DYADIC = 0,
  // All 1D cell intervals.
  WFX_BASIS_INTERVALS = 1,
  // All square boxes.
  WFX_BASIS_CUBES = 2,
  // All axis-parallel boxes.
  WFX_BASIS_RECTANGLES = 3,
} WfxBasisKind;

// Opaque handle to an enumerated Muckenhoupt basis.
typedef struct WfxBasis WfxBasis;

// Opaque handle to a per-cell real function.
typedef struct WfxFunction WfxFunction;

// Opaque handle to a finite measure space.
typedef struct WfxSpace WfxSpace;

// Opaque handle to a strictly positive weight.
typedef struct WfxWeight WfxWeight;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *wfx_version(void);

// Message for the most recent failure on this thread, or null if the last
// call succeeded. The pointer stays valid until the next failing call on
// the same thread.
const char *wfx_last_error_message(void);

// Create a 1D space of `n` cells of width `h` with Lebesgue masses.
// `n` must be a power of two.
//
// # Safety
// `out` must be a valid pointer; the result must be released with
// `wfx_space_free`.
enum WfxStatus wfx_space_line(size_t n, double h, struct WfxSpace **out);

// Create a 1D space with explicit per-cell masses (`masses` has length `n`).
//
// # Safety
// `masses` must point to `n` readable doubles; `out` must be valid.
enum WfxStatus wfx_space_line_with_masses(size_t n,
                                          double h,
                                          const double *masses,
                                          struct WfxSpace **out);

// Create the 1D measure of order `m` on `n` cells (mass profile x^m).
//
// # Safety
// `out` must be a valid pointer.
enum WfxStatus wfx_space_order_m(size_t n, double m, struct WfxSpace **out);

// Number of cells.
//
// # Safety
// `space` must be a live handle; `out` must be valid.
enum WfxStatus wfx_space_len(const struct WfxSpace *space, size_t *out);

// Total measure of the space.
//
// # Safety
// `space` must be a live handle; `out` must be valid.
enum WfxStatus wfx_space_total_mass(const struct WfxSpace *space, double *out);

// Release a space handle. Null is a no-op.
//
// # Safety
// `space` must be null or a pointer from a `wfx_space_*` constructor that
// has not been freed yet.
void wfx_space_free(struct WfxSpace *space);

// Create a function on `space` from `len` values (one per cell).
//
// # Safety
// `values` must point to `len` readable doubles; `out` must be valid.
enum WfxStatus wfx_function_new(const struct WfxSpace *space,
                                const double *values,
                                size_t len,
                                struct WfxFunction **out);

// Number of cells the function is defined on.
//
// # Safety
// `f` must be a live handle; `out` must be valid.
enum WfxStatus wfx_function_len(const struct WfxFunction *f, size_t *out);

// Copy the function's values into `buf` (capacity `cap` doubles); fails if
// `cap` is too small.
//
// # Safety
// `buf` must point to `cap` writable doubles.
enum WfxStatus wfx_function_copy_values(const struct WfxFunction *f, double *buf, size_t cap);

// Release a function handle. Null is a no-op.
//
// # Safety
// `f` must be null or an unfreed pointer from this library.
void wfx_function_free(struct WfxFunction *f);

// Create a weight (strictly positive function) on `space`.
//
// # Safety
// `values` must point to `len` readable doubles; `out` must be valid.
enum WfxStatus wfx_weight_new(const struct WfxSpace *space,
                              const double *values,
                              size_t len,
                              struct WfxWeight **out);

// Release a weight handle. Null is a no-op.
//
// # Safety
// `w` must be null or an unfreed pointer from this library.
void wfx_weight_free(struct WfxWeight *w);

// Enumerate a basis over `space`.
//
// # Safety
// `space` must be a live handle; `out` must be valid.
enum WfxStatus wfx_basis_new(const struct WfxSpace *space,
                             enum WfxBasisKind kind,
                             struct WfxBasis **out);

// Number of basis elements.
//
// # Safety
// `basis` must be a live handle; `out` must be valid.
enum WfxStatus wfx_basis_len(const struct WfxBasis *basis, size_t *out);

// Release a basis handle. Null is a no-op.
//
// # Safety
// `basis` must be null or an unfreed pointer from this library.
void wfx_basis_free(struct WfxBasis *basis);

// Basis maximal operator M f.
//
// # Safety
// All handles must be live; `out` must be valid.
enum WfxStatus wfx_maximal(const struct WfxFunction *f,
                           const struct WfxBasis *basis,
                           struct WfxFunction **out);

// Discrete Hilbert transform H f.
//
// # Safety
// `f` must be a live handle; `out` must be valid.
enum WfxStatus wfx_hilbert(const struct WfxFunction *f, struct WfxFunction **out);

// Truncated square function of order `m` with lower cutoff `t0` in (0,1).
//
// # Safety
// `f` must be a live handle; `out` must be valid.
enum WfxStatus wfx_square_function(const struct WfxFunction *f,
                                   double t0,
                                   double m,
                                   struct WfxFunction **out);

// Muckenhoupt constant [w]_{A_p}.
//
// # Safety
// All handles must be live; `out` must be valid.
enum WfxStatus wfx_ap_constant(const struct WfxWeight *w,
                               const struct WfxBasis *basis,
                               double p,
                               double *out);

// Muckenhoupt constant [w]_{A_1}.
//
// # Safety
// All handles must be live; `out` must be valid.
enum WfxStatus wfx_a1_constant(const struct WfxWeight *w,
                               const struct WfxBasis *basis,
                               double *out);

// A_infinity constant: the infimum of [w]_{A_p} over 1 < p <= p_max.
//
// # Safety
// All handles must be live; `out` must be valid.
enum WfxStatus wfx_ainf_constant(const struct WfxWeight *w,
                                 const struct WfxBasis *basis,
                                 double p_max,
                                 double *out);

// Reverse Holder constant [w]_{RH_s}, s > 1.
//
// # Safety
// All handles must be live; `out` must be valid.
enum WfxStatus wfx_rh_constant(const struct WfxWeight *w,
                               const struct WfxBasis *basis,
                               double s,
                               double *out);

// Off-diagonal constant [w]_{A_{p,q}}.
//
// # Safety
// All handles must be live; `out` must be valid.
enum WfxStatus wfx_apq_constant(const struct WfxWeight *w,
                                const struct WfxBasis *basis,
                                double p,
                                double q,
                                double *out);

// BMO norm of `f` (sup over basis elements of the mean oscillation).
//
// # Safety
// All handles must be live; `out` must be valid.
enum WfxStatus wfx_bmo_norm(const struct WfxFunction *f, const struct WfxBasis *basis, double *out);

// Damped Rubio de Francia series R h = sum_k M^k h / (2 n1)^k truncated at
// `k` terms, for a caller-supplied maximal-operator bound `n1 >= 1`.
// On success `*out` satisfies h <= *out pointwise and
// [*out]_{A_1} <= 2 n1 up to the reported tail. If `tail_rel` is non-null
// it receives the relative tail bound of the truncation.
//
// # Safety
// All handles must be live; `out` must be valid; `tail_rel` may be null.
enum WfxStatus wfx_rdf_majorant(const struct WfxFunction *h,
                                const struct WfxBasis *basis,
                                double n1,
                                size_t k,
                                struct WfxFunction **out,
                                double *tail_rel);

// Build an A_{p0} weight adapted to the pair (f, g) with X = L^p (unit
// weights), as in the norm-extrapolation construction. Returns the weight,
// its A_{p0} constant, and whether every certificate inequality passed
// (1 = yes).
//
// # Safety
// All handles must be live and on one grid; out-pointers may be null when
// the corresponding value is not wanted, except `out_w`.
enum WfxStatus wfx_build_ap_weight_lp(const struct WfxFunction *f,
                                      const struct WfxFunction *g,
                                      const struct WfxBasis *basis,
                                      double x_p,
                                      double p0,
                                      struct WfxWeight **out_w,
                                      double *out_ap,
                                      int32_t *out_passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WFX_H */
