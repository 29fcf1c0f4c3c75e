#ifndef OPFACT_H
#define OPFACT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Elementary exponential `exp(c·G)`.
enum OpfactExponentialKind
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  // `G = x²`
  OPFACT_EXPONENTIAL_KIND_MULTIPLY_X2 = 0,
  // `G = x`
  OPFACT_EXPONENTIAL_KIND_MULTIPLY_X1 = 1,
  // `G = d²/dx²`
  OPFACT_EXPONENTIAL_KIND_DIFFUSE = 2,
  // `G = d/dx`
  OPFACT_EXPONENTIAL_KIND_SHIFT = 3,
  // `G = x·d/dx + 1/2`
  OPFACT_EXPONENTIAL_KIND_DILATE = 4,
};
#ifndef __cplusplus
typedef int32_t OpfactExponentialKind;
#endif // __cplusplus

enum OpfactOrdering
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  OPFACT_ORDERING_BAB = 0,
  OPFACT_ORDERING_ABA = 1,
  OPFACT_ORDERING_CAB = 2,
};
#ifndef __cplusplus
typedef int32_t OpfactOrdering;
#endif // __cplusplus

enum OpfactStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  OPFACT_STATUS_OK = 0,
  OPFACT_STATUS_NULL_POINTER = 1,
  OPFACT_STATUS_INVALID_ARGUMENT = 2,
  OPFACT_STATUS_INVALID_UTF8 = 3,
  OPFACT_STATUS_PARSE = 4,
  OPFACT_STATUS_ALGEBRA = 5,
  OPFACT_STATUS_SOLVER = 6,
  OPFACT_STATUS_POLE_GUARD = 7,
  OPFACT_STATUS_GAUSSIAN = 8,
  OPFACT_STATUS_GRID = 9,
  OPFACT_STATUS_BUFFER_TOO_SMALL = 10,
  OPFACT_STATUS_PANIC = 11,
};
#ifndef __cplusplus
typedef int32_t OpfactStatus;
#endif // __cplusplus

// A Gaussian wave packet.
typedef struct OpfactGaussian OpfactGaussian;

// A commutation table.
typedef struct OpfactTable OpfactTable;

// Exact rational parameters as strings (`"p/q"`, `"1/2+3/4 i"`); NULL means 1.
typedef struct OpfactCaseParams {
  const char *delta;
  const char *k;
  const char *gamma;
  const char *kappa;
  const char *m;
  const char *omega;
  const char *hbar;
  const char *force;
} OpfactCaseParams;

typedef struct OpfactVerifyResult {
  bool equal;
  // Lowest order with a differing coefficient, or −1.
  int32_t mismatch_order;
} OpfactVerifyResult;

typedef struct OpfactComplex {
  double re;
  double im;
} OpfactComplex;

// `ψ(x) = exp(a2·x² + a1·x + a0)`.
typedef struct OpfactGaussianCoefficients {
  struct OpfactComplex a2;
  struct OpfactComplex a1;
  struct OpfactComplex a0;
} OpfactGaussianCoefficients;

typedef struct OpfactPhysicalParams {
  double m;
  double omega;
  double force;
  double hbar;
  double t;
  double sigma;
} OpfactPhysicalParams;

typedef struct OpfactParadoxReport {
  double support_bound;
  double max_support_taylor;
  double mass_outside_support_taylor;
  double mass_outside_a_taylor;
  double norm_taylor;
  double mass_outside_a_splitstep;
  double norm_splitstep;
  bool splitstep_boundary_warning;
} OpfactParadoxReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next `opfact_*` call on the same thread.
const char *opfact_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *opfact_version(void);

// Frees a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from an `opfact_*` function that documents ownership transfer.
void opfact_string_free(char *s);

// Builds one of `bch`, `case1`, `case2`, `heisenberg_force`,
// `sl2_realization`. `param` is a rational such as `"3/2"` and is required
// by the first three (ignored otherwise; may be NULL).
//
// # Safety
// `name` must be a NUL-terminated string, `param` NULL or NUL-terminated,
// `out` a valid pointer.
OpfactStatus opfact_table_builtin(const char *name,
                                  const char *param,
                                  struct OpfactTable **out_table);

// Parses a table from its JSON document.
//
// # Safety
// `json` must be NUL-terminated and `out_table` valid.
OpfactStatus opfact_table_from_json(const char *json, struct OpfactTable **out_table);

// Serializes a table to JSON. Free the result with `opfact_string_free`.
//
// # Safety
// `table` must be a live handle and `out_json` valid.
OpfactStatus opfact_table_to_json(const struct OpfactTable *table, char **out_json);

// # Safety
// `table` must be a live handle and `out_n` valid.
OpfactStatus opfact_table_n_generators(const struct OpfactTable *table, size_t *out_n);

// Writes whether the Jacobi identity holds for every generator triple.
//
// # Safety
// `table` must be a live handle and `out_ok` valid.
OpfactStatus opfact_table_verify_jacobi(const struct OpfactTable *table, bool *out_ok);

// # Safety
// `table` must be NULL or a handle not yet freed.
void opfact_table_free(struct OpfactTable *table);

// Checks a named factorization identity exactly to `order` (at most 12).
// `params` may be NULL (all parameters 1).
//
// # Safety
// `case_name` must be NUL-terminated, `params` NULL or valid, `out_result` valid.
OpfactStatus opfact_verify_case(const char *case_name,
                                const struct OpfactCaseParams *params,
                                uint32_t order,
                                struct OpfactVerifyResult *out_result);

// Integrates `case` (`bch`, `case1`, `case2-bab`, `case2-aba`,
// `appendix-cab`) to `xi_end` with RK4 and writes the largest deviation from
// the closed form.
//
// # Safety
// `case_name` must be NUL-terminated and `out_max_error` valid.
OpfactStatus opfact_solver_compare(const char *case_name,
                                   double delta,
                                   double k,
                                   double gamma,
                                   double xi_end,
                                   double step,
                                   double *out_max_error);

// Closed-form coefficient values at `xi`. Writes the component count to
// `out_len`; fails with `BufferTooSmall` if `capacity` is insufficient.
//
// # Safety
// `case_name` NUL-terminated; `out_values` valid for `capacity` doubles; `out_len` valid.
OpfactStatus opfact_solver_closed_form(const char *case_name,
                                       double delta,
                                       double k,
                                       double gamma,
                                       double xi,
                                       double *out_values,
                                       size_t capacity,
                                       size_t *out_len);

// Fails unless `Re a2 < 0`.
//
// # Safety
// `out_gaussian` must be valid.
OpfactStatus opfact_gaussian_new(struct OpfactGaussianCoefficients coeffs,
                                 struct OpfactGaussian **out_gaussian);

// Unit-norm packet of width `sigma` centred at `x0` with mean wavenumber `k0`.
//
// # Safety
// `out_gaussian` must be valid.
OpfactStatus opfact_gaussian_displaced(double sigma,
                                       double x0,
                                       double k0,
                                       struct OpfactGaussian **out_gaussian);

// # Safety
// `g` must be a live handle and `out_coeffs` valid.
OpfactStatus opfact_gaussian_coefficients(const struct OpfactGaussian *g,
                                          struct OpfactGaussianCoefficients *out_coeffs);

// Replaces `g` by `exp(c·G)g`. On failure `g` is left unchanged.
//
// # Safety
// `g` must be a live handle.
OpfactStatus opfact_gaussian_apply(struct OpfactGaussian *g,
                                   OpfactExponentialKind kind,
                                   struct OpfactComplex c);

// Harmonic-oscillator evolution of `g` to time `params.t` (any t) using the
// chosen factor ordering. `params.sigma` is not used.
//
// # Safety
// `g` must be a live handle and `params` valid.
OpfactStatus opfact_gaussian_evolve_harmonic(struct OpfactGaussian *g,
                                             const struct OpfactPhysicalParams *params,
                                             OpfactOrdering ordering);

// Constant-force evolution of `g` to time `params.t` (`force = 0` is free motion).
//
// # Safety
// `g` must be a live handle and `params` valid.
OpfactStatus opfact_gaussian_evolve_force(struct OpfactGaussian *g,
                                          const struct OpfactPhysicalParams *params);

// # Safety
// `g` must be a live handle and `out_value` valid.
OpfactStatus opfact_gaussian_evaluate(const struct OpfactGaussian *g,
                                      double x,
                                      struct OpfactComplex *out_value);

// `∫|ψ|² dx`.
//
// # Safety
// `g` must be a live handle and `out_norm` valid.
OpfactStatus opfact_gaussian_norm(const struct OpfactGaussian *g, double *out_norm);

// # Safety
// `g` must be NULL or a handle not yet freed.
void opfact_gaussian_free(struct OpfactGaussian *g);

// Propagates the compact bump of half-width `a` freely to `t` with an
// order-`order` Taylor series and with split-step on the grid
// `[x_min, x_max]` of `n` points (power of two).
//
// # Safety
// `out_report` must be valid.
OpfactStatus opfact_paradox(double a,
                            double t,
                            uint32_t order,
                            double m,
                            double hbar,
                            double x_min,
                            double x_max,
                            size_t n,
                            double dt,
                            struct OpfactParadoxReport *out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPFACT_H */
