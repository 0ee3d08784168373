#ifndef KHINLAB_H
#define KHINLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible entry point.
 */
typedef enum {
  /**
   * Success; outputs were written.
   */
  KH_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  KH_STATUS_NULL_POINTER = 1,
  /**
   * Input outside the mathematical domain (bad exponent, shape, zero array).
   */
  KH_STATUS_DOMAIN = 2,
  /**
   * Enumeration would exceed the sign-bit budget.
   */
  KH_STATUS_BUDGET = 3,
  /**
   * Malformed input text or I/O failure.
   */
  KH_STATUS_PARSE = 4,
  /**
   * Internal invariant failure.
   */
  KH_STATUS_PANIC = 5,
} KhStatus;

/**
 * A multilinear form together with the exponent of its first slot.
 */
typedef struct KhForm KhForm;

/**
 * Exact Rademacher moments and witness reports for a coefficient array.
 */
typedef struct KhTensor KhTensor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Never null; empty
 * before the first failure. Valid until the next failing call here.
 */
const char *kh_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *kh_status_name(KhStatus status);

/**
 * Locate the branch point p0 of the constant family to `tolerance`
 * (clamped to at least 1e-14). Either output may be null.
 */
KhStatus kh_p0(double tolerance, double *out_p0, double *out_residual);

/**
 * Sharp Khintchine constant A_p. `out_branch` (nullable) receives
 * 0 = flat, 1 = gaussian, 2 = dyadic.
 */
KhStatus kh_haagerup_constant(double p, double *out_value, int *out_branch);

/**
 * Conjugate exponent p/(p-1); `INFINITY` maps to 1 and back.
 */
KhStatus kh_conjugate_exponent(double p, double *out);

/**
 * Limit value of the normalized Rademacher moment for 0 < r < 2.
 */
KhStatus kh_gaussian_moment_limit(double r, double *out);

/**
 * Multiple Khintchine constant K_{m,r} = (A_r)^m.
 */
KhStatus kh_multiple_khintchine_constant(uint32_t m, double r, double *out);

/**
 * Mixed Littlewood constant (A_{p/(p-1)})^{M-1} for p >= 2 (or `INFINITY`).
 */
KhStatus kh_mixed_littlewood_constant(uint32_t m_linear, double p, double *out);

/**
 * Normalized r-th moment of a length-n uniform sum, in closed binomial form.
 */
KhStatus kh_binomial_moment(uint64_t n, double r, double *out);

/**
 * Build a coefficient tensor from `shape[0..order]` and row-major
 * `entries[0..len]`; `len` must equal the product of the dims.
 */
KhStatus kh_tensor_new(const size_t *shape,
                       size_t order,
                       const double *entries,
                       size_t len,
                       KhTensor **out);

/**
 * Parse a tensor from JSON text `{"shape":[...],"entries":[...]}`.
 */
KhStatus kh_tensor_parse(const char *json, KhTensor **out);

/**
 * Release a tensor handle. Accepts null.
 */
void kh_tensor_free(KhTensor *tensor);

/**
 * Number of axes of the tensor.
 */
KhStatus kh_tensor_order(const KhTensor *tensor, size_t *out);

/**
 * Euclidean norm of the tensor entries.
 */
KhStatus kh_tensor_l2(const KhTensor *tensor, double *out);

/**
 * Exact Rademacher r-th moment by full sign enumeration subject to
 * `bit_budget` (1..=62); `threads` 0 picks the parallelism automatically.
 * `out_configurations` (nullable) receives the number of sign patterns.
 */
KhStatus kh_exact_moment(const KhTensor *tensor,
                         double r,
                         uint32_t bit_budget,
                         size_t threads,
                         double *out_value,
                         uint64_t *out_configurations);

/**
 * Order-m block-ones witness array of side n (n >= 2).
 */
KhStatus kh_block_ones_witness(uint32_t m, size_t n, KhTensor **out);

/**
 * Order-m uniform witness array of side n (n >= 1), entries n^{-m/2}.
 */
KhStatus kh_uniform_witness(uint32_t m, size_t n, KhTensor **out);

/**
 * Wrap coefficients (copied) as a multilinear form whose first slot
 * carries exponent `p` (a real >= 1, or `INFINITY`).
 */
KhStatus kh_form_new(const KhTensor *coefficients, double p, KhForm **out);

/**
 * Release a form handle. Accepts null.
 */
void kh_form_free(KhForm *form);

/**
 * Exact norm of the form on the unit ball of l_p x l_inf x ... x l_inf.
 */
KhStatus kh_form_norm(const KhForm *form, uint32_t bit_budget, size_t threads, double *out);

/**
 * Outer-first mixed norm of the coefficients: l_{p/(p-1)} over the first
 * index of the l_2 norms of the rest.
 */
KhStatus kh_mixed_lhs_outer(const KhForm *form, double *out);

/**
 * Inner-first mixed norm: l_2 over the trailing indices of the
 * l_{p/(p-1)} norms of the first-index columns.
 */
KhStatus kh_mixed_lhs_inner(const KhForm *form, double *out);

/**
 * Check the mixed Littlewood inequality for the form; `inner_first`
 * selects the inner-first nesting. Output pointers are nullable except
 * `out_holds`.
 */
KhStatus kh_verify_mixed_littlewood(const KhForm *form,
                                    bool inner_first,
                                    uint32_t bit_budget,
                                    size_t threads,
                                    double *out_lhs,
                                    double *out_norm,
                                    double *out_constant,
                                    bool *out_holds);

/**
 * Build the extremal (m+1)-linear form of a witness array y for
 * 1 <= p <= 2; its norm equals the exact r-th moment of y at r = p.
 */
KhStatus kh_littlewood_construction(const KhTensor *y,
                                    double p,
                                    uint32_t bit_budget,
                                    size_t threads,
                                    KhForm **out);

/**
 * Equivalence-response check: lhs, norm, constant and verdict for the
 * construction built from y at exponent p in [1, 2].
 */
KhStatus kh_equivalence_report(const KhTensor *y,
                               double p,
                               uint32_t bit_budget,
                               size_t threads,
                               double *out_lhs,
                               double *out_norm,
                               double *out_constant,
                               bool *out_holds);

/**
 * Branch point of the constant family, at the library's cached precision.
 */
double kh_breakpoint(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KHINLAB_H */
