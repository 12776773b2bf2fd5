#ifndef MZV_HOPF_H
#define MZV_HOPF_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MzvMode {
  MZV_MODE_STUFFLE = 0,
  MZV_MODE_SHUFFLE = 1,
} MzvMode;

// Numeric objects accepted by [`mzv_eval`].
typedef enum MzvObject {
  MZV_OBJECT_MZV = 0,
  MZV_OBJECT_HURWITZ_TRUNC = 1,
  MZV_OBJECT_HURWITZ_REG = 2,
  MZV_OBJECT_MULTITANGENT_TRUNC = 3,
  MZV_OBJECT_MULTITANGENT_REG = 4,
  MZV_OBJECT_MES_TRUNC = 5,
  MZV_OBJECT_GHAT_TRUNC = 6,
  MZV_OBJECT_GSTAR = 7,
  MZV_OBJECT_ZETA_STAR = 8,
  MZV_OBJECT_MES_STAR = 9,
  MZV_OBJECT_FOURIER = 10,
} MzvObject;

typedef enum MzvStatus {
  MZV_STATUS_OK = 0,
  MZV_STATUS_NULL_POINTER = 1,
  MZV_STATUS_INVALID_UTF8 = 2,
  MZV_STATUS_PARSE = 3,
  MZV_STATUS_SUBSPACE = 4,
  MZV_STATUS_POLE = 5,
  MZV_STATUS_INVALID_ARGUMENT = 6,
  MZV_STATUS_NON_CONVERGENCE = 7,
  MZV_STATUS_TOLERANCE = 8,
  MZV_STATUS_INVARIANT = 9,
  MZV_STATUS_PANIC = 10,
} MzvStatus;

// Evaluation settings: `τ`, truncations, tolerance and limit policy.
typedef struct MzvContext MzvContext;

// A finite rational combination of index words.
typedef struct MzvPoly MzvPoly;

// A complex value with an absolute error estimate.
typedef struct MzvEstimate {
  double re;
  double im;
  double error;
} MzvEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or `NULL` if the last call
// succeeded. The pointer stays valid until the next call on this thread.
const char *mzv_last_error(void);

// # Safety
// `s` must be `NULL` or a string returned by this library, not yet freed.
void mzv_string_free(char *s);

// A context with default settings: `τ = i`, `N = 1000`, `M = 20`,
// tolerance `1e-8`, adaptive limit in `M`.
struct MzvContext *mzv_context_new(void);

// # Safety
// `ctx` must be `NULL` or a handle from [`mzv_context_new`], not yet freed.
void mzv_context_free(struct MzvContext *ctx);

// # Safety
// `ctx` must be a live context handle.
enum MzvStatus mzv_context_set_tau(struct MzvContext *ctx, double re, double im);

// Sets the inner truncation `N` and the outer truncation `M`.
//
// # Safety
// `ctx` must be a live context handle.
enum MzvStatus mzv_context_set_truncation(struct MzvContext *ctx, size_t n, size_t m);

// # Safety
// `ctx` must be a live context handle.
enum MzvStatus mzv_context_set_tolerance(struct MzvContext *ctx, double tolerance);

// Chooses the limit policy in `M`. With `adaptive`, `M` grows up to
// `m_budget` until the value is stable.
//
// # Safety
// `ctx` must be a live context handle.
enum MzvStatus mzv_context_set_policy(struct MzvContext *ctx, bool adaptive, size_t m_budget);

// Value substituted for `T` in regularized multiple zeta values.
//
// # Safety
// `ctx` must be a live context handle.
enum MzvStatus mzv_context_set_t_value(struct MzvContext *ctx, double re, double im);

// Parses a word such as `"3,2"` or `"z3z2"` into a one-term polynomial.
//
// # Safety
// `word` must be a NUL-terminated string and `out` a writable pointer.
enum MzvStatus mzv_poly_from_word(const char *word, struct MzvPoly **out);

// # Safety
// `p` must be `NULL` or a polynomial handle, not yet freed.
void mzv_poly_free(struct MzvPoly *p);

// `a + b`.
//
// # Safety
// `a` and `b` must be live polynomial handles and `out` a writable pointer.
enum MzvStatus mzv_poly_add(const struct MzvPoly *a, const struct MzvPoly *b, struct MzvPoly **out);

// Stuffle or shuffle product of two polynomials.
//
// # Safety
// `a` and `b` must be live polynomial handles and `out` a writable pointer.
enum MzvStatus mzv_poly_product(const struct MzvPoly *a,
                                const struct MzvPoly *b,
                                enum MzvMode m,
                                struct MzvPoly **out);

// Antipode of the stuffle Hopf algebra.
//
// # Safety
// `p` must be a live polynomial handle and `out` a writable pointer.
enum MzvStatus mzv_poly_antipode(const struct MzvPoly *p, struct MzvPoly **out);

// Text form, e.g. `"z2z3 + z3z2 + z5"`.
//
// # Safety
// `p` must be a live polynomial handle and `out` a writable pointer.
enum MzvStatus mzv_poly_to_string(const struct MzvPoly *p, char **out);

// JSON list of `{"word": [...], "coeff": "p/q"}` terms.
//
// # Safety
// `p` must be a live polynomial handle and `out` a writable pointer.
enum MzvStatus mzv_poly_to_json(const struct MzvPoly *p, char **out);

// Regularization of `p` as a polynomial in `T` with coefficients in `H^0`,
// as JSON.
//
// # Safety
// `p` must be a live polynomial handle and `out` a writable pointer.
enum MzvStatus mzv_reg_json(const struct MzvPoly *p, enum MzvMode m, char **out);

// Fourier expansion of `G(word)` up to `q^order`, as JSON.
//
// # Safety
// `ctx` must be a live context handle, `word` a NUL-terminated string and
// `out` a writable pointer.
enum MzvStatus mzv_fourier_json(const struct MzvContext *ctx,
                                const char *word,
                                size_t order,
                                char **out);

// Numeric value of `object` at `word`. `x` is the argument of Hurwitz and
// multitangent objects; `order` is the q-order for [`MzvObject::Fourier`].
// Other inputs come from `ctx`.
//
// # Safety
// `ctx` must be a live context handle, `word` a NUL-terminated string and
// `out` a writable pointer.
enum MzvStatus mzv_eval(const struct MzvContext *ctx,
                        enum MzvObject object_kind,
                        const char *word,
                        double x_re,
                        double x_im,
                        size_t order,
                        struct MzvEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MZV_HOPF_H */
