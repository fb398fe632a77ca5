/* Schur-Weyl duality toolkit: C interface.
 *
 * All computational entry points exchange JSON strings. Returned strings are
 * heap-allocated; release them with swd_string_free. Every function returns a
 * status code; on failure, swd_last_error(ctx) describes the problem.
 *
 * Matrix JSON:  {"dim": n, "entries": [[[re, im], ...], ...]}  (row-major)
 * Algebra JSON: {"ambient_dim": d, "generators": [matrix, ...]}
 */

#ifndef SWD_H
#define SWD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct swd_ctx swd_ctx;

enum swd_status {
  SWD_OK = 0,
  SWD_ERR_PARSE = 1,      /* malformed JSON or schema violation */
  SWD_ERR_DIMENSION = 2,  /* inconsistent matrix dimensions */
  SWD_ERR_INVALID = 3,    /* precondition or validation failure */
  SWD_ERR_CAP = 4,        /* configured dimension cap exceeded */
  SWD_ERR_INTERNAL = 5,   /* numerical routine failed to converge */
  SWD_ERR_ARGUMENT = 6    /* bad argument (null pointer, unknown name) */
};

const char* swd_version(void);

swd_ctx* swd_ctx_new(void);
void swd_ctx_free(swd_ctx* ctx);

/* Tolerances must lie in (0, 1). Defaults: rank_eps 1e-9, match_eps 1e-8. */
int swd_ctx_set_tolerance(swd_ctx* ctx, double rank_eps, double match_eps);
int swd_ctx_set_seed(swd_ctx* ctx, uint64_t seed);

/* Last error message for this context; valid until the next call on it. */
const char* swd_last_error(const swd_ctx* ctx);

void swd_string_free(char* s);

/* Commutant of the algebra generated by the input. Output carries the
 * commutant dimension and an orthonormal generator list. */
int swd_commutant(swd_ctx* ctx, const char* algebra_json, char** out_json);

/* Bicommutant test on the unital span of the generators (no closure). */
int swd_gauge_check(swd_ctx* ctx, const char* algebra_json, char** out_json);

/* Wedderburn block data {(m_J, n_J)} plus the block-diagonalizing unitary. */
int swd_decompose(swd_ctx* ctx, const char* algebra_json, char** out_json);

/* Duality report for Comm{Q(G_A)} vs Alg{A^n, P(S_n)}; sign 0 runs the
 * unrestricted comparison, +1/-1 restrict to the (anti)symmetric subspace. */
int swd_duality(swd_ctx* ctx, const char* algebra_json, int copies, int sign, char** out_json);

/* Named counterexample: "nongauge" or "lambda2". */
int swd_counterexample(swd_ctx* ctx, const char* which, char** out_json);

/* L_+/L_- channel summary (coefficients, unitality, Choi minimum eigenvalue
 * when check_choi is nonzero). */
int swd_lpm(swd_ctx* ctx, const char* algebra_json, int copies, int sign, int check_choi,
            char** out_json);

/* Estimation front end. The request is either
 *   {"example": "qubit-decision"|"leftright"|"unambiguous"|"single-observable",
 *    "alpha0":..., "alpha1":..., "alpha":..., "copies":..., "theta_points":...,
 *    "r":...}
 * or
 *   {"problem": <problem JSON>, "strategy": {"povm": ...},
 *    "twirl_algebra": <algebra JSON, optional>,
 *    "localize": {"algebra": <algebra JSON>,
 *                 "distortion": {"kraus": [matrix...]} (optional)} (optional),
 *    "mutual_information_of": <label name, optional>}
 * Localization with a distortion or a problem channel reports the assumption
 * validator residuals alongside the conditionals.
 */
int swd_estimate(swd_ctx* ctx, const char* request_json, char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SWD_H */
