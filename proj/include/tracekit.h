/* tracekit: matrix-free stochastic trace estimation, seeded Monte Carlo
 * benchmarking and trace-distinguishing games behind a plain C interface.
 *
 * Every function returns a tk_status; on failure, tk_last_error() holds a
 * human-readable message (thread-local, valid until the next failing call on
 * the same thread). Handles are opaque and freed with their tk_*_free
 * function. All randomness is a pure function of the (seed, stream) pair
 * passed in, so identical inputs reproduce identical results.
 */
#ifndef TRACEKIT_H
#define TRACEKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TK_API __declspec(dllexport)
#else
#define TK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tk_status {
    TK_OK = 0,
    TK_ERR_INVALID_ARGUMENT = 1,
    TK_ERR_PARSE = 2,
    TK_ERR_RUNTIME = 3
} tk_status;

typedef struct tk_matrix tk_matrix;
typedef struct tk_estimator tk_estimator;

TK_API const char* tk_version(void);
TK_API const char* tk_last_error(void);

/* ---- matrices ----------------------------------------------------------
 * Spec strings accept builtin generators (identity:n, diag-spike:n,
 * diag-flat:n, offdiag:n, planted-p1:n:eps, planted-p2:n:eps,
 * rotated:<inner>:seed), inline JSON ('{...}') or @path to a JSON file.
 */
TK_API tk_status tk_matrix_create(const char* spec, uint64_t seed, tk_matrix** out);
TK_API void tk_matrix_free(tk_matrix* m);

TK_API tk_status tk_matrix_dim(const tk_matrix* m, size_t* out);
TK_API tk_status tk_matrix_trace(const tk_matrix* m, double* out);
TK_API tk_status tk_matrix_frobenius_norm(const tk_matrix* m, double* out);
TK_API tk_status tk_matrix_diagonal_sum_of_squares(const tk_matrix* m, double* out);
TK_API tk_status tk_matrix_quadratic_form(const tk_matrix* m, const double* x, size_t len,
                                          double* out);
/* Similarity transform by a Haar rotation generated from rotation_seed. */
TK_API tk_status tk_matrix_rotate_haar(const tk_matrix* m, uint64_t rotation_seed,
                                       tk_matrix** out);
/* JSON document that tk_matrix_create round-trips losslessly. */
TK_API tk_status tk_matrix_to_json(const tk_matrix* m, char** out_json);
TK_API void tk_string_free(char* s);

/* ---- estimators --------------------------------------------------------
 * Spec strings: rademacher | gaussian | unit | orthogonal |
 * configured:<file>. k is the query budget.
 */
TK_API tk_status tk_estimator_create(const char* spec, size_t k, tk_estimator** out);
TK_API tk_status tk_estimator_symmetrized(const tk_estimator* base, tk_estimator** out);
TK_API tk_status tk_estimator_rotated_haar(const tk_estimator* base, size_t n,
                                           uint64_t rotation_seed, tk_estimator** out);
TK_API void tk_estimator_free(tk_estimator* e);

TK_API tk_status tk_estimate(const tk_estimator* e, const tk_matrix* m, uint64_t seed,
                             uint64_t stream, double* out_value);

/* ---- Monte Carlo reports ------------------------------------------------
 * Fields that do not apply to a run are negative (success_rate, epsilon,
 * success_ci95). Variance is centered at the true trace.
 */
typedef struct tk_report {
    size_t n;
    size_t k;
    uint64_t trials;
    uint64_t seed;
    double mean;
    double variance;
    double stderr_mean;
    double stderr_variance;
    double success_rate;
    double epsilon;
    double success_ci95;
} tk_report;

TK_API tk_status tk_run_trials(const tk_estimator* e, const tk_matrix* m, uint64_t trials,
                               uint64_t seed, uint64_t stream, int workers, tk_report* out);
TK_API tk_status tk_eps_delta_success(const tk_estimator* e, const tk_matrix* m, double epsilon,
                                      uint64_t trials, uint64_t seed, uint64_t stream,
                                      int workers, tk_report* out);
/* kind: "gaussian" or "rademacher". */
TK_API tk_status tk_analytic_variance(const char* kind, const tk_matrix* m, size_t k,
                                      double* out);

/* ---- probability toolbox ------------------------------------------------ */
/* diag0/diag1 are diagonal covariances (variances), length len. */
TK_API tk_status tk_kl_zero_mean_gaussians(const double* diag0, const double* diag1, size_t len,
                                           double* out);
TK_API tk_status tk_pinsker_tv_upper(double kl, double* out);
/* Exact TV between N(0,sigma0^2)^k and N(0,sigma1^2)^k. */
TK_API tk_status tk_scale_family_tv(double sigma0, double sigma1, size_t k, double* out);

typedef struct tk_tail_check {
    double empirical_upper;
    double empirical_lower;
    double bound;
    double stderr_upper;
    double stderr_lower;
} tk_tail_check;

TK_API tk_status tk_chi_square_tail_check(size_t k, double t, uint64_t trials, uint64_t seed,
                                          tk_tail_check* out);

/* ---- distinguishing games ------------------------------------------------ */
typedef struct tk_game_report {
    int game;
    size_t n;
    size_t k;
    double epsilon;
    double delta; /* negative when not applicable */
    uint64_t trials;
    double success_rate;
    double stderr_success;
    double analytic_ceiling;
    uint64_t seed;
} tk_game_report;

TK_API tk_status tk_game_run(int game, double epsilon, size_t n, size_t k, uint64_t rounds,
                             uint64_t seed, int workers, tk_game_report* out);
TK_API tk_status tk_game6_analytic_success(double epsilon, size_t k, double* out);
/* Smallest k whose analytic success reaches 1 - delta. */
TK_API tk_status tk_k_star(double epsilon, double delta, size_t* out_k, double* out_success);

/* ---- sampler diagnostics ------------------------------------------------- */
typedef struct tk_haar_report {
    double max_offdiagonal; /* worst |<y_i, y_j>|, i != j */
    double max_unit_error;  /* worst | ||y_i|| - 1 | */
    double max_det_error;   /* worst | |det Q| - 1 | */
    double ks_statistic;    /* first coordinate of Q e1 vs uniform unit vector */
    double ks_critical;     /* 1% level */
} tk_haar_report;

TK_API tk_status tk_haar_check(size_t n, uint64_t draws, uint64_t seed, tk_haar_report* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TRACEKIT_H */
