#include "tracekit.h"

#include <cmath>
#include <cstring>
#include <string>

#include "core/estimator.hpp"
#include "core/games.hpp"
#include "core/implicit_matrix.hpp"
#include "core/sampler.hpp"
#include "core/spec_io.hpp"
#include "core/stats.hpp"
#include "core/trials.hpp"

struct tk_matrix {
    tracekit::ImplicitMatrix value;
    std::string spec;
};

struct tk_estimator {
    tracekit::LinearEstimator value;
};

namespace {

thread_local std::string g_last_error;

tk_status fail(tk_status code, const char* what) {
    g_last_error = what;
    return code;
}

// Parse failures surface as TK_ERR_PARSE, other invalid inputs as
// TK_ERR_INVALID_ARGUMENT; anything else is a runtime error.
template <typename Fn>
tk_status guarded(bool parsing, Fn&& fn) {
    try {
        fn();
        return TK_OK;
    } catch (const std::invalid_argument& e) {
        return fail(parsing ? TK_ERR_PARSE : TK_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(TK_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(TK_ERR_RUNTIME, "unknown error");
    }
}

tk_status require(bool ok, const char* what) {
    return ok ? TK_OK : fail(TK_ERR_INVALID_ARGUMENT, what);
}

void fill_report(const tracekit::ExperimentReport& rep, double ci95, tk_report* out) {
    out->n = rep.n;
    out->k = rep.k;
    out->trials = rep.trials;
    out->seed = rep.seed;
    out->mean = rep.empirical_mean;
    out->variance = rep.empirical_variance;
    out->stderr_mean = rep.stderr_mean;
    out->stderr_variance = rep.stderr_variance;
    out->success_rate = rep.success_rate.value_or(-1.0);
    out->epsilon = rep.epsilon.value_or(-1.0);
    out->success_ci95 = ci95;
}

} // namespace

extern "C" {

const char* tk_version(void) { return "tracekit 0.1.0"; }

const char* tk_last_error(void) { return g_last_error.c_str(); }

tk_status tk_matrix_create(const char* spec, uint64_t seed, tk_matrix** out) {
    if (tk_status s = require(spec && out, "tk_matrix_create: null argument"); s != TK_OK)
        return s;
    return guarded(true, [&] {
        *out = new tk_matrix{tracekit::matrix_from_spec(spec, seed), spec};
    });
}

void tk_matrix_free(tk_matrix* m) { delete m; }

tk_status tk_matrix_dim(const tk_matrix* m, size_t* out) {
    if (tk_status s = require(m && out, "tk_matrix_dim: null argument"); s != TK_OK)
        return s;
    *out = m->value.dim();
    return TK_OK;
}

tk_status tk_matrix_trace(const tk_matrix* m, double* out) {
    if (tk_status s = require(m && out, "tk_matrix_trace: null argument"); s != TK_OK)
        return s;
    return guarded(false, [&] { *out = m->value.trace(); });
}

tk_status tk_matrix_frobenius_norm(const tk_matrix* m, double* out) {
    if (tk_status s = require(m && out, "tk_matrix_frobenius_norm: null argument"); s != TK_OK)
        return s;
    return guarded(false, [&] { *out = m->value.frobenius_norm(); });
}

tk_status tk_matrix_diagonal_sum_of_squares(const tk_matrix* m, double* out) {
    if (tk_status s = require(m && out, "tk_matrix_diagonal_sum_of_squares: null argument");
        s != TK_OK)
        return s;
    return guarded(false, [&] { *out = m->value.diagonal_sum_of_squares(); });
}

tk_status tk_matrix_quadratic_form(const tk_matrix* m, const double* x, size_t len,
                                   double* out) {
    if (tk_status s = require(m && x && out, "tk_matrix_quadratic_form: null argument");
        s != TK_OK)
        return s;
    return guarded(false, [&] {
        *out = m->value.quadratic_form(std::span<const double>(x, len));
    });
}

tk_status tk_matrix_rotate_haar(const tk_matrix* m, uint64_t rotation_seed, tk_matrix** out) {
    if (tk_status s = require(m && out, "tk_matrix_rotate_haar: null argument"); s != TK_OK)
        return s;
    return guarded(false, [&] {
        tracekit::RandomSource rng(rotation_seed, 0x9a7f00d500000002ULL);
        tracekit::Matrix q = tracekit::haar_orthogonal_matrix(m->value.dim(), rng);
        *out = new tk_matrix{
            tracekit::ImplicitMatrix::rotated(m->value, std::move(q), rotation_seed),
            "rotated:" + m->spec + ":" + std::to_string(rotation_seed)};
    });
}

tk_status tk_matrix_to_json(const tk_matrix* m, char** out_json) {
    if (tk_status s = require(m && out_json, "tk_matrix_to_json: null argument"); s != TK_OK)
        return s;
    return guarded(false, [&] {
        const std::string text = tracekit::matrix_to_json(m->value);
        char* buf = new char[text.size() + 1];
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out_json = buf;
    });
}

void tk_string_free(char* s) { delete[] s; }

tk_status tk_estimator_create(const char* spec, size_t k, tk_estimator** out) {
    if (tk_status s = require(spec && out, "tk_estimator_create: null argument"); s != TK_OK)
        return s;
    return guarded(true, [&] {
        *out = new tk_estimator{tracekit::estimator_from_spec(spec, k)};
    });
}

tk_status tk_estimator_symmetrized(const tk_estimator* base, tk_estimator** out) {
    if (tk_status s = require(base && out, "tk_estimator_symmetrized: null argument");
        s != TK_OK)
        return s;
    return guarded(false, [&] { *out = new tk_estimator{base->value.symmetrized()}; });
}

tk_status tk_estimator_rotated_haar(const tk_estimator* base, size_t n, uint64_t rotation_seed,
                                    tk_estimator** out) {
    if (tk_status s = require(base && out, "tk_estimator_rotated_haar: null argument");
        s != TK_OK)
        return s;
    return guarded(false, [&] {
        tracekit::RandomSource rng(rotation_seed, 0x9a7f00d500000003ULL);
        *out = new tk_estimator{
            base->value.rotated(tracekit::haar_orthogonal_matrix(n, rng))};
    });
}

void tk_estimator_free(tk_estimator* e) { delete e; }

tk_status tk_estimate(const tk_estimator* e, const tk_matrix* m, uint64_t seed,
                      uint64_t stream, double* out_value) {
    if (tk_status s = require(e && m && out_value, "tk_estimate: null argument"); s != TK_OK)
        return s;
    return guarded(false, [&] {
        tracekit::RandomSource rng(seed, stream);
        *out_value = e->value.estimate(m->value, rng).value;
    });
}

tk_status tk_run_trials(const tk_estimator* e, const tk_matrix* m, uint64_t trials,
                        uint64_t seed, uint64_t stream, int workers, tk_report* out) {
    if (tk_status s = require(e && m && out, "tk_run_trials: null argument"); s != TK_OK)
        return s;
    return guarded(false, [&] {
        tracekit::RandomSource base(seed, stream);
        auto rep = tracekit::run_trials(e->value, m->value, trials, base, workers);
        fill_report(rep, -1.0, out);
    });
}

tk_status tk_eps_delta_success(const tk_estimator* e, const tk_matrix* m, double epsilon,
                               uint64_t trials, uint64_t seed, uint64_t stream, int workers,
                               tk_report* out) {
    if (tk_status s = require(e && m && out, "tk_eps_delta_success: null argument"); s != TK_OK)
        return s;
    return guarded(false, [&] {
        tracekit::RandomSource base(seed, stream);
        auto res = tracekit::eps_delta_success(e->value, m->value, epsilon, trials, base,
                                               workers);
        fill_report(res.report, res.success_ci95, out);
    });
}

tk_status tk_analytic_variance(const char* kind, const tk_matrix* m, size_t k, double* out) {
    if (tk_status s = require(kind && m && out, "tk_analytic_variance: null argument");
        s != TK_OK)
        return s;
    return guarded(false, [&] {
        const std::string name = kind;
        tracekit::EstimatorKind ek;
        if (name == "gaussian")
            ek = tracekit::EstimatorKind::Gaussian;
        else if (name == "rademacher")
            ek = tracekit::EstimatorKind::Rademacher;
        else
            throw std::invalid_argument("tk_analytic_variance: kind must be "
                                        "'gaussian' or 'rademacher'");
        *out = tracekit::analytic_variance(ek, m->value, k);
    });
}

tk_status tk_kl_zero_mean_gaussians(const double* diag0, const double* diag1, size_t len,
                                    double* out) {
    if (tk_status s = require(diag0 && diag1 && out, "tk_kl_zero_mean_gaussians: null argument");
        s != TK_OK)
        return s;
    return guarded(false, [&] {
        *out = tracekit::kl_zero_mean_gaussians(std::span<const double>(diag0, len),
                                                std::span<const double>(diag1, len));
    });
}

tk_status tk_pinsker_tv_upper(double kl, double* out) {
    if (tk_status s = require(out != nullptr, "tk_pinsker_tv_upper: null argument"); s != TK_OK)
        return s;
    return guarded(false, [&] { *out = tracekit::pinsker_tv_upper(kl); });
}

tk_status tk_scale_family_tv(double sigma0, double sigma1, size_t k, double* out) {
    if (tk_status s = require(out != nullptr, "tk_scale_family_tv: null argument"); s != TK_OK)
        return s;
    return guarded(false, [&] { *out = tracekit::scale_family_tv(sigma0, sigma1, k); });
}

tk_status tk_chi_square_tail_check(size_t k, double t, uint64_t trials, uint64_t seed,
                                   tk_tail_check* out) {
    if (tk_status s = require(out != nullptr, "tk_chi_square_tail_check: null argument");
        s != TK_OK)
        return s;
    return guarded(false, [&] {
        tracekit::RandomSource rng(seed, 0);
        auto res = tracekit::chi_square_tail_check(k, t, trials, rng);
        out->empirical_upper = res.empirical_upper;
        out->empirical_lower = res.empirical_lower;
        out->bound = res.bound;
        out->stderr_upper = res.stderr_upper;
        out->stderr_lower = res.stderr_lower;
    });
}

tk_status tk_game_run(int game, double epsilon, size_t n, size_t k, uint64_t rounds,
                      uint64_t seed, int workers, tk_game_report* out) {
    if (tk_status s = require(out != nullptr, "tk_game_run: null argument"); s != TK_OK)
        return s;
    return guarded(false, [&] {
        tracekit::RandomSource base(seed, 0);
        auto rep = tracekit::strong_query_game(epsilon, n, k, game, rounds, base, workers);
        out->game = rep.game;
        out->n = rep.n;
        out->k = rep.k;
        out->epsilon = rep.epsilon;
        out->delta = rep.delta.value_or(-1.0);
        out->trials = rep.trials;
        out->success_rate = rep.success_rate;
        out->stderr_success = rep.stderr_success;
        out->analytic_ceiling = rep.analytic_ceiling;
        out->seed = rep.seed;
    });
}

tk_status tk_game6_analytic_success(double epsilon, size_t k, double* out) {
    if (tk_status s = require(out != nullptr, "tk_game6_analytic_success: null argument");
        s != TK_OK)
        return s;
    return guarded(false, [&] { *out = tracekit::analytic_game6_success(epsilon, k); });
}

tk_status tk_k_star(double epsilon, double delta, size_t* out_k, double* out_success) {
    if (tk_status s = require(out_k != nullptr, "tk_k_star: null argument"); s != TK_OK)
        return s;
    return guarded(false, [&] {
        auto res = tracekit::empirical_query_complexity(epsilon, delta);
        *out_k = res.k_star;
        if (out_success)
            *out_success = res.success_at_k_star;
    });
}

tk_status tk_haar_check(size_t n, uint64_t draws, uint64_t seed, tk_haar_report* out) {
    if (tk_status s = require(out != nullptr, "tk_haar_check: null argument"); s != TK_OK)
        return s;
    if (tk_status s = require(n >= 1 && draws >= 100, "tk_haar_check: need n >= 1, draws >= 100");
        s != TK_OK)
        return s;
    return guarded(false, [&] {
        tracekit::RandomSource rng(seed, 1);
        tracekit::RandomSource ref_rng(seed, 2);
        double max_off = 0.0, max_unit = 0.0, max_det = 0.0;
        std::vector<double> haar_first, ref_first;
        haar_first.reserve(draws);
        ref_first.reserve(draws);
        for (uint64_t d = 0; d < draws; ++d) {
            tracekit::Matrix q = tracekit::haar_orthogonal_matrix(n, rng);
            for (size_t i = 0; i < n; ++i) {
                max_unit = std::max(max_unit, std::fabs(tracekit::norm2(q.row(i)) - 1.0));
                for (size_t j = i + 1; j < n; ++j)
                    max_off = std::max(max_off,
                                       std::fabs(tracekit::dot(q.row(i), q.row(j))));
            }
            max_det = std::max(max_det, std::fabs(std::fabs(tracekit::determinant(q)) - 1.0));
            haar_first.push_back(q(0, 0)); // first coordinate of Q e1
            ref_first.push_back(tracekit::uniform_unit_vector(n, ref_rng)[0]);
        }
        out->max_offdiagonal = max_off;
        out->max_unit_error = max_unit;
        out->max_det_error = max_det;
        out->ks_statistic = tracekit::ks_two_sample(haar_first, ref_first);
        out->ks_critical = tracekit::ks_two_sample_critical(0.01, draws, draws);
    });
}

} // extern "C"
