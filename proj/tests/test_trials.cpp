#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "core/spec_io.hpp"
#include "core/trials.hpp"

using namespace tracekit;

namespace {

Matrix offdiag2() {
    Matrix m(2, 2);
    m(0, 1) = 1.0 / std::sqrt(2.0);
    m(1, 0) = 1.0 / std::sqrt(2.0);
    return m;
}

} // namespace

TEST_SUITE_BEGIN("analysis");

TEST_CASE("zero-variance runs report exactly zero") {
    auto a = ImplicitMatrix::diagonal({1.0, 2.0, -0.5});
    auto rep = run_trials(LinearEstimator::rademacher(2), a, 5000, RandomSource(1, 0));
    CHECK(rep.empirical_variance == 0.0);
    CHECK(rep.empirical_mean == doctest::Approx(a.trace()).epsilon(1e-15));
    CHECK(rep.stderr_variance == 0.0);
    CHECK(rep.trials == 5000);
}

TEST_CASE("gaussian single-query variance lands in the documented window") {
    auto a = ImplicitMatrix::diagonal({1.0});
    auto rep = run_trials(LinearEstimator::gaussian(1), a, 1000000, RandomSource(2, 0));
    CHECK(rep.empirical_variance >= 1.9);
    CHECK(rep.empirical_variance <= 2.1);
}

TEST_CASE("orthogonal estimator variance matches the quadrature value") {
    auto a = ImplicitMatrix::diagonal({1.0, 0.0});
    auto rep = run_trials(LinearEstimator::orthogonal(1), a, 1000000, RandomSource(3, 0));
    CHECK(rep.empirical_variance >= 0.47);
    CHECK(rep.empirical_variance <= 0.53);
}

TEST_CASE("runs are deterministic and worker-count independent") {
    auto a = matrix_from_spec("planted-p1:8:0.1", 4);
    auto est = LinearEstimator::gaussian(2);
    auto r1 = run_trials(est, a, 20000, RandomSource(4, 9), 1);
    auto r2 = run_trials(est, a, 20000, RandomSource(4, 9), 1);
    auto r3 = run_trials(est, a, 20000, RandomSource(4, 9), 3);
    CHECK(r1.empirical_mean == r2.empirical_mean);
    CHECK(r1.empirical_variance == r2.empirical_variance);
    CHECK(r1.empirical_mean == r3.empirical_mean);
    CHECK(r1.empirical_variance == r3.empirical_variance);
    CHECK(r1.stderr_mean == r3.stderr_mean);
    CHECK(r1.stderr_variance == r3.stderr_variance);
}

TEST_CASE("trial counts below two are rejected") {
    auto a = ImplicitMatrix::diagonal({1.0});
    CHECK_THROWS_AS(run_trials(LinearEstimator::gaussian(1), a, 1, RandomSource(5, 0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_trials(LinearEstimator::gaussian(1), a, 100, RandomSource(5, 0), 0),
                    std::invalid_argument);
}

TEST_CASE("analytic variance formulas") {
    auto spike = matrix_from_spec("diag-spike:16", 6);
    CHECK(analytic_variance(EstimatorKind::Gaussian, spike, 1) == doctest::Approx(2.0));
    CHECK(analytic_variance(EstimatorKind::Rademacher, spike, 3) == doctest::Approx(0.0));

    auto off = ImplicitMatrix::dense(offdiag2());
    // enumeration oracle: the four sign patterns of x give f = ±sqrt(2), so
    // the single-query second moment is 2 and k = 2 halves it
    double second_moment = 0.0;
    for (double s0 : {-1.0, 1.0})
        for (double s1 : {-1.0, 1.0}) {
            std::vector<double> x{s0, s1};
            const double f = off.quadratic_form(x);
            second_moment += 0.25 * f * f;
        }
    CHECK(second_moment == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(analytic_variance(EstimatorKind::Rademacher, off, 2) ==
          doctest::Approx(second_moment / 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(analytic_variance(EstimatorKind::Orthogonal, off, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(analytic_variance(EstimatorKind::Gaussian, off, 0),
                    std::invalid_argument);
}

TEST_CASE("empirical variance tracks the analytic formula across a battery") {
    std::vector<std::pair<std::string, ImplicitMatrix>> battery;
    battery.emplace_back("diag-spike:8", matrix_from_spec("diag-spike:8", 7));
    battery.emplace_back("offdiag:8", matrix_from_spec("offdiag:8", 7));
    battery.emplace_back("planted-p1:8:0.1", matrix_from_spec("planted-p1:8:0.1", 7));
    battery.emplace_back("rotated:diag-spike:8:3",
                         matrix_from_spec("rotated:diag-spike:8:3", 7));
    int stream = 0;
    for (auto kind : {EstimatorKind::Gaussian, EstimatorKind::Rademacher}) {
        auto est = kind == EstimatorKind::Gaussian ? LinearEstimator::gaussian(2)
                                                   : LinearEstimator::rademacher(2);
        for (const auto& [id, a] : battery) {
            auto rep = run_trials(est, a, 300000, RandomSource(7, 50 + stream++));
            const double target = analytic_variance(kind, a, 2);
            CHECK_MESSAGE(std::fabs(rep.empirical_variance - target) <=
                              4.0 * std::max(rep.stderr_variance, 1e-9),
                          est.id(), " on ", id);
        }
    }
}

TEST_CASE("worst-case variance over a family") {
    std::vector<std::pair<std::string, ImplicitMatrix>> diag_family;
    diag_family.emplace_back("spike", matrix_from_spec("diag-spike:8", 8));
    diag_family.emplace_back("flat", matrix_from_spec("diag-flat:8", 8));
    auto rad = worst_case_variance(LinearEstimator::rademacher(2), diag_family, 5000,
                                   RandomSource(8, 0));
    CHECK(rad.variance == 0.0);

    std::vector<std::pair<std::string, ImplicitMatrix>> family = diag_family;
    family.emplace_back("offdiag", ImplicitMatrix::dense(offdiag2()));
    auto gauss = worst_case_variance(LinearEstimator::gaussian(1), family, 200000,
                                     RandomSource(8, 1));
    CHECK(gauss.variance == doctest::Approx(2.0).epsilon(0.05));
    CHECK(gauss.reports.size() == family.size());

    CHECK_THROWS_AS(worst_case_variance(LinearEstimator::gaussian(1), {}, 100,
                                        RandomSource(8, 2)),
                    std::invalid_argument);
    std::vector<std::pair<std::string, ImplicitMatrix>> not_unit;
    not_unit.emplace_back("identity", matrix_from_spec("identity:4", 8));
    CHECK_THROWS_AS(worst_case_variance(LinearEstimator::gaussian(1), not_unit, 100,
                                        RandomSource(8, 3)),
                    std::invalid_argument);
}

TEST_CASE("orthogonal worst case does not exceed the i.i.d. estimators") {
    std::vector<std::pair<std::string, ImplicitMatrix>> family;
    for (const char* spec :
         {"diag-spike:16", "diag-flat:16", "offdiag:16", "planted-p1:16:0.1",
          "rotated:diag-spike:16:5"})
        family.emplace_back(spec, matrix_from_spec(spec, 9));
    const std::size_t trials = 150000;
    auto orth = worst_case_variance(LinearEstimator::orthogonal(4), family, trials,
                                    RandomSource(9, 0));
    auto gauss = worst_case_variance(LinearEstimator::gaussian(4), family, trials,
                                     RandomSource(9, 1));
    double sigma_orth = 0, sigma_gauss = 0;
    for (const auto& r : orth.reports)
        if (r.matrix_id == orth.argmax_matrix_id)
            sigma_orth = r.stderr_variance;
    for (const auto& r : gauss.reports)
        if (r.matrix_id == gauss.argmax_matrix_id)
            sigma_gauss = r.stderr_variance;
    CHECK(orth.variance <= gauss.variance + 3.0 * std::hypot(sigma_orth, sigma_gauss));
}

TEST_CASE("multiplicative success windows") {
    auto diag = ImplicitMatrix::diagonal({0.5, 1.5, 1.0});
    auto exact = eps_delta_success(LinearEstimator::rademacher(1), diag, 0.05, 2000,
                                   RandomSource(10, 0));
    CHECK(exact.report.success_rate.value() == 1.0);
    CHECK(exact.report.epsilon.value() == 0.05);

    // identity(64)/8 is SPD with unit Frobenius norm; the k = ceil(8/eps^2)
    // gaussian estimator should succeed with rate well above 0.9
    auto scaled = ImplicitMatrix::diagonal(std::vector<double>(64, 1.0 / 8.0));
    auto res = eps_delta_success(LinearEstimator::gaussian(200), scaled, 0.2, 10000,
                                 RandomSource(10, 1));
    CHECK(res.report.success_rate.value() >= 0.9);

    auto zero = ImplicitMatrix::diagonal({0.0, 0.0});
    CHECK_THROWS_AS(eps_delta_success(LinearEstimator::gaussian(1), zero, 0.1, 100,
                                      RandomSource(10, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(eps_delta_success(LinearEstimator::gaussian(1), diag, 0.0, 100,
                                      RandomSource(10, 3)),
                    std::invalid_argument);
}

TEST_CASE("success confidence radius falls back to Wilson for rare outcomes") {
    auto a = ImplicitMatrix::diagonal({1.0});
    // single gaussian query on a 1x1 identity: tiny epsilon keeps successes rare
    auto res = eps_delta_success(LinearEstimator::gaussian(1), a, 1e-4, 3000,
                                 RandomSource(11, 0));
    CHECK(res.success_ci95 > 0.0);
    CHECK(res.success_ci95 < 0.1);
    CHECK(res.report.success_rate.value() < 0.05);
}

TEST_SUITE_END();
