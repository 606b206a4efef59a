// Acceptance battery for the tracekit library: every release gate runs here,
// one PASS/FAIL line per criterion. Run all by default, or pass criterion
// numbers (e.g. "acceptance 8 11") to run a subset.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "core/estimator.hpp"
#include "core/games.hpp"
#include "core/sampler.hpp"
#include "core/spec_io.hpp"
#include "core/stats.hpp"
#include "core/trials.hpp"
#include "support/oracles.hpp"

using namespace tracekit;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20260808;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::vector<std::pair<std::string, ImplicitMatrix>> unit_battery(std::size_t n) {
    std::vector<std::pair<std::string, ImplicitMatrix>> family;
    const std::string dim = std::to_string(n);
    for (const std::string& spec :
         {"diag-spike:" + dim, "diag-flat:" + dim, "offdiag:" + dim,
          "planted-p1:" + dim + ":0.1", "rotated:diag-spike:" + dim + ":7"})
        family.emplace_back(spec, matrix_from_spec(spec, kSeed));
    return family;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.5g", v);
    return buf;
}

// --- criterion 1: gaussian variance formula -------------------------------

Outcome criterion1() {
    Outcome out;
    std::uint64_t stream = 100;
    for (const auto& [id, a] : unit_battery(16)) {
        for (std::size_t k : {1u, 4u}) {
            auto rep = run_trials(LinearEstimator::gaussian(k), a, 1000000,
                                  RandomSource(kSeed, stream++));
            const double target = 2.0 / static_cast<double>(k);
            out.require(std::fabs(rep.empirical_variance - target) <= 0.05 * target,
                        id + " k=" + std::to_string(k) + " var=" +
                            fmt(rep.empirical_variance) + " target=" + fmt(target));
        }
    }
    return out;
}

// --- criterion 2: rademacher variance formula ------------------------------

Outcome criterion2() {
    Outcome out;
    std::uint64_t stream = 200;
    for (const auto& [id, a] : unit_battery(16)) {
        const bool diagonal_kind = id.rfind("diag", 0) == 0;
        for (std::size_t k : {1u, 4u}) {
            if (diagonal_kind) {
                auto est = LinearEstimator::rademacher(k);
                double worst = 0.0;
                for (std::size_t t = 0; t < 10000; ++t) {
                    RandomSource rng(kSeed, derive_stream(stream, t));
                    worst = std::max(worst,
                                     std::fabs(est.estimate(a, rng).value - a.trace()));
                }
                ++stream;
                out.require(worst <= 1e-12,
                            id + " k=" + std::to_string(k) + " max error " + fmt(worst));
                continue;
            }
            auto rep = run_trials(LinearEstimator::rademacher(k), a, 1000000,
                                  RandomSource(kSeed, stream++));
            const double target = analytic_variance(EstimatorKind::Rademacher, a, k);
            out.require(std::fabs(rep.empirical_variance - target) <= 0.05 * target,
                        id + " k=" + std::to_string(k) + " var=" +
                            fmt(rep.empirical_variance) + " target=" + fmt(target));
        }
    }
    return out;
}

// --- criterion 3: minimum-variance ordering --------------------------------

Outcome criterion3() {
    Outcome out;
    const auto family = unit_battery(16);
    const std::size_t trials = 1000000;
    auto orth = worst_case_variance(LinearEstimator::orthogonal(4), family, trials,
                                    RandomSource(kSeed, 300));
    auto gauss = worst_case_variance(LinearEstimator::gaussian(4), family, trials,
                                     RandomSource(kSeed, 301));
    auto rad = worst_case_variance(LinearEstimator::rademacher(4), family, trials,
                                   RandomSource(kSeed, 302));
    auto sigma_at_max = [](const WorstCaseResult& r) {
        for (const auto& rep : r.reports)
            if (rep.matrix_id == r.argmax_matrix_id)
                return rep.stderr_variance;
        return 0.0;
    };
    const double so = sigma_at_max(orth);
    out.require(orth.variance <= gauss.variance + 3.0 * std::hypot(so, sigma_at_max(gauss)),
                "orthogonal max " + fmt(orth.variance) + " vs gaussian max " +
                    fmt(gauss.variance));
    out.require(orth.variance <= rad.variance + 3.0 * std::hypot(so, sigma_at_max(rad)),
                "orthogonal max " + fmt(orth.variance) + " vs rademacher max " +
                    fmt(rad.variance));

    auto full = LinearEstimator::orthogonal(16);
    for (const auto& [id, a] : family) {
        double worst = 0.0;
        for (std::size_t t = 0; t < 1000; ++t) {
            RandomSource rng(kSeed, derive_stream(303, t));
            worst = std::max(worst, std::fabs(full.estimate(a, rng).value - a.trace()));
        }
        out.require(worst <= 1e-9, "k=n recovery on " + id + " error " + fmt(worst));
    }
    return out;
}

// --- criterion 4: equal weights minimize the variance -----------------------

Outcome criterion4() {
    Outcome out;
    auto a = ImplicitMatrix::diagonal({1.0, 0.0, 0.0, 0.0});
    std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<ExperimentReport> reps;
    std::uint64_t stream = 400;
    for (double t : grid) {
        AngleConfiguration cfg;
        cfg.probability = 1.0;
        cfg.angles = {kPi / 2.0};
        cfg.weight_over_n = {t, 1.0 - t};
        auto est = LinearEstimator::configured(2, {cfg});
        reps.push_back(run_trials(est, a, 1000000, RandomSource(kSeed, stream++)));
    }
    const auto& mid = reps[4];
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < reps.size(); ++i)
        if (reps[i].empirical_variance < reps[argmin].empirical_variance)
            argmin = i;
    out.require(grid[argmin] == 0.5, "variance minimized at t=" + fmt(grid[argmin]));
    for (std::size_t end : {0u, 8u}) {
        const double gap = reps[end].empirical_variance - mid.empirical_variance;
        const double sigma =
            std::hypot(reps[end].stderr_variance, mid.stderr_variance);
        out.require(gap > 5.0 * sigma, "t=" + fmt(grid[end]) + " gap " + fmt(gap) +
                                           " vs 5 sigma " + fmt(5.0 * sigma));
    }
    return out;
}

// --- criterion 5: orthogonal angles minimize the variance -------------------

Outcome criterion5() {
    Outcome out;
    std::vector<std::pair<std::string, ImplicitMatrix>> mats;
    for (const char* spec : {"diag-spike:4", "offdiag:4", "planted-p1:4:0.1"})
        mats.emplace_back(spec, matrix_from_spec(spec, kSeed));
    const std::vector<double> angles{0.0, kPi / 6.0, kPi / 3.0, kPi / 2.0};
    std::uint64_t stream = 500;
    for (const auto& [id, a] : mats) {
        std::vector<ExperimentReport> reps;
        for (double theta : angles) {
            AngleConfiguration cfg;
            cfg.probability = 1.0;
            cfg.angles = {theta};
            cfg.weight_over_n = {0.5, 0.5};
            auto est = LinearEstimator::configured(2, {cfg});
            reps.push_back(run_trials(est, a, 1000000, RandomSource(kSeed, stream++)));
        }
        const auto& perp = reps.back();
        for (std::size_t i = 0; i + 1 < reps.size(); ++i) {
            const double sigma = std::hypot(perp.stderr_variance, reps[i].stderr_variance);
            out.require(perp.empirical_variance <=
                            reps[i].empirical_variance + 3.0 * sigma,
                        id + " angle " + fmt(angles[i]) + ": perp " +
                            fmt(perp.empirical_variance) + " vs " +
                            fmt(reps[i].empirical_variance));
        }
    }
    return out;
}

// --- criterion 6: symmetrization invariance --------------------------------

Outcome criterion6() {
    Outcome out;
    RandomSource qrng(kSeed, 600);
    const std::size_t trials = 100000;
    std::uint64_t stream = 601;
    for (const char* spec : {"diag-spike:8", "offdiag:8", "planted-p1:8:0.15"}) {
        auto a = matrix_from_spec(spec, kSeed);
        Matrix q = haar_orthogonal_matrix(8, qrng);
        auto rotated = ImplicitMatrix::rotated(a, q);
        for (const auto& base :
             {LinearEstimator::rademacher(2), LinearEstimator::gaussian(2)}) {
            auto sym = base.symmetrized();
            std::vector<double> on_a(trials), on_rot(trials);
            const std::uint64_t sa = stream++, sb = stream++;
            for (std::size_t t = 0; t < trials; ++t) {
                RandomSource r1(kSeed, derive_stream(sa, t));
                on_a[t] = sym.estimate(a, r1).value;
                RandomSource r2(kSeed, derive_stream(sb, t));
                on_rot[t] = sym.estimate(rotated, r2).value;
            }
            const double stat = ks_two_sample(on_a, on_rot);
            const double crit = ks_two_sample_critical(0.01, trials, trials);
            out.require(stat < crit, std::string(spec) + " sym(" + base.id() + ") KS " +
                                         fmt(stat) + " crit " + fmt(crit));
        }
    }
    return out;
}

// --- criterion 7: the lemma-budget estimator wins the rank-2 game -----------

Outcome criterion7() {
    Outcome out;
    for (double eps : {0.1, 0.2}) {
        const GameParams p = GameParams::from_epsilon(eps);
        const double sd = p.eps3 / std::sqrt(60.0);
        auto noisy = [sd](const ImplicitMatrix& m, RandomSource& rng) {
            return m.trace() + sd * rng.next_gaussian();
        };
        const double success = variance_distinguisher_game(
            noisy, eps, 64, 10000, RandomSource(kSeed, 700 + static_cast<int>(eps * 10)));
        out.require(success >= 2.0 / 3.0 - 0.02,
                    "epsilon=" + fmt(eps) + " success " + fmt(success));
    }
    return out;
}

// --- criteria 8 and 11: game-6 sweep ---------------------------------------

struct SweepResults {
    std::vector<Game6CellResult> cells;
};

SweepResults run_sweep() {
    SweepResults sw;
    std::uint64_t stream = 800;
    for (double eps : {0.05, 0.1, 0.2})
        for (std::size_t k = 1; k <= 100; ++k)
            sw.cells.push_back(
                run_game6_cell(eps, 10000, k, 100000, RandomSource(kSeed, stream++)));
    return sw;
}

Outcome criterion8(const SweepResults& sw) {
    Outcome out;
    // Binomial stderr taken at its p(1-p) <= 1/4 bound: the surrogate ceiling
    // itself sits O(k/n) below the exact projected-law ceiling (~7e-4 at
    // k = 100, n = 1e4), so the observed-rate stderr would be eaten by that
    // bias at the top of the grid while this bound still flags any excess
    // beyond ~5e-3, five times tighter than the criterion-11 allowance.
    const double conservative_stderr =
        std::sqrt(0.25 / static_cast<double>(sw.cells.front().lr.trials));
    std::size_t violations = 0;
    double worst_excess = -1.0;
    std::string worst;
    for (const auto& cell : sw.cells) {
        const double ceiling = cell.lr.analytic_ceiling;
        for (double success : {cell.lr.success_rate, cell.success_mean_abs,
                               cell.success_max_coord, cell.success_half_energy}) {
            const double excess = success - ceiling;
            if (excess > worst_excess) {
                worst_excess = excess;
                worst = "eps=" + fmt(cell.lr.epsilon) + " k=" +
                        std::to_string(cell.lr.k) + " success " + fmt(success) +
                        " ceiling " + fmt(ceiling);
            }
            if (excess > 3.0 * conservative_stderr)
                ++violations;
        }
    }
    out.require(violations == 0, std::to_string(violations) +
                                     " ceiling violations, worst " + worst);
    if (out.pass)
        out.detail = std::to_string(sw.cells.size()) +
                     " cells x 4 distinguishers, worst excess " + fmt(worst_excess) +
                     " vs slack " + fmt(3.0 * conservative_stderr);
    return out;
}

Outcome criterion11(const SweepResults& sw) {
    Outcome out;
    std::size_t violations = 0;
    double worst_gap = 0.0;
    std::string worst;
    for (const auto& cell : sw.cells) {
        const double gap = std::fabs(cell.lr.success_rate - cell.lr.analytic_ceiling);
        const double allowed = 0.01 + 3.0 * cell.lr.stderr_success;
        if (gap > allowed) {
            ++violations;
            if (gap > worst_gap) {
                worst_gap = gap;
                worst = "eps=" + fmt(cell.lr.epsilon) + " k=" + std::to_string(cell.lr.k) +
                        " gap " + fmt(gap);
            }
        }
    }
    out.require(violations == 0,
                std::to_string(violations) + " curve deviations, worst " + worst);
    if (out.pass)
        out.detail = "max |success - curve| within 0.01 + 3 stderr on all cells";
    return out;
}

// --- criterion 9: analytic query-complexity scaling laws --------------------

Outcome criterion9() {
    Outcome out;
    for (double eps : {0.2, 0.1, 0.05}) {
        const auto base = empirical_query_complexity(eps, 0.1);
        const auto half = empirical_query_complexity(eps / 2.0, 0.1);
        const double ratio =
            static_cast<double>(half.k_star) / static_cast<double>(base.k_star);
        out.require(ratio >= 3.0 && ratio <= 5.0,
                    "eps-scaling at eps=" + fmt(eps) + ": k " +
                        std::to_string(base.k_star) + " -> " + std::to_string(half.k_star) +
                        " ratio " + fmt(ratio) + " outside [3, 5]");
    }
    const auto d1 = empirical_query_complexity(0.1, 0.1);
    const auto d2 = empirical_query_complexity(0.1, 0.01);
    const double dratio = static_cast<double>(d2.k_star) / static_cast<double>(d1.k_star);
    out.require(dratio >= 1.6 && dratio <= 2.4,
                "delta-scaling at eps=0.1: k " + std::to_string(d1.k_star) + " -> " +
                    std::to_string(d2.k_star) + " ratio " + fmt(dratio) +
                    " outside [1.6, 2.4]");
    return out;
}

// --- criterion 10: KL / Pinsker / chi-square toolbox -------------------------

Outcome criterion10() {
    Outcome out;
    // Pinsker inequality on a 100-point grid
    const std::vector<double> sigmas{0.5, 0.8, 1.0, 1.4, 2.2};
    const std::vector<std::size_t> ks{1, 3, 10, 40};
    std::size_t points = 0;
    for (double s0 : sigmas)
        for (double s1 : sigmas)
            for (std::size_t k : ks) {
                ++points;
                std::vector<double> d0(k, s0 * s0), d1(k, s1 * s1);
                const double bound = pinsker_tv_upper(kl_zero_mean_gaussians(d0, d1));
                const double tv = (s0 == s1) ? 0.0 : scale_family_tv(s0, s1, k);
                out.require(tv <= bound + 1e-9,
                            "pinsker violated at s0=" + fmt(s0) + " s1=" + fmt(s1) +
                                " k=" + std::to_string(k));
            }
    out.require(points == 100, "grid size " + std::to_string(points));

    // KL formula against one-dimensional quadrature
    const std::vector<std::pair<double, double>> cases{
        {1.0, 2.0}, {2.0, 1.0}, {1.0, 1.5}, {0.25, 1.0}, {1.0, 0.25},
        {3.0, 0.5}, {0.5, 3.0}, {1.0, 1.01}, {2.0, 2.5}, {0.1, 0.2}};
    for (const auto& [v0, v1] : cases) {
        const double formula = kl_zero_mean_gaussians(std::vector<double>{v0},
                                                      std::vector<double>{v1});
        const double quad = oracles::kl_gaussian_quadrature(v0, v1);
        out.require(std::fabs(formula - quad) <= 1e-6,
                    "KL quadrature mismatch at (" + fmt(v0) + ", " + fmt(v1) + "): " +
                        fmt(formula) + " vs " + fmt(quad));
    }

    // chi-square tail bounds at 3 sigma
    std::uint64_t stream = 1000;
    for (std::size_t k : {10u, 100u}) {
        for (double t : {1.0, 2.0, 3.0}) {
            RandomSource rng(kSeed, stream++);
            const auto res = chi_square_tail_check(k, t, 1000000, rng);
            out.require(res.empirical_upper <= res.bound + 3.0 * res.stderr_upper,
                        "upper tail k=" + std::to_string(k) + " t=" + fmt(t) + ": " +
                            fmt(res.empirical_upper) + " > " + fmt(res.bound));
            out.require(res.empirical_lower <= res.bound + 3.0 * res.stderr_lower,
                        "lower tail k=" + std::to_string(k) + " t=" + fmt(t) + ": " +
                            fmt(res.empirical_lower) + " > " + fmt(res.bound));
        }
    }
    return out;
}

// --- criterion 12: byte-identical reruns through the CLI --------------------

#ifndef TRACEKIT_CLI_PATH
#error "TRACEKIT_CLI_PATH must be defined"
#endif

struct CliRun {
    int exit_code = -1;
    std::string stdout_text;
};

CliRun run_cli(const std::string& args) {
    CliRun res;
    const std::string cmd = std::string(TRACEKIT_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return res;
    std::array<char, 4096> buf{};
    size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.stdout_text.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion12() {
    Outcome out;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path();
    const auto a1 = dir / "tk_acc_a1.csv", a2 = dir / "tk_acc_a2.csv";
    const auto g1 = dir / "tk_acc_g1.csv", g2 = dir / "tk_acc_g2.csv";
    const auto s1 = dir / "tk_acc_s1.csv", s2 = dir / "tk_acc_s2.csv";

    const std::string bench = "bench-variance --matrix planted-p1:16:0.1 --estimator "
                              "orthogonal --k 4 --trials 100000 --seed 17 ";
    out.require(run_cli(bench + "--out " + a1.string()).exit_code == 0, "bench run 1");
    out.require(run_cli(bench + "--workers 2 --out " + a2.string()).exit_code == 0,
                "bench run 2");
    out.require(slurp(a1) == slurp(a2) && !slurp(a1).empty(),
                "bench-variance reruns differ");

    const std::string game =
        "game --game 6 --epsilon 0.1 --n 10000 --k 20 --trials 10000 --seed 17 ";
    out.require(run_cli(game + "--out " + g1.string()).exit_code == 0, "game run 1");
    out.require(run_cli(game + "--workers 3 --out " + g2.string()).exit_code == 0,
                "game run 2");
    out.require(slurp(g1) == slurp(g2) && !slurp(g1).empty(), "game reruns differ");

    const std::string sweep = "sweep --game 6 --epsilons 0.05,0.1,0.2 --delta 0.1 --seed 17 ";
    out.require(run_cli(sweep + "--out " + s1.string()).exit_code == 0, "sweep run 1");
    out.require(run_cli(sweep + "--out " + s2.string()).exit_code == 0, "sweep run 2");
    out.require(slurp(s1) == slurp(s2) && !slurp(s1).empty(), "sweep reruns differ");

    const std::string est =
        "estimate --matrix identity:8 --estimator orthogonal --k 8 --seed 1";
    const auto e1 = run_cli(est), e2 = run_cli(est);
    out.require(e1.exit_code == 0 && e1.stdout_text == e2.stdout_text &&
                    !e1.stdout_text.empty(),
                "estimate reruns differ");

    for (const auto& p : {a1, a2, g1, g2, s1, s2})
        fs::remove(p);
    return out;
}

struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.push_back(std::atoi(argv[i]));
    auto wanted = [&](int id) {
        return selected.empty() ||
               std::find(selected.begin(), selected.end(), id) != selected.end();
    };

    // criteria 8 and 11 share one sweep
    SweepResults sweep;
    if (wanted(8) || wanted(11))
        sweep = run_sweep();

    const std::vector<Criterion> criteria{
        {1, "gaussian variance 2|A|_F^2 / k within 5%", criterion1},
        {2, "rademacher variance 2(|A|_F^2 - sum diag^2)/k within 5%, exact on diagonals",
         criterion2},
        {3, "orthogonal estimator is the family minimum and exact at k=n", criterion3},
        {4, "equal weights n/k minimize the variance (5 sigma at grid ends)", criterion4},
        {5, "orthogonal angles minimize the variance per matrix (3 sigma or tie)",
         criterion5},
        {6, "symmetrized estimators are invariant across similar matrices (KS 1%)",
         criterion6},
        {7, "eps3^2/60-variance oracle distinguishes the rank-2 pair at 2/3",
         criterion7},
        {8, "no game-6 distinguisher beats the 1/2 + TV/2 ceiling",
         [&] { return criterion8(sweep); }},
        {9, "analytic k_star follows the 1/eps^2 and log(1/delta) laws", criterion9},
        {10, "KL/Pinsker/chi-square toolbox holds on its grids", criterion10},
        {11, "game-6 success tracks the gaussian surrogate curve within 0.01",
         [&] { return criterion11(sweep); }},
        {12, "identical seeds give byte-identical reports", criterion12},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (!wanted(c.id))
            continue;
        const Outcome out = c.run();
        if (out.pass) {
            std::cout << "PASS criterion " << c.id << ": " << c.name;
            if (!out.detail.empty())
                std::cout << " (" << out.detail << ")";
            std::cout << '\n';
        } else {
            ++failures;
            std::cout << "FAIL criterion " << c.id << ": " << c.name << " -- "
                      << out.detail << '\n';
        }
        std::cout.flush();
    }
    return failures == 0 ? 0 : 1;
}
