// tracekit command line driver: builds matrices/estimators from spec strings,
// runs seeded experiments through the C API and writes CSV/JSON reports.
//
// Exit codes: 0 success, 2 validation failure, 3 runtime failure.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tracekit.h"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
    throw CliError{code, message};
}

[[noreturn]] void fail_api(tk_status status, const std::string& context) {
    const int code = (status == TK_ERR_RUNTIME) ? kExitRuntime : kExitValidation;
    fail(code, context + ": " + tk_last_error());
}

void check(tk_status status, const std::string& context) {
    if (status != TK_OK)
        fail_api(status, context);
}

// shortest round-trip decimal form, so identical runs emit identical bytes
std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string fmt_opt(double v) { return v < 0.0 ? std::string() : fmt(v); }

struct MatrixHandle {
    tk_matrix* ptr = nullptr;
    ~MatrixHandle() { tk_matrix_free(ptr); }
};

struct EstimatorHandle {
    tk_estimator* ptr = nullptr;
    ~EstimatorHandle() { tk_estimator_free(ptr); }
};

// ---- experiment configuration ------------------------------------------

struct ExperimentConfig {
    std::string command;
    std::string matrix_spec;
    std::string estimator_spec;
    std::uint64_t n = 16;
    std::uint64_t k = 1;
    std::uint64_t trials = 100000;
    double epsilon = 0.1;
    std::optional<double> delta;
    std::uint64_t seed = 1; // fixed default keeps bare invocations reproducible
    std::uint64_t stream = 0;
    int workers = 1;
    int game = 6;
    std::uint64_t draws = 20000;
    std::string epsilons = "0.05,0.1,0.2";
    std::string k_grid = "1:16";
    std::string out_path;
    std::string format = "csv";

    bool has_epsilon = false;   // set when --epsilon was given explicitly
    bool n_from_config = false; // set when a config file supplied n
};

std::vector<std::string> validate(const ExperimentConfig& c) {
    std::vector<std::string> violations;
    const bool is_game = c.command == "game" || c.command == "sweep";
    if (c.command == "estimate" || c.command == "bench-variance" ||
        c.command == "bench-epsdelta") {
        if (c.k < 1)
            violations.push_back("k: must be >= 1");
    }
    if (c.command == "bench-variance" || c.command == "bench-epsdelta") {
        if (c.trials < 2)
            violations.push_back("trials: must be >= 2");
    }
    if (c.command == "bench-epsdelta" && !(c.epsilon > 0.0))
        violations.push_back("epsilon: must be > 0");
    if (is_game) {
        if (!(c.epsilon > 0.0 && c.epsilon < 1.0 / 3.0))
            violations.push_back("epsilon: game mode requires epsilon in (0, 1/3)");
        if (c.n < 1)
            violations.push_back("n: must be >= 1");
        if (c.k > c.n)
            violations.push_back("k: k <= n required");
        if (c.trials < 1)
            violations.push_back("trials: must be >= 1");
        if (c.game != 5 && c.game != 6)
            violations.push_back("game: must be 5 or 6");
    }
    if (c.delta && !(*c.delta > 0.0 && *c.delta < 0.5))
        violations.push_back("delta: must lie in (0, 0.5)");
    if (c.workers < 1)
        violations.push_back("workers: must be >= 1");
    if (c.format != "csv" && c.format != "json")
        violations.push_back("format: must be csv or json");
    return violations;
}

void apply_validation(const ExperimentConfig& c) {
    const auto violations = validate(c);
    if (violations.empty())
        return;
    std::string message = "invalid configuration";
    for (const auto& v : violations)
        message += "\n  " + v;
    fail(kExitValidation, message);
}

// The orthogonal and configured estimators need k <= n; check once the matrix
// dimension is known so the violation names the constraint.
void check_query_budget(const std::string& estimator_spec, std::uint64_t k,
                        std::size_t n) {
    const bool bounded =
        estimator_spec == "orthogonal" || estimator_spec.rfind("configured:", 0) == 0;
    if (bounded && k > n)
        fail(kExitValidation, "invalid configuration\n  k: k <= n required for the " +
                                  estimator_spec + " estimator (n = " + std::to_string(n) +
                                  ")");
}

// ---- report emission ------------------------------------------------------

struct ReportRow {
    std::string estimator_id;
    std::string matrix_id;
    tk_report rep{};
};

const char* kReportHeader =
    "estimator_id,matrix_id,n,k,trials,seed,mean,variance,stderr_mean,stderr_var,"
    "success_rate,epsilon";

std::string report_csv_row(const ReportRow& r) {
    std::ostringstream os;
    os << r.estimator_id << ',' << r.matrix_id << ',' << r.rep.n << ',' << r.rep.k << ','
       << r.rep.trials << ',' << r.rep.seed << ',' << fmt(r.rep.mean) << ','
       << fmt(r.rep.variance) << ',' << fmt(r.rep.stderr_mean) << ','
       << fmt(r.rep.stderr_variance) << ',' << fmt_opt(r.rep.success_rate) << ','
       << fmt_opt(r.rep.epsilon);
    return os.str();
}

nlohmann::ordered_json report_json_row(const ReportRow& r) {
    nlohmann::ordered_json j;
    j["estimator_id"] = r.estimator_id;
    j["matrix_id"] = r.matrix_id;
    j["n"] = r.rep.n;
    j["k"] = r.rep.k;
    j["trials"] = r.rep.trials;
    j["seed"] = r.rep.seed;
    j["mean"] = r.rep.mean;
    j["variance"] = r.rep.variance;
    j["stderr_mean"] = r.rep.stderr_mean;
    j["stderr_var"] = r.rep.stderr_variance;
    if (r.rep.success_rate >= 0.0)
        j["success_rate"] = r.rep.success_rate;
    else
        j["success_rate"] = nullptr;
    if (r.rep.epsilon >= 0.0)
        j["epsilon"] = r.rep.epsilon;
    else
        j["epsilon"] = nullptr;
    return j;
}

const char* kGameHeader =
    "game,n,k,epsilon,delta,trials,success_rate,stderr,analytic_ceiling,seed";

std::string game_csv_row(const tk_game_report& g) {
    std::ostringstream os;
    os << g.game << ',' << g.n << ',' << g.k << ',' << fmt(g.epsilon) << ','
       << fmt_opt(g.delta) << ',' << g.trials << ',' << fmt(g.success_rate) << ','
       << fmt(g.stderr_success) << ',' << fmt(g.analytic_ceiling) << ',' << g.seed;
    return os.str();
}

nlohmann::ordered_json game_json_row(const tk_game_report& g) {
    nlohmann::ordered_json j;
    j["game"] = g.game;
    j["n"] = g.n;
    j["k"] = g.k;
    j["epsilon"] = g.epsilon;
    if (g.delta >= 0.0)
        j["delta"] = g.delta;
    else
        j["delta"] = nullptr;
    j["trials"] = g.trials;
    j["success_rate"] = g.success_rate;
    j["stderr"] = g.stderr_success;
    j["analytic_ceiling"] = g.analytic_ceiling;
    j["seed"] = g.seed;
    return j;
}

void write_output(const ExperimentConfig& c, const std::string& text) {
    if (c.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(c.out_path, std::ios::binary);
    if (!out)
        fail(kExitRuntime, "cannot open output path '" + c.out_path + "'");
    out << text;
    if (!out)
        fail(kExitRuntime, "failed writing output path '" + c.out_path + "'");
}

void emit_reports(const ExperimentConfig& c, const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    if (c.format == "csv") {
        os << kReportHeader << '\n';
        for (const auto& r : rows)
            os << report_csv_row(r) << '\n';
    } else {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : rows)
            arr.push_back(report_json_row(r));
        os << arr.dump(2) << '\n';
    }
    write_output(c, os.str());
}

void emit_games(const ExperimentConfig& c, const std::vector<tk_game_report>& rows) {
    std::ostringstream os;
    if (c.format == "csv") {
        os << kGameHeader << '\n';
        for (const auto& g : rows)
            os << game_csv_row(g) << '\n';
    } else {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& g : rows)
            arr.push_back(game_json_row(g));
        os << arr.dump(2) << '\n';
    }
    write_output(c, os.str());
}

// ---- grid parsing ----------------------------------------------------------

std::vector<double> parse_real_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            fail(kExitValidation, std::string(what) + ": bad number '" + item + "'");
        }
    }
    if (out.empty())
        fail(kExitValidation, std::string(what) + ": empty list");
    return out;
}

// "lo:hi[:step]" or a comma list
std::vector<std::uint64_t> parse_k_grid(const std::string& text) {
    std::vector<std::uint64_t> out;
    if (text.find(':') != std::string::npos) {
        std::uint64_t lo = 0, hi = 0, step = 1;
        std::stringstream ss(text);
        std::string part;
        std::vector<std::string> parts;
        while (std::getline(ss, part, ':'))
            parts.push_back(part);
        try {
            if (parts.size() < 2 || parts.size() > 3)
                throw std::invalid_argument("");
            lo = std::stoull(parts[0]);
            hi = std::stoull(parts[1]);
            if (parts.size() == 3)
                step = std::stoull(parts[2]);
        } catch (const std::exception&) {
            fail(kExitValidation, "k-grid: expected lo:hi[:step] or a comma list");
        }
        if (step == 0 || lo == 0 || hi < lo)
            fail(kExitValidation, "k-grid: need 1 <= lo <= hi and step >= 1");
        for (std::uint64_t k = lo; k <= hi; k += step)
            out.push_back(k);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoull(item));
        } catch (const std::exception&) {
            fail(kExitValidation, "k-grid: bad integer '" + item + "'");
        }
    }
    if (out.empty())
        fail(kExitValidation, "k-grid: empty list");
    return out;
}

// ---- config file merging -----------------------------------------------

// JSON config files mirror the long option names; command-line flags win.
void merge_config_file(CLI::App* sub, const std::string& path, ExperimentConfig& c) {
    std::ifstream in(path);
    if (!in)
        fail(kExitValidation, "cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(kExitValidation, "config file parse error: " + std::string(e.what()));
    }
    auto unset = [&](const char* flag) {
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        return opt != nullptr && opt->count() == 0;
    };
    auto get_u64 = [&](const char* key, std::uint64_t& field, const char* flag) {
        if (j.contains(key) && unset(flag))
            field = j.at(key).get<std::uint64_t>();
    };
    auto get_str = [&](const char* key, std::string& field, const char* flag) {
        if (j.contains(key) && unset(flag))
            field = j.at(key).get<std::string>();
    };
    try {
        get_str("matrix", c.matrix_spec, "--matrix");
        get_str("estimator", c.estimator_spec, "--estimator");
        if (j.contains("n") && unset("--n")) {
            c.n = j.at("n").get<std::uint64_t>();
            c.n_from_config = true;
        }
        get_u64("k", c.k, "--k");
        get_u64("trials", c.trials, "--trials");
        get_u64("seed", c.seed, "--seed");
        get_u64("stream", c.stream, "--stream");
        get_u64("draws", c.draws, "--draws");
        if (j.contains("epsilon") && unset("--epsilon")) {
            c.epsilon = j.at("epsilon").get<double>();
            c.has_epsilon = true;
        }
        if (j.contains("delta") && unset("--delta"))
            c.delta = j.at("delta").get<double>();
        if (j.contains("workers") && unset("--workers"))
            c.workers = j.at("workers").get<int>();
        if (j.contains("game") && unset("--game"))
            c.game = j.at("game").get<int>();
        get_str("epsilons", c.epsilons, "--epsilons");
        get_str("k-grid", c.k_grid, "--k-grid");
        get_str("out", c.out_path, "--out");
        get_str("format", c.format, "--format");
    } catch (const nlohmann::json::exception& e) {
        fail(kExitValidation, "config file field error: " + std::string(e.what()));
    }
}

// ---- commands -------------------------------------------------------------

MatrixHandle make_matrix(const ExperimentConfig& c) {
    MatrixHandle m;
    check(tk_matrix_create(c.matrix_spec.c_str(), c.seed, &m.ptr),
          "matrix '" + c.matrix_spec + "'");
    return m;
}

EstimatorHandle make_estimator(const ExperimentConfig& c) {
    EstimatorHandle e;
    check(tk_estimator_create(c.estimator_spec.c_str(), c.k, &e.ptr),
          "estimator '" + c.estimator_spec + "'");
    return e;
}

int run_estimate(const ExperimentConfig& c) {
    MatrixHandle m = make_matrix(c);
    size_t n = 0;
    check(tk_matrix_dim(m.ptr, &n), "matrix");
    check_query_budget(c.estimator_spec, c.k, n);
    EstimatorHandle e = make_estimator(c);
    double value = 0.0;
    check(tk_estimate(e.ptr, m.ptr, c.seed, c.stream, &value), "estimate");
    std::cout << fmt(value) << '\n';
    std::cerr << "estimate " << c.estimator_spec << " k=" << c.k << " on " << c.matrix_spec
              << " seed=" << c.seed << " -> " << fmt(value) << '\n';
    return 0;
}

int run_bench_variance(const ExperimentConfig& c) {
    MatrixHandle m = make_matrix(c);
    size_t n = 0;
    check(tk_matrix_dim(m.ptr, &n), "matrix");
    check_query_budget(c.estimator_spec, c.k, n);
    EstimatorHandle e = make_estimator(c);
    ReportRow row;
    row.estimator_id = c.estimator_spec;
    row.matrix_id = c.matrix_spec;
    check(tk_run_trials(e.ptr, m.ptr, c.trials, c.seed, c.stream, c.workers, &row.rep),
          "bench-variance");
    emit_reports(c, {row});
    std::cerr << "bench-variance " << c.estimator_spec << " k=" << c.k << " on "
              << c.matrix_spec << ": mean=" << fmt(row.rep.mean)
              << " variance=" << fmt(row.rep.variance) << " (" << c.trials << " trials)\n";
    return 0;
}

int run_bench_epsdelta(const ExperimentConfig& c) {
    MatrixHandle m = make_matrix(c);
    size_t n = 0;
    check(tk_matrix_dim(m.ptr, &n), "matrix");
    check_query_budget(c.estimator_spec, c.k, n);
    EstimatorHandle e = make_estimator(c);
    ReportRow row;
    row.estimator_id = c.estimator_spec;
    row.matrix_id = c.matrix_spec;
    check(tk_eps_delta_success(e.ptr, m.ptr, c.epsilon, c.trials, c.seed, c.stream,
                               c.workers, &row.rep),
          "bench-epsdelta");
    emit_reports(c, {row});
    std::cerr << "bench-epsdelta " << c.estimator_spec << " k=" << c.k << " on "
              << c.matrix_spec << ": success=" << fmt(row.rep.success_rate)
              << " at epsilon=" << fmt(c.epsilon) << '\n';
    return 0;
}

// The analytic ceilings use Gaussian surrogates whose error grows like k/n;
// flag runs outside the k << n regime the defaults are tuned for.
void warn_outside_regime(std::uint64_t k, std::uint64_t n) {
    if (k * 100 > n)
        std::cerr << "warning: k = " << k << ", n = " << n
                  << " leaves the k << n regime; the analytic ceiling carries an O(k/n) "
                     "surrogate error\n";
}

int run_game(const ExperimentConfig& c) {
    warn_outside_regime(c.k, c.n);
    tk_game_report rep{};
    check(tk_game_run(c.game, c.epsilon, c.n, c.k, c.trials, c.seed, c.workers, &rep),
          "game");
    emit_games(c, {rep});
    std::cerr << "game " << c.game << " epsilon=" << fmt(c.epsilon) << " n=" << c.n
              << " k=" << c.k << ": success=" << fmt(rep.success_rate)
              << " ceiling=" << fmt(rep.analytic_ceiling) << '\n';
    return 0;
}

int run_sweep(const ExperimentConfig& c) {
    const auto epsilons = parse_real_list(c.epsilons, "epsilons");
    std::vector<tk_game_report> rows;
    if (c.delta) {
        // analytic query-complexity sweep: one row per epsilon at k = k_star
        for (double eps : epsilons) {
            size_t k_star = 0;
            double success = 0.0;
            check(tk_k_star(eps, *c.delta, &k_star, &success), "sweep k_star");
            tk_game_report rep{};
            rep.game = c.game;
            rep.n = c.n;
            rep.k = k_star;
            rep.epsilon = eps;
            rep.delta = *c.delta;
            rep.trials = 0;
            rep.success_rate = success;
            rep.stderr_success = 0.0;
            rep.analytic_ceiling = success;
            rep.seed = c.seed;
            rows.push_back(rep);
            std::cerr << "sweep k_star epsilon=" << fmt(eps) << " delta=" << fmt(*c.delta)
                      << " -> k=" << k_star << '\n';
        }
        emit_games(c, rows);
        return 0;
    }
    const auto ks = parse_k_grid(c.k_grid);
    if (!ks.empty())
        warn_outside_regime(*std::max_element(ks.begin(), ks.end()), c.n);
    for (double eps : epsilons) {
        if (!(eps > 0.0 && eps < 1.0 / 3.0))
            fail(kExitValidation, "epsilons: game mode requires epsilon in (0, 1/3)");
        for (std::uint64_t k : ks) {
            if (k > c.n)
                fail(kExitValidation, "k-grid: k <= n required");
            tk_game_report rep{};
            check(tk_game_run(c.game, eps, c.n, k, c.trials, c.seed, c.workers, &rep),
                  "sweep cell");
            rows.push_back(rep);
        }
    }
    emit_games(c, rows);
    std::cerr << "sweep game " << c.game << ": " << rows.size() << " cells, " << c.trials
              << " rounds each\n";
    return 0;
}

int run_haar_check(const ExperimentConfig& c) {
    tk_haar_report rep{};
    check(tk_haar_check(c.n, c.draws, c.seed, &rep), "haar-check");
    const bool pass = rep.max_offdiagonal <= 1e-10 && rep.max_unit_error <= 1e-10 &&
                      rep.max_det_error <= 1e-9 && rep.ks_statistic <= rep.ks_critical;
    std::ostringstream os;
    os << "orthogonality_residual " << fmt(rep.max_offdiagonal) << '\n'
       << "unit_norm_error " << fmt(rep.max_unit_error) << '\n'
       << "det_error " << fmt(rep.max_det_error) << '\n'
       << "ks_first_coordinate " << fmt(rep.ks_statistic) << " critical_1pct "
       << fmt(rep.ks_critical) << '\n'
       << "haar-check " << (pass ? "PASS" : "FAIL") << '\n';
    write_output(c, os.str());
    return pass ? 0 : kExitRuntime;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tracekit: stochastic trace estimation experiments"};
    app.require_subcommand(1);

    ExperimentConfig c;
    std::string config_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", c.seed, "base seed (default 1; never wall clock)");
        sub->add_option("--workers", c.workers, "worker threads (results are identical for any count)");
        sub->add_option("--out", c.out_path, "output path (stdout when omitted)");
        sub->add_option("--format", c.format, "csv|json");
        sub->add_option("--config", config_path, "JSON config file mirroring the flags");
        return sub;
    };

    CLI::App* estimate = add_common(app.add_subcommand("estimate", "run one trace estimate"));
    estimate->add_option("--matrix", c.matrix_spec, "matrix spec");
    estimate->add_option("--estimator", c.estimator_spec, "estimator spec");
    estimate->add_option("--k", c.k, "query budget");
    estimate->add_option("--stream", c.stream, "stream id");

    CLI::App* bench_var =
        add_common(app.add_subcommand("bench-variance", "empirical variance of an estimator"));
    bench_var->add_option("--matrix", c.matrix_spec, "matrix spec");
    bench_var->add_option("--estimator", c.estimator_spec, "estimator spec");
    bench_var->add_option("--k", c.k, "query budget");
    bench_var->add_option("--trials", c.trials, "Monte Carlo trials");
    bench_var->add_option("--stream", c.stream, "stream id");

    CLI::App* bench_eps = add_common(
        app.add_subcommand("bench-epsdelta", "multiplicative-window success rate"));
    bench_eps->add_option("--matrix", c.matrix_spec, "matrix spec");
    bench_eps->add_option("--estimator", c.estimator_spec, "estimator spec");
    bench_eps->add_option("--k", c.k, "query budget");
    bench_eps->add_option("--trials", c.trials, "Monte Carlo trials");
    bench_eps->add_option("--epsilon", c.epsilon, "relative window")->required();
    bench_eps->add_option("--stream", c.stream, "stream id");

    CLI::App* game = add_common(
        app.add_subcommand("game", "play a trace-distinguishing game"));
    game->add_option("--game", c.game, "5 (rank-2 strong queries) or 6 (rank-1)");
    game->add_option("--epsilon", c.epsilon, "separation parameter, (0, 1/3)");
    game->add_option("--n", c.n, "ambient dimension");
    game->add_option("--k", c.k, "strong queries per round (0 = no information)");
    game->add_option("--trials", c.trials, "game rounds");

    CLI::App* sweep = add_common(app.add_subcommand(
        "sweep", "game sweep over (epsilon, k); with --delta, analytic k_star per epsilon"));
    sweep->add_option("--game", c.game, "game id (6)");
    sweep->add_option("--epsilons", c.epsilons, "comma list of epsilon values");
    sweep->add_option("--k-grid", c.k_grid, "lo:hi[:step] or comma list");
    sweep->add_option("--n", c.n, "ambient dimension");
    sweep->add_option("--trials", c.trials, "rounds per cell");
    sweep->add_option("--delta", [&c](const std::vector<std::string>& v) {
        try {
            std::size_t used = 0;
            const double parsed = std::stod(v.at(0), &used);
            if (used != v.at(0).size())
                return false;
            c.delta = parsed;
        } catch (const std::exception&) {
            return false;
        }
        return true;
    }, "failure budget for the analytic k_star sweep");

    CLI::App* haar = add_common(app.add_subcommand("haar-check", "sampler diagnostics"));
    haar->add_option("--n", c.n, "matrix dimension");
    haar->add_option("--draws", c.draws, "number of sampled matrices");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        c.command = sub->get_name();
        if (!config_path.empty())
            merge_config_file(sub, config_path, c);
        if (sub == bench_eps)
            c.has_epsilon = true;
        // per-command dimension defaults: games live in the k << n regime,
        // the sampler diagnostic in a cheap one
        const CLI::Option* n_opt = sub->get_option_no_throw("--n");
        if (n_opt != nullptr && n_opt->count() == 0 && !c.n_from_config) {
            if (sub == game || sub == sweep)
                c.n = 10000;
            else if (sub == haar)
                c.n = 8;
        }
        if ((c.command == "estimate" || c.command == "bench-variance" ||
             c.command == "bench-epsdelta") &&
            (c.matrix_spec.empty() || c.estimator_spec.empty()))
            fail(kExitValidation, "invalid configuration\n  matrix/estimator: required");
        apply_validation(c);

        if (sub == estimate)
            return run_estimate(c);
        if (sub == bench_var)
            return run_bench_variance(c);
        if (sub == bench_eps)
            return run_bench_epsdelta(c);
        if (sub == game)
            return run_game(c);
        if (sub == sweep)
            return run_sweep(c);
        return run_haar_check(c);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << '\n';
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
