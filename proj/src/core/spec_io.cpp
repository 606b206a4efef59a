#include "core/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "core/games.hpp"
#include "core/sampler.hpp"

namespace tracekit {

namespace {

using nlohmann::json;

// Stream ids reserved for spec-driven generation, so builtin matrices never
// collide with trial streams derived from the same seed.
constexpr std::uint64_t kPlantedStream = 0x9a7f00d5'0000'0001ULL;
constexpr std::uint64_t kRotationStream = 0x9a7f00d5'0000'0002ULL;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::size_t parse_dim(const std::string& text, const std::string& spec) {
    try {
        const long long v = std::stoll(text);
        if (v < 1)
            throw std::invalid_argument("");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument("matrix spec '" + spec + "': bad dimension '" + text + "'");
    }
}

double parse_real(const std::string& text, const std::string& spec) {
    try {
        return std::stod(text);
    } catch (const std::exception&) {
        throw std::invalid_argument("matrix spec '" + spec + "': bad number '" + text + "'");
    }
}

ImplicitMatrix offdiag_matrix(std::size_t n) {
    if (n < 2)
        throw std::invalid_argument("offdiag matrix needs n >= 2");
    Matrix m(n, n);
    const double v = 1.0 / std::sqrt(2.0);
    m(0, 1) = v;
    m(1, 0) = v;
    return ImplicitMatrix::dense(std::move(m));
}

ImplicitMatrix matrix_from_json_value(const json& j, std::uint64_t seed);

ImplicitMatrix builtin_matrix(const std::string& spec, std::uint64_t seed) {
    const auto parts = split(spec, ':');
    const std::string& kind = parts[0];
    if (kind == "identity" && parts.size() == 2) {
        return ImplicitMatrix::diagonal(std::vector<double>(parse_dim(parts[1], spec), 1.0));
    }
    if (kind == "diag-spike" && parts.size() == 2) {
        std::vector<double> d(parse_dim(parts[1], spec), 0.0);
        d[0] = 1.0;
        return ImplicitMatrix::diagonal(std::move(d));
    }
    if (kind == "diag-flat" && parts.size() == 2) {
        const std::size_t n = parse_dim(parts[1], spec);
        return ImplicitMatrix::diagonal(
            std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n))));
    }
    if (kind == "offdiag" && parts.size() == 2) {
        return offdiag_matrix(parse_dim(parts[1], spec));
    }
    if ((kind == "planted-p1" || kind == "planted-p2") && parts.size() == 3) {
        const std::size_t n = parse_dim(parts[1], spec);
        const double eps = parse_real(parts[2], spec);
        RandomSource rng(seed, kPlantedStream);
        const Hypothesis which = (kind == "planted-p1") ? Hypothesis::P1 : Hypothesis::P2;
        return sample_game5(eps, n, which, rng).matrix;
    }
    if (kind == "rotated" && parts.size() >= 3) {
        // rotated:<inner>:seed, with the rotation seed after the last colon
        const std::string rot_seed_text = parts.back();
        std::string inner_spec = spec.substr(kind.size() + 1);
        inner_spec.resize(inner_spec.size() - rot_seed_text.size() - 1);
        std::uint64_t rot_seed;
        try {
            rot_seed = static_cast<std::uint64_t>(std::stoull(rot_seed_text));
        } catch (const std::exception&) {
            throw std::invalid_argument("matrix spec '" + spec + "': bad rotation seed");
        }
        ImplicitMatrix inner = matrix_from_spec(inner_spec, seed);
        RandomSource rng(rot_seed, kRotationStream);
        Matrix q = haar_orthogonal_matrix(inner.dim(), rng);
        return ImplicitMatrix::rotated(std::move(inner), std::move(q), rot_seed);
    }
    throw std::invalid_argument("unknown matrix spec '" + spec + "'");
}

json matrix_to_json_value(const ImplicitMatrix& m) {
    json j;
    j["n"] = m.dim();
    if (const auto* diag = m.as_diagonal()) {
        j["kind"] = "diagonal";
        j["values"] = *diag;
        return j;
    }
    if (const auto* terms = m.as_planted()) {
        j["kind"] = "planted";
        json factors = json::array();
        for (const auto& t : *terms)
            factors.push_back({{"coefficient", t.coefficient}, {"direction", t.direction}});
        j["factors"] = std::move(factors);
        return j;
    }
    if (const auto* dense = m.as_dense()) {
        j["kind"] = "dense";
        json rows = json::array();
        for (std::size_t i = 0; i < m.dim(); ++i) {
            json row = json::array();
            for (std::size_t c = 0; c < m.dim(); ++c)
                row.push_back((*dense)(i, c));
            rows.push_back(std::move(row));
        }
        j["entries"] = std::move(rows);
        return j;
    }
    const auto rotated = m.as_rotated();
    j["kind"] = "rotated";
    j["inner"] = matrix_to_json_value(*rotated->inner);
    if (rotated->rotation_seed) {
        j["seed"] = *rotated->rotation_seed;
    } else {
        json rows = json::array();
        for (std::size_t i = 0; i < m.dim(); ++i) {
            json row = json::array();
            for (std::size_t c = 0; c < m.dim(); ++c)
                row.push_back((*rotated->rotation)(i, c));
            rows.push_back(std::move(row));
        }
        j["rotation"] = std::move(rows);
    }
    return j;
}

Matrix matrix_entries_from_json(const json& rows, std::size_t n, const char* what) {
    if (!rows.is_array() || rows.size() != n)
        throw std::invalid_argument(std::string("matrix json: ") + what + " must be n rows");
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || row.size() != n)
            throw std::invalid_argument(std::string("matrix json: ") + what +
                                        " rows must have n entries");
        for (std::size_t c = 0; c < n; ++c)
            m(i, c) = row[c].get<double>();
    }
    return m;
}

ImplicitMatrix matrix_from_json_value(const json& j, std::uint64_t seed) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("n"))
        throw std::invalid_argument("matrix json: expected object with 'kind' and 'n'");
    const std::string kind = j.at("kind").get<std::string>();
    const std::size_t n = j.at("n").get<std::size_t>();
    if (n == 0)
        throw std::invalid_argument("matrix json: n must be >= 1");
    if (kind == "diagonal") {
        auto values = j.at("values").get<std::vector<double>>();
        if (values.size() != n)
            throw std::invalid_argument("matrix json: diagonal needs n values");
        return ImplicitMatrix::diagonal(std::move(values));
    }
    if (kind == "dense") {
        return ImplicitMatrix::dense(matrix_entries_from_json(j.at("entries"), n, "entries"));
    }
    if (kind == "planted") {
        std::vector<PlantedTerm> terms;
        for (const auto& f : j.at("factors")) {
            PlantedTerm t;
            t.coefficient = f.at("coefficient").get<double>();
            t.direction = f.at("direction").get<std::vector<double>>();
            terms.push_back(std::move(t));
        }
        return ImplicitMatrix::planted(n, std::move(terms));
    }
    if (kind == "rotated") {
        ImplicitMatrix inner = matrix_from_json_value(j.at("inner"), seed);
        if (j.contains("seed")) {
            const auto rot_seed = j.at("seed").get<std::uint64_t>();
            RandomSource rng(rot_seed, kRotationStream);
            Matrix q = haar_orthogonal_matrix(n, rng);
            return ImplicitMatrix::rotated(std::move(inner), std::move(q), rot_seed);
        }
        return ImplicitMatrix::rotated(std::move(inner),
                                       matrix_entries_from_json(j.at("rotation"), n, "rotation"));
    }
    throw std::invalid_argument("matrix json: unknown kind '" + kind + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

ImplicitMatrix matrix_from_spec(const std::string& spec, std::uint64_t seed) {
    if (spec.empty())
        throw std::invalid_argument("empty matrix spec");
    if (spec.front() == '{')
        return matrix_from_json(spec, seed);
    if (spec.front() == '@')
        return matrix_from_json(read_file(spec.substr(1)), seed);
    return builtin_matrix(spec, seed);
}

std::string matrix_to_json(const ImplicitMatrix& m) { return matrix_to_json_value(m).dump(); }

ImplicitMatrix matrix_from_json(const std::string& json_text, std::uint64_t seed) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("matrix json: parse error: ") + e.what());
    }
    return matrix_from_json_value(j, seed);
}

LinearEstimator estimator_from_spec(const std::string& spec, std::size_t k) {
    if (spec == "rademacher")
        return LinearEstimator::rademacher(k);
    if (spec == "gaussian")
        return LinearEstimator::gaussian(k);
    if (spec == "unit")
        return LinearEstimator::unit_vector(k);
    if (spec == "orthogonal")
        return LinearEstimator::orthogonal(k);
    if (spec.rfind("configured:", 0) == 0) {
        LinearEstimator est = configured_from_json(read_file(spec.substr(11)));
        if (est.queries() != k)
            throw std::invalid_argument("configured estimator declares k=" +
                                        std::to_string(est.queries()) +
                                        " but the run requested k=" + std::to_string(k));
        return est;
    }
    throw std::invalid_argument("unknown estimator spec '" + spec + "'");
}

LinearEstimator configured_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("estimator json: parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("k") || !j.contains("mixture"))
        throw std::invalid_argument("estimator json: expected object with 'k' and 'mixture'");
    const std::size_t k = j.at("k").get<std::size_t>();
    const std::size_t pairs = k * (k - 1) / 2;
    std::vector<AngleConfiguration> mixture;
    for (const auto& entry : j.at("mixture")) {
        AngleConfiguration cfg;
        cfg.probability = entry.at("probability").get<double>();
        const auto& angles = entry.at("angles");
        if (angles.is_number())
            cfg.angles.assign(pairs, angles.get<double>());
        else
            cfg.angles = angles.get<std::vector<double>>();
        cfg.weight_over_n = entry.at("weights").get<std::vector<double>>();
        mixture.push_back(std::move(cfg));
    }
    return LinearEstimator::configured(k, std::move(mixture));
}

} // namespace tracekit
