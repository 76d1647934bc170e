#include "rscm/synth.hpp"

#include "rscm/errors.hpp"
#include "rscm/kernels.hpp"
#include "rscm/linalg.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace rscm {

Matrix make_covariance(CovKind kind, double rho, std::size_t p) {
    if (p == 0) throw InvalidInputError("make_covariance: dimension must be positive");
    if (!(rho >= 0.0 && rho < 1.0))
        throw InvalidInputError("make_covariance: rho must lie in [0, 1)");
    Matrix m(p, p);
    if (kind == CovKind::Ar1) {
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j)
                m(i, j) = std::pow(rho, static_cast<double>(i > j ? i - j : j - i));
    } else {
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) m(i, j) = (i == j) ? 1.0 : rho;
    }
    return m;
}

namespace {

void validate_spec(const PopulationSpec& spec) {
    if (!spec.covariance.square())
        throw InvalidInputError("population: covariance must be square and non-empty");
    // An empty mean stands for the origin.
    if (!spec.mean.empty() && spec.mean.size() != spec.covariance.rows())
        throw InvalidInputError("population: mean length must match covariance dimension");
    if (!(spec.dof > 4.0))
        throw InvalidInputError("population: dof must exceed 4 (finite fourth moments)");
}

} // namespace

TheoreticalMoments theoretical_moments(const PopulationSpec& spec) {
    validate_spec(spec);
    const double p = static_cast<double>(spec.covariance.rows());
    const double tr = trace(spec.covariance);
    if (!(tr > 0.0)) throw InvalidInputError("population: covariance trace must be positive");
    TheoreticalMoments tm;
    tm.eta = tr / p;
    tm.gamma = p * frobenius_sq(spec.covariance) / (tr * tr);
    tm.kappa = std::isinf(spec.dof) ? 0.0 : 2.0 / (spec.dof - 4.0);
    return tm;
}

PopulationSampler::PopulationSampler(PopulationSpec spec) : spec_(std::move(spec)) {
    validate_spec(spec_);
    if (spec_.mean.empty()) spec_.mean.assign(spec_.covariance.rows(), 0.0);
    chol_ = cholesky(spec_.covariance);
}

Matrix PopulationSampler::draw(std::size_t n, RngStream& rng) const {
    if (n == 0) throw InvalidInputError("draw: sample count must be positive");
    const std::size_t p = spec_.mean.size();
    Matrix out(n, p);
    Vector z(p);
    const bool heavy = !std::isinf(spec_.dof);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < p; ++j) z[j] = rng.normal();
        double s = 1.0;
        if (heavy) s = std::sqrt((spec_.dof - 2.0) / rng.chi_squared(spec_.dof));
        double* row = out.row(r);
        for (std::size_t i = 0; i < p; ++i)
            row[i] = spec_.mean[i] + s * kernels::dot(chol_.row(i), z.data(), i + 1);
    }
    return out;
}

Matrix sample_population(const PopulationSpec& spec, std::size_t n, RngStream& rng) {
    return PopulationSampler(spec).draw(n, rng);
}

SetupName parse_setup_name(std::string_view s) {
    if (s == "A" || s == "a") return SetupName::A;
    if (s == "B" || s == "b") return SetupName::B;
    if (s == "C" || s == "c") return SetupName::C;
    if (s == "D" || s == "d") return SetupName::D;
    throw InvalidInputError("unknown setup name: " + std::string(s));
}

const char* setup_name_str(SetupName name) {
    switch (name) {
        case SetupName::A: return "A";
        case SetupName::B: return "B";
        case SetupName::C: return "C";
        case SetupName::D: return "D";
    }
    return "?";
}

bool setup_is_randomized(SetupName name) { return name == SetupName::D; }

namespace {

Vector draw_mean(std::size_t p, RngStream& rng) {
    Vector m(p);
    for (auto& v : m) v = rng.normal();
    return m;
}

} // namespace

std::vector<PopulationSpec> make_setup(SetupName name, std::size_t p, RngStream& mean_rng) {
    if (p == 0) throw InvalidInputError("make_setup: dimension must be positive");
    if (name == SetupName::D)
        throw InvalidInputError("make_setup: setup D is randomized per trial; "
                                "use draw_randomized_setup");
    std::vector<PopulationSpec> specs(4);
    const double rhos[4] = {0.2, 0.3, 0.4, 0.5};
    const std::size_t ns[4] = {25, 50, 75, 100};
    for (std::size_t k = 0; k < 4; ++k) {
        PopulationSpec& s = specs[k];
        switch (name) {
            case SetupName::A:
                s.covariance = make_covariance(CovKind::Ar1, rhos[k], p);
                s.dof = 8.0;
                s.count = ns[k];
                break;
            case SetupName::B:
                s.covariance = make_covariance(CovKind::Cs, rhos[k], p);
                s.dof = 8.0;
                s.count = ns[k];
                break;
            case SetupName::C:
                s.covariance = make_covariance(k < 2 ? CovKind::Ar1 : CovKind::Cs,
                                               k < 2 ? 0.6 : 0.1, p);
                s.dof = (k % 2 == 0) ? 12.0 : 8.0;
                s.count = 100;
                break;
            case SetupName::D:
                break;
        }
        s.mean = draw_mean(p, mean_rng);
    }
    return specs;
}

std::vector<PopulationSpec> draw_randomized_setup(std::size_t p, RngStream& rng) {
    if (p == 0) throw InvalidInputError("draw_randomized_setup: dimension must be positive");
    std::vector<PopulationSpec> specs(4);
    for (auto& s : specs) {
        s.count = static_cast<std::size_t>(rng.uniform_int(10, 200));
        s.dof = static_cast<double>(rng.uniform_int(5, 12));
        const CovKind kind = (rng.uniform_int(0, 1) == 0) ? CovKind::Ar1 : CovKind::Cs;
        const double rho = rng.uniform(0.0, 0.9);
        s.covariance = make_covariance(kind, rho, p);
        s.mean = draw_mean(p, rng);
    }
    return specs;
}

namespace {

using nlohmann::json;

Matrix matrix_from_json(const json& rows) {
    if (!rows.is_array() || rows.empty())
        throw InvalidInputError("population config: cov matrix must be a non-empty array of rows");
    const std::size_t p = rows.size();
    Matrix m(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || row.size() != p)
            throw InvalidInputError("population config: cov matrix must be square");
        for (std::size_t j = 0; j < p; ++j) {
            if (!row[j].is_number())
                throw InvalidInputError("population config: cov matrix entries must be numbers");
            m(i, j) = row[j].get<double>();
        }
    }
    return m;
}

PopulationSpec population_from_json(const json& entry, std::size_t top_dim) {
    if (!entry.is_object()) throw InvalidInputError("population config: entry must be an object");
    PopulationSpec spec;

    if (!entry.contains("cov")) throw InvalidInputError("population config: entry lacks \"cov\"");
    const json& cov = entry["cov"];
    if (cov.is_object() && cov.contains("matrix")) {
        spec.covariance = matrix_from_json(cov["matrix"]);
    } else if (cov.is_object() && cov.contains("kind")) {
        std::size_t dim = top_dim;
        if (cov.contains("dim")) dim = cov["dim"].get<std::size_t>();
        else if (entry.contains("dim")) dim = entry["dim"].get<std::size_t>();
        if (dim == 0)
            throw InvalidInputError("population config: structured cov needs a \"dim\"");
        const std::string kind = cov["kind"].get<std::string>();
        if (!cov.contains("rho"))
            throw InvalidInputError("population config: structured cov needs \"rho\"");
        const double rho = cov["rho"].get<double>();
        if (kind == "ar1") spec.covariance = make_covariance(CovKind::Ar1, rho, dim);
        else if (kind == "cs") spec.covariance = make_covariance(CovKind::Cs, rho, dim);
        else throw InvalidInputError("population config: unknown cov kind: " + kind);
    } else {
        throw InvalidInputError("population config: cov must contain \"matrix\" or \"kind\"");
    }

    const std::size_t p = spec.covariance.rows();
    if (entry.contains("mean") && !entry["mean"].is_null()) {
        const json& mean = entry["mean"];
        if (!mean.is_array() || mean.size() != p)
            throw InvalidInputError("population config: mean length must match dimension");
        spec.mean.resize(p);
        for (std::size_t i = 0; i < p; ++i) spec.mean[i] = mean[i].get<double>();
    } else {
        spec.mean.assign(p, 0.0);
    }

    if (entry.contains("dof") && !entry["dof"].is_null()) {
        if (entry["dof"].is_string()) {
            if (entry["dof"].get<std::string>() != "inf")
                throw InvalidInputError("population config: dof must be a number, null, or \"inf\"");
        } else {
            spec.dof = entry["dof"].get<double>();
            if (!(spec.dof > 4.0))
                throw InvalidInputError("population config: dof must exceed 4");
        }
    }

    if (entry.contains("n")) {
        const auto n = entry["n"].get<std::int64_t>();
        if (n < 1) throw InvalidInputError("population config: n must be at least 1");
        spec.count = static_cast<std::size_t>(n);
    }
    return spec;
}

} // namespace

std::vector<PopulationSpec> populations_from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInputError(std::string("population config: invalid JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("populations") || !root["populations"].is_array() ||
        root["populations"].empty())
        throw InvalidInputError("population config: expected {\"populations\": [...]} with at "
                                "least one entry");
    std::size_t top_dim = 0;
    if (root.contains("dim")) top_dim = root["dim"].get<std::size_t>();

    std::vector<PopulationSpec> specs;
    for (const auto& entry : root["populations"])
        specs.push_back(population_from_json(entry, top_dim));

    const std::size_t p = specs.front().covariance.rows();
    for (const auto& s : specs)
        if (s.covariance.rows() != p)
            throw InvalidInputError("population config: all populations must share one dimension");
    return specs;
}

std::vector<PopulationSpec> populations_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open population config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return populations_from_json_text(ss.str());
}

} // namespace rscm
