#include "rscm/msepoly.hpp"

#include "rscm/errors.hpp"
#include "rscm/kernels.hpp"

#include <json.hpp>

#include <cmath>

namespace rscm {

std::pair<Matrix, Matrix> identity_split(const Matrix& a) {
    if (!a.square()) throw InvalidInputError("identity_split: matrix must be square");
    const std::size_t p = a.rows();
    const double mean_diag = trace(a) / static_cast<double>(p);
    Matrix id_part(p, p);
    for (std::size_t i = 0; i < p; ++i) id_part(i, i) = mean_diag;
    Matrix rest = a;
    for (std::size_t i = 0; i < p; ++i) rest(i, i) -= mean_diag;
    return {std::move(id_part), std::move(rest)};
}

namespace {

// Second-order expectations shared by every coefficient: with
// S = sum_j pi_j S_j and I_A = (tr(A)/p) I,
//   a_j     = E ||S_j||^2         b_j    = E ||I_{S_j}||^2
//   es2     = E ||S||^2           eis2   = E ||I_S||^2
//   esks    = E <S_k, S>          eiskis = E <I_{S_k}, I_S>
//   tbar    = tr(E S)             mbar   = <M_k, E S>
// Independence across classes turns every cross term into a product of
// expected traces or an inner product of true covariances.
struct Expectations {
    std::size_t k_count = 0;
    double p = 0;
    std::vector<double> pi, a, b, t;
    double es2 = 0, eis2 = 0, tbar = 0;

    explicit Expectations(const PopulationMoments& m) {
        k_count = m.num_classes();
        p = static_cast<double>(m.dim);
        pi.resize(k_count);
        a.resize(k_count);
        b.resize(k_count);
        t.resize(k_count);
        for (std::size_t j = 0; j < k_count; ++j) {
            pi[j] = m.weight(j);
            const ScmNorms norms =
                expected_scm_norms(m.eta[j], m.gamma[j], m.kappa[j], m.counts[j], m.dim);
            a[j] = norms.frob_sq;
            b[j] = norms.trace_part_sq;
            t[j] = p * m.eta[j];
            tbar += pi[j] * t[j];
        }
        for (std::size_t i = 0; i < k_count; ++i) {
            es2 += pi[i] * pi[i] * a[i];
            eis2 += pi[i] * pi[i] * b[i];
            for (std::size_t j = 0; j < k_count; ++j) {
                if (j == i) continue;
                es2 += pi[i] * pi[j] * m.inner(i, j);
                eis2 += pi[i] * pi[j] * t[i] * t[j] / p;
            }
        }
    }

    double esks(const PopulationMoments& m, std::size_t k) const {
        double v = pi[k] * a[k];
        for (std::size_t j = 0; j < k_count; ++j)
            if (j != k) v += pi[j] * m.inner(k, j);
        return v;
    }

    double eiskis(std::size_t k) const {
        double v = pi[k] * b[k];
        for (std::size_t j = 0; j < k_count; ++j)
            if (j != k) v += pi[j] * t[k] * t[j] / p;
        return v;
    }

    double mbar(const PopulationMoments& m, std::size_t k) const {
        double v = 0;
        for (std::size_t j = 0; j < k_count; ++j) v += pi[j] * m.inner(k, j);
        return v;
    }
};

void validate_class_index(const PopulationMoments& m, std::size_t k) {
    if (m.num_classes() == 0) throw InvalidInputError("coefficients: no classes");
    if (k >= m.num_classes())
        throw InvalidInputError("coefficients: class index out of range");
    if (m.dim == 0) throw InvalidInputError("coefficients: dimension is zero");
    if (m.inner.rows() != m.num_classes() || m.inner.cols() != m.num_classes())
        throw InvalidInputError("coefficients: inner product matrix has wrong shape");
}

} // namespace

MsePolynomial coefficients_full(const PopulationMoments& m, std::size_t k) {
    validate_class_index(m, k);
    const Expectations e(m);
    const double p = e.p;
    const double es2 = e.es2, eis2 = e.eis2, tbar = e.tbar;
    const double esks = e.esks(m, k);
    const double eiskis = e.eiskis(k);
    const double mbar = e.mbar(m, k);
    const double ak = e.a[k], bk = e.b[k], tk = e.t[k];
    const double ipkk = m.inner(k, k);

    MsePolynomial c;
    c.kind = PolyKind::Full;
    c.c20 = es2 - eis2;
    c.c22 = (ak - 2.0 * esks + es2) - (bk - 2.0 * eiskis + eis2);
    c.c21 = 2.0 * ((esks - eiskis) - c.c20);
    c.c02 = bk - 2.0 * eiskis + eis2;
    c.c11 = -2.0 * ((ipkk - tk * tk / p) - (mbar - tbar * tk / p));
    c.c10 = -2.0 * (mbar - tbar * tk / p);
    c.c01 = 2.0 * (eiskis - tk * tk / p - eis2 + tbar * tk / p);
    c.c00 = eis2 - 2.0 * tbar * tk / p + ipkk;
    c.normalization = ipkk;
    return c;
}

MsePolynomial coefficients_streamlined(const PopulationMoments& m, std::size_t k,
                                       TraceTarget target) {
    validate_class_index(m, k);
    const Expectations e(m);
    const double p = e.p;
    const double es2 = e.es2, eis2 = e.eis2, tbar = e.tbar;
    const double esks = e.esks(m, k);
    const double eiskis = e.eiskis(k);
    const double mbar = e.mbar(m, k);
    const double bk = e.b[k], tk = e.t[k];
    const double ipkk = m.inner(k, k);

    MsePolynomial c;
    c.kind = PolyKind::Streamlined;
    c.c22 = e.a[k] - 2.0 * esks + es2;
    if (target == TraceTarget::PooledTrace) {
        c.c21 = 2.0 * ((esks - es2) - (eiskis - eis2));
        c.c20 = es2 - eis2;
        c.c11 = 2.0 * ((eiskis - eis2) - (ipkk - mbar));
        c.c10 = 2.0 * (tbar * tk / p - mbar);
        c.c00 = eis2 - 2.0 * tbar * tk / p + ipkk;
    } else {
        c.c21 = 2.0 * (esks - es2 - (bk - eiskis));
        c.c20 = es2 - 2.0 * eiskis + bk;
        c.c11 = 2.0 * ((bk - eiskis) - (ipkk - mbar));
        c.c10 = 2.0 * (eiskis - bk - mbar + tk * tk / p);
        c.c00 = bk - 2.0 * tk * tk / p + ipkk;
    }
    c.normalization = ipkk;
    return c;
}

double evaluate(const MsePolynomial& poly, double alpha, double beta) {
    const double a = alpha, b = beta;
    return a * a * (b * b * poly.c22 + b * poly.c21 + poly.c20) + b * b * poly.c02 +
           a * b * poly.c11 + a * poly.c10 + b * poly.c01 + poly.c00;
}

double evaluate_nmse(const MsePolynomial& poly, double alpha, double beta) {
    if (!(poly.normalization > 0.0))
        throw NumericalError("evaluate_nmse: normalization must be positive");
    return evaluate(poly, alpha, beta) / poly.normalization;
}

std::string polynomial_to_json(const MsePolynomial& poly) {
    nlohmann::json j;
    j["kind"] = (poly.kind == PolyKind::Full) ? "full" : "streamlined";
    j["coefficients"] = {{"c22", poly.c22}, {"c21", poly.c21}, {"c20", poly.c20},
                         {"c02", poly.c02}, {"c11", poly.c11}, {"c10", poly.c10},
                         {"c01", poly.c01}, {"c00", poly.c00}};
    j["normalization"] = poly.normalization;
    return j.dump(2);
}

MsePolynomial polynomial_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInputError(std::string("polynomial: invalid JSON: ") + e.what());
    }
    MsePolynomial poly;
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "full") poly.kind = PolyKind::Full;
        else if (kind == "streamlined") poly.kind = PolyKind::Streamlined;
        else throw InvalidInputError("polynomial: unknown kind: " + kind);
        const auto& c = j.at("coefficients");
        poly.c22 = c.at("c22").get<double>();
        poly.c21 = c.at("c21").get<double>();
        poly.c20 = c.at("c20").get<double>();
        poly.c02 = c.at("c02").get<double>();
        poly.c11 = c.at("c11").get<double>();
        poly.c10 = c.at("c10").get<double>();
        poly.c01 = c.at("c01").get<double>();
        poly.c00 = c.at("c00").get<double>();
        poly.normalization = j.at("normalization").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInputError(std::string("polynomial: missing or malformed field: ") +
                                e.what());
    }
    return poly;
}

OracleEstimate mse_oracle(const std::vector<PopulationSpec>& specs, std::size_t k,
                          double alpha, double beta, std::size_t trials,
                          std::uint64_t seed, PolyKind kind, TraceTarget target) {
    if (specs.empty()) throw InvalidInputError("mse_oracle: no populations");
    if (k >= specs.size()) throw InvalidInputError("mse_oracle: class index out of range");
    if (trials < 2) throw InvalidInputError("mse_oracle: need at least 2 trials");
    if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0))
        throw InvalidInputError("mse_oracle: tuning pair must lie in [0,1]^2");

    std::vector<PopulationSampler> samplers;
    samplers.reserve(specs.size());
    double total = 0;
    for (const auto& s : specs) {
        if (s.count < 2) throw InvalidInputError("mse_oracle: population count must be >= 2");
        samplers.emplace_back(s);
        total += static_cast<double>(s.count);
    }
    const Matrix& truth = specs[k].covariance;
    const std::size_t p = truth.rows();

    std::vector<double> errs(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        RngStream rng = RngStream::derive(seed, t);
        Matrix pooled(p, p);
        Matrix target_scm; // S_k of the class under study
        for (std::size_t j = 0; j < specs.size(); ++j) {
            const Matrix samples = samplers[j].draw(specs[j].count, rng);
            Matrix s = scm(samples);
            add_scaled(pooled, static_cast<double>(specs[j].count) / total, s);
            if (j == k) target_scm = std::move(s);
        }
        Matrix partial = lincomb(beta, target_scm, 1.0 - beta, pooled);
        double tr_target;
        if (kind == PolyKind::Full) tr_target = trace(partial);
        else tr_target = trace(target == TraceTarget::PooledTrace ? pooled : target_scm);
        Matrix est = partial;
        scale_inplace(est, alpha);
        const double load = (1.0 - alpha) * tr_target / static_cast<double>(p);
        for (std::size_t i = 0; i < p; ++i) est(i, i) += load;
        errs[t] = kernels::dist_sq(est.data(), truth.data(), est.size());
    }

    OracleEstimate out{0.0, 0.0};
    for (double e : errs) out.mean += e;
    out.mean /= static_cast<double>(trials);
    double ss = 0;
    for (double e : errs) ss += (e - out.mean) * (e - out.mean);
    out.std_error = std::sqrt(ss / static_cast<double>(trials - 1) /
                              static_cast<double>(trials));
    return out;
}

} // namespace rscm
