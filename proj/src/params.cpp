#include "rscm/params.hpp"

#include "rscm/errors.hpp"
#include "rscm/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace rscm {

std::size_t PopulationMoments::total_count() const {
    std::size_t n = 0;
    for (auto c : counts) n += c;
    return n;
}

double PopulationMoments::weight(std::size_t k) const {
    return static_cast<double>(counts[k]) / static_cast<double>(total_count());
}

double PopulationMoments::tau1(std::size_t k) const {
    const double n = static_cast<double>(counts[k]);
    return 1.0 / (n - 1.0) + kappa[k] / n;
}

double PopulationMoments::tau2(std::size_t k) const {
    return kappa[k] / static_cast<double>(counts[k]);
}

double estimate_kurtosis(const Matrix& samples) {
    const std::size_t n = samples.rows(), p = samples.cols();
    if (n < 4) throw InsufficientSamplesError("estimate_kurtosis: need at least 4 samples");
    const Vector mean = sample_mean(samples);
    double sum_excess = 0.0;
    std::size_t used = 0;
    for (std::size_t j = 0; j < p; ++j) {
        double m2 = 0.0, m4 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = samples(i, j) - mean[j];
            const double d2 = d * d;
            m2 += d2;
            m4 += d2 * d2;
        }
        m2 /= static_cast<double>(n);
        m4 /= static_cast<double>(n);
        if (m2 <= 0.0) continue;
        sum_excess += m4 / (m2 * m2) - 3.0;
        ++used;
    }
    if (used == 0)
        throw NumericalError("estimate_kurtosis: every coordinate has zero variance");
    const double kappa = sum_excess / (3.0 * static_cast<double>(used));
    const double floor = -2.0 / (static_cast<double>(p) + 2.0);
    return std::max(kappa, floor);
}

double estimate_sphericity(const Matrix& sscm_matrix, std::size_t n) {
    if (!sscm_matrix.square())
        throw InvalidInputError("estimate_sphericity: matrix must be square");
    if (n < 2) throw InsufficientSamplesError("estimate_sphericity: need at least 2 samples");
    const double p = static_cast<double>(sscm_matrix.rows());
    const double nn = static_cast<double>(n);
    const double raw = p * (nn / (nn - 1.0)) * (frobenius_sq(sscm_matrix) - 1.0 / nn);
    return std::clamp(raw, 1.0, p);
}

double estimate_scale(const Matrix& scm_matrix) {
    if (!scm_matrix.square()) throw InvalidInputError("estimate_scale: matrix must be square");
    return trace(scm_matrix) / static_cast<double>(scm_matrix.rows());
}

ScmNorms expected_scm_norms(double eta, double gamma, double kappa, std::size_t n,
                            std::size_t p) {
    if (n < 2) throw InvalidInputError("expected_scm_norms: need n >= 2");
    if (p == 0) throw InvalidInputError("expected_scm_norms: need p >= 1");
    const double pd = static_cast<double>(p);
    if (!(gamma >= 1.0 && gamma <= pd))
        throw InvalidInputError("expected_scm_norms: sphericity must lie in [1, p]");
    if (!(kappa >= -2.0 / (pd + 2.0)))
        throw InvalidInputError("expected_scm_norms: kurtosis below theoretical minimum");
    const double nd = static_cast<double>(n);
    const double tau1 = 1.0 / (nd - 1.0) + kappa / nd;
    const double tau2 = kappa / nd;
    ScmNorms out;
    out.frob_sq = pd * eta * eta * (tau1 * pd + (1.0 + tau1 + tau2) * gamma);
    out.trace_part_sq = eta * eta * ((1.0 + tau2) * pd + 2.0 * tau1 * gamma);
    return out;
}

Matrix estimate_inner_products(const std::vector<ClassSampleStats>& stats,
                               const std::vector<double>& eta,
                               const std::vector<double>& gamma,
                               InnerProductBasis basis) {
    const std::size_t k_count = stats.size();
    if (eta.size() != k_count || gamma.size() != k_count)
        throw InvalidInputError("estimate_inner_products: eta/gamma size mismatch");
    if (k_count == 0) throw InvalidInputError("estimate_inner_products: no classes");
    const double p = static_cast<double>(stats.front().scm.rows());
    Matrix ip(k_count, k_count);
    for (std::size_t i = 0; i < k_count; ++i) {
        ip(i, i) = p * gamma[i] * eta[i] * eta[i];
        for (std::size_t j = i + 1; j < k_count; ++j) {
            double v;
            if (basis == InnerProductBasis::SpatialSign)
                v = eta[i] * eta[j] * p * p * inner(stats[i].sscm, stats[j].sscm);
            else
                v = inner(stats[i].scm, stats[j].scm);
            ip(i, j) = v;
            ip(j, i) = v;
        }
    }
    return ip;
}

PopulationMoments estimate_moments(const std::vector<ClassSampleStats>& stats,
                                   InnerProductBasis basis,
                                   std::vector<std::string>* warnings) {
    if (stats.empty()) throw InvalidInputError("estimate_moments: no class statistics");
    PopulationMoments m;
    m.dim = stats.front().scm.rows();
    for (std::size_t k = 0; k < stats.size(); ++k) {
        const ClassSampleStats& st = stats[k];
        const double eta = estimate_scale(st.scm);
        if (!(eta > 0.0))
            throw NumericalError("estimate_moments: class " + std::to_string(k + 1) +
                                 " has degenerate samples (zero scale)");
        double kappa = 0.0;
        if (st.kurtosis_estimated) {
            kappa = st.kurtosis;
        } else if (warnings) {
            warnings->push_back("class " + std::to_string(k + 1) +
                                " has fewer than 4 samples; kurtosis fallback 0");
        }
        m.eta.push_back(eta);
        m.gamma.push_back(estimate_sphericity(st.sscm, st.count));
        m.kappa.push_back(kappa);
        m.counts.push_back(st.count);
    }
    m.inner = estimate_inner_products(stats, m.eta, m.gamma, basis);
    return m;
}

PopulationMoments true_moments(const std::vector<PopulationSpec>& specs) {
    if (specs.empty()) throw InvalidInputError("true_moments: no populations");
    PopulationMoments m;
    m.dim = specs.front().covariance.rows();
    for (const auto& s : specs) {
        const TheoreticalMoments tm = theoretical_moments(s);
        if (s.count < 2) throw InvalidInputError("true_moments: population count must be >= 2");
        m.eta.push_back(tm.eta);
        m.gamma.push_back(tm.gamma);
        m.kappa.push_back(tm.kappa);
        m.counts.push_back(s.count);
    }
    m.inner = Matrix(specs.size(), specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i)
        for (std::size_t j = i; j < specs.size(); ++j) {
            const double v = inner(specs[i].covariance, specs[j].covariance);
            m.inner(i, j) = v;
            m.inner(j, i) = v;
        }
    return m;
}

} // namespace rscm
