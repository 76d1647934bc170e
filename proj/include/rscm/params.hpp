#pragma once

#include "rscm/matrix.hpp"
#include "rscm/stats.hpp"
#include "rscm/synth.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace rscm {

// Scale, sphericity, kurtosis, and cross-class inner products for each
// class: everything the tuning objective needs, whether computed from
// data (estimate_moments) or from known populations (true_moments).
struct PopulationMoments {
    std::size_t dim = 0;
    std::vector<double> eta;    // tr(M_k)/p
    std::vector<double> gamma;  // sphericity in [1, p]
    std::vector<double> kappa;  // elliptical kurtosis
    std::vector<std::size_t> counts;
    Matrix inner; // K x K, <M_i, M_j>

    std::size_t num_classes() const { return eta.size(); }
    std::size_t total_count() const;
    double weight(std::size_t k) const; // n_k / n

    // Variance coefficients of the sample covariance matrix.
    double tau1(std::size_t k) const;   // 1/(n_k - 1) + kappa_k / n_k
    double tau2(std::size_t k) const;   // kappa_k / n_k
};

// Elliptical kurtosis from per-coordinate fourth moments: one third of
// the average excess kurtosis, floored at the theoretical minimum
// -2/(p+2). Coordinates with zero variance are skipped. Needs n >= 4.
double estimate_kurtosis(const Matrix& samples);

// Sphericity from the spatial sign covariance matrix of n samples:
// p * n/(n-1) * (||sscm||_F^2 - 1/n), clipped to [1, p].
double estimate_sphericity(const Matrix& sscm_matrix, std::size_t n);

// tr(scm)/p.
double estimate_scale(const Matrix& scm_matrix);

// Exact second-order expectations of the sample covariance built
// from n samples of an elliptical population with the given scale,
// sphericity, and kurtosis:
//   frob_sq       = E ||S||_F^2
//   trace_part_sq = E ||(tr(S)/p) I||_F^2
struct ScmNorms {
    double frob_sq;
    double trace_part_sq;
};
ScmNorms expected_scm_norms(double eta, double gamma, double kappa, std::size_t n,
                            std::size_t p);

enum class InnerProductBasis { SpatialSign, Sample };

// K x K matrix of estimated <M_i, M_j>. Diagonal entries use
// p * gamma_k * eta_k^2; off-diagonal entries use the spatial-sign
// statistics (eta_i eta_j p^2 <sscm_i, sscm_j>) or, for diagnostics,
// plain SCM inner products.
Matrix estimate_inner_products(const std::vector<ClassSampleStats>& stats,
                               const std::vector<double>& eta,
                               const std::vector<double>& gamma,
                               InnerProductBasis basis = InnerProductBasis::SpatialSign);

// Full plug-in pipeline. Classes with fewer than 4 samples fall back to
// kurtosis 0 (a note is appended to warnings if given). Degenerate
// classes (zero scale) raise NumericalError.
PopulationMoments estimate_moments(const std::vector<ClassSampleStats>& stats,
                                   InnerProductBasis basis = InnerProductBasis::SpatialSign,
                                   std::vector<std::string>* warnings = nullptr);

// Ground-truth moments of known populations.
PopulationMoments true_moments(const std::vector<PopulationSpec>& specs);

} // namespace rscm
