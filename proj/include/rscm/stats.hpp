#pragma once

#include "rscm/dataset.hpp"
#include "rscm/matrix.hpp"

#include <cstddef>
#include <vector>

namespace rscm {

// Per-class sufficient statistics shared by the estimators.
struct ClassSampleStats {
    std::size_t count = 0;  // n_k
    double weight = 0.0;    // n_k / n
    Vector mean;
    Matrix scm;             // unbiased sample covariance (divisor n_k - 1)
    Vector spatial_median;
    Matrix sscm;            // spatial sign covariance, trace 1
    double kurtosis = 0.0;  // elliptical kurtosis estimate (0 when n_k < 4)
    bool kurtosis_estimated = false;
};

Vector sample_mean(const Matrix& samples);

// Unbiased sample covariance; requires at least 2 rows.
Matrix scm(const Matrix& samples);

// Geometric median by Weiszfeld iteration, started from the
// coordinate-wise median. Stops when the iterate moves less than tol
// (Euclidean) or after max_iter sweeps. An iterate landing exactly on a
// data point is nudged 1e-10 along the descent direction of the
// remaining terms.
Vector spatial_median(const Matrix& samples, double tol = 1e-8, int max_iter = 1000);

// Average of outer products of unit-normalized centered samples.
// Zero-norm rows (samples equal to the center) are skipped and the
// divisor reduced accordingly.
Matrix sscm(const Matrix& samples, const Vector& center);

std::vector<ClassSampleStats> compute_stats(const LabeledDataset& data);

// Means, SCMs, and weights only; spatial-sign statistics and kurtosis
// are left empty. Enough for the fixed-pair estimators and much
// cheaper inside cross-validation loops.
std::vector<ClassSampleStats> compute_basic_stats(const LabeledDataset& data);

// sum_k (n_k / n) scm_k
Matrix pooled_scm(const std::vector<ClassSampleStats>& stats);

} // namespace rscm
