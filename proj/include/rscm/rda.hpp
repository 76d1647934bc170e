#pragma once

#include "rscm/dataset.hpp"
#include "rscm/matrix.hpp"
#include "rscm/params.hpp"
#include "rscm/shrink.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rscm {

struct RdaClass {
    std::string label;
    Vector mean;
    Matrix covariance;
    Matrix chol;        // lower Cholesky factor of covariance (plus jitter)
    double log_det = 0.0;
    double jitter = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
};

// Discriminant-rule classifier: a sample goes to the class minimizing
// (x - mean_k)^T cov_k^{-1} (x - mean_k) + log det(cov_k), ties to the
// lowest class index.
struct RdaModel {
    std::vector<RdaClass> classes;
    std::string provenance; // method token or "cv"

    std::size_t dim() const { return classes.empty() ? 0 : classes.front().mean.size(); }
    double score(std::size_t k, const double* x) const;
    std::size_t predict(const double* x) const;
    std::size_t predict(const Vector& x) const { return predict(x.data()); }
    double accuracy(const LabeledDataset& test) const;
};

// Fits class means and method-specific covariance estimates, then
// factorizes each class covariance. A factorization that fails even at
// the jitter cap raises NumericalError naming the class.
RdaModel train(const LabeledDataset& data, Method method,
               InnerProductBasis basis = InnerProductBasis::SpatialSign,
               std::vector<std::string>* warnings = nullptr);

// Same common (alpha, beta) for every class; skips moment estimation.
RdaModel train_fixed(const LabeledDataset& data, double alpha, double beta,
                     const std::string& provenance = "fixed");

struct CvSpec {
    int folds = 5;
    std::vector<std::pair<double, double>> grid; // scanned in order
    std::uint64_t seed = 0;

    // folds = 5 pairs a 0.25-step grid, folds = 10 a 0.125-step grid.
    static CvSpec for_folds(int folds, std::uint64_t seed);
};

struct CvResult {
    double alpha = 0.0;
    double beta = 0.0;
    double cv_error = 0.0; // pooled misclassification rate at the winner
};

// Stratified k-fold cross-validation of the common tuning pair: per
// class, indices are shuffled (seeded) and dealt round-robin into
// folds; the grid is scanned in order and ties keep the earlier pair.
CvResult cross_validate(const LabeledDataset& data, const CvSpec& spec);

RdaModel train_cv(const LabeledDataset& data, const CvSpec& spec);

std::string model_to_json(const RdaModel& model);

} // namespace rscm
