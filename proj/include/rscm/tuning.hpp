#pragma once

#include "rscm/msepoly.hpp"

#include <utility>
#include <vector>

namespace rscm {

enum class TuningAlgo { Grid, GridRefined, Analytic };

struct TuningResult {
    double alpha = 0.0;
    double beta = 0.0;
    double mse = 0.0;   // objective value at (alpha, beta), unnormalized
    TuningAlgo algo = TuningAlgo::Grid;
    int iterations = 0; // alternating refinement sweeps performed
};

// Minimizer of the full objective over alpha in [0,1] for fixed beta
// (the objective is a convex quadratic in alpha):
//   alpha = clip(-(beta c11 + c10) / (2 (beta^2 c22 + beta c21 + c20))).
// Throws NumericalError when the denominator degenerates.
double alpha_given_beta(const MsePolynomial& poly, double beta);

// Likewise over beta for fixed alpha:
//   beta = clip(-(alpha^2 c21 + alpha c11 + c01) / (2 (alpha^2 c22 + c02))).
double beta_given_alpha(const MsePolynomial& poly, double alpha);

struct OptimizeOptions {
    double grid_step = 0.05;
    bool refine = true;      // alternate the closed-form updates after the scan
    double tol = 1e-10;      // stop when neither coordinate moves more than this
    int max_iter = 500;
};

// Full objective: exhaustive grid scan (ties resolved toward smaller
// alpha, then smaller beta) followed by alternating minimization. Each
// half-step is an exact coordinate minimizer, so the objective value
// never increases; the result is never worse than the best grid point.
TuningResult optimize_full(const MsePolynomial& poly, const OptimizeOptions& opts = {});

// Streamlined objective: evaluates the interior stationary point and
// the edge candidates (beta = 0, beta = 1, alpha = 1, alpha = 0) in
// closed form and returns the best.
TuningResult optimize_streamlined(const MsePolynomial& poly);

// Coordinate-wise mean of per-class tuning pairs.
std::pair<double, double> average_tuning(const std::vector<TuningResult>& results);

} // namespace rscm
