#pragma once

#include "rscm/msepoly.hpp"
#include "rscm/params.hpp"
#include "rscm/stats.hpp"
#include "rscm/tuning.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rscm {

// Covariance estimators compared by the harnesses:
//   SCM       per-class sample covariance (alpha = beta = 1)
//   POOL      pooled sample covariance (alpha = 1, beta = 0)
//   POLY      doubly shrunk estimator, per-class tuning
//   POLYs     streamlined variant (identity target scaled by the pooled
//             trace), closed-form tuning
//   POLY-Ave / POLYs-Ave  same with tuning pairs averaged over classes
//   C1        no pooling: beta fixed at 1, alpha tuned
//   C2        no identity shrinkage: alpha fixed at 1, beta tuned
//   C3        fully pooled: beta fixed at 0, alpha tuned
enum class Method { Scm, Pool, Poly, PolyS, PolyAve, PolySAve, C1, C2, C3 };

Method parse_method(std::string_view token);
const char* method_token(Method m);
const std::vector<Method>& all_methods();
bool method_needs_moments(Method m);

// Which branch of the estimator family produced a matrix. C4 (the pure
// scaled-identity corner, alpha = 0) never wins a tuning run but can be
// requested through a fixed pair.
enum class EstimateVariant { Full, Streamlined, C1, C2, C3, C4, Scm, Pooled };

const char* variant_name(EstimateVariant v);

struct ShrinkageEstimate {
    Matrix matrix;
    double alpha = 1.0;
    double beta = 1.0;
    EstimateVariant variant = EstimateVariant::Scm;
};

std::string estimate_to_json(const ShrinkageEstimate& est);

// beta * s_k + (1 - beta) * s
Matrix partially_pooled(const Matrix& s_k, const Matrix& s, double beta);

// alpha * m(beta) + (1 - alpha) * (tr(m(beta))/p) I with m(beta) the
// partially pooled matrix. Preserves the trace of m(beta) exactly.
Matrix coupled_rscm(const Matrix& s_k, const Matrix& s, double alpha, double beta);

// alpha * m(beta) + (1 - alpha) * (tr(T)/p) I with T = s or s_k.
Matrix streamlined_rscm(const Matrix& s_k, const Matrix& s, double alpha, double beta,
                        TraceTarget target);

// Per-class covariance estimates for one method. `moments` may be
// ground truth or plug-in estimates; it is ignored by SCM and POOL.
std::vector<ShrinkageEstimate> estimate_all(const std::vector<ClassSampleStats>& stats,
                                            const PopulationMoments& moments, Method method);

// One common (alpha, beta) for every class (the cross-validation path).
std::vector<ShrinkageEstimate> estimate_fixed_pair(const std::vector<ClassSampleStats>& stats,
                                                   double alpha, double beta);

} // namespace rscm
