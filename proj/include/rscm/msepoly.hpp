#pragma once

#include "rscm/matrix.hpp"
#include "rscm/params.hpp"
#include "rscm/synth.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rscm {

enum class PolyKind { Full, Streamlined };

// Trace normalizer used by the streamlined estimator: the pooled
// covariance's trace or the class covariance's own trace.
enum class TraceTarget { PooledTrace, ClassTrace };

// Expected squared Frobenius error of the doubly shrunk covariance
// estimate as a function of the tuning pair (alpha, beta):
//
//   mse(a, b) = a^2 b^2 c22 + a^2 b c21 + a^2 c20
//             + b^2 c02 + a b c11 + a c10 + b c01 + c00.
//
// Streamlined objectives have c02 = c01 = 0 identically (their beta^2
// and beta terms only appear multiplied by alpha).
struct MsePolynomial {
    PolyKind kind = PolyKind::Full;
    double c22 = 0, c21 = 0, c20 = 0, c02 = 0;
    double c11 = 0, c10 = 0, c01 = 0, c00 = 0;
    double normalization = 1.0; // ||M_k||_F^2, divides the MSE for reporting
};

// (I_A, A - I_A) with I_A = (tr(A)/p) I.
std::pair<Matrix, Matrix> identity_split(const Matrix& a);

// Objective coefficients for class k (0-based) from population moments
// (plug-in estimates or ground truth).
MsePolynomial coefficients_full(const PopulationMoments& m, std::size_t k);
MsePolynomial coefficients_streamlined(const PopulationMoments& m, std::size_t k,
                                       TraceTarget target);

double evaluate(const MsePolynomial& poly, double alpha, double beta);
double evaluate_nmse(const MsePolynomial& poly, double alpha, double beta);

std::string polynomial_to_json(const MsePolynomial& poly);
MsePolynomial polynomial_from_json(const std::string& text);

struct OracleEstimate {
    double mean;
    double std_error;
};

// Monte Carlo estimate of E ||estimate(alpha, beta) - M_k||_F^2 over
// fresh datasets drawn from the given populations. Validates the
// analytic objective; not used by the estimators themselves.
OracleEstimate mse_oracle(const std::vector<PopulationSpec>& specs, std::size_t k,
                          double alpha, double beta, std::size_t trials,
                          std::uint64_t seed, PolyKind kind = PolyKind::Full,
                          TraceTarget target = TraceTarget::PooledTrace);

} // namespace rscm
