#pragma once

#include "rscm/matrix.hpp"

#include <cstddef>

namespace rscm {

// Lower-triangular Cholesky factor of a symmetric positive definite
// matrix. Throws NumericalError if a non-positive pivot is hit.
Matrix cholesky(const Matrix& a);

struct CholeskyResult {
    Matrix factor;
    double jitter = 0.0; // absolute diagonal load that was needed
};

// Cholesky with escalating diagonal loading: tries jitter
// rel * tr(a)/p for rel = rel_start, 10*rel_start, ... up to rel_cap,
// starting from zero jitter. Throws NumericalError once the cap fails.
CholeskyResult cholesky_with_jitter(const Matrix& a, double rel_start = 1e-10,
                                    double rel_cap = 1e-6);

// Solve L y = x in place (L lower triangular).
void solve_lower_inplace(const Matrix& l, double* x);

// Solve L^T y = x in place.
void solve_upper_transposed_inplace(const Matrix& l, double* x);

// log det(A) given A = L L^T.
double log_det_from_factor(const Matrix& l);

// d^T A^{-1} d given A = L L^T, i.e. squared norm of L^{-1} d.
double quad_form_inv(const Matrix& l, const double* d, std::size_t p);

// Dense inverse from the factor (used for exports and diagnostics,
// never in the per-sample classification path).
Matrix inverse_from_factor(const Matrix& l);

} // namespace rscm
