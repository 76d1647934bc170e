#include "rscm/linalg.hpp"

#include "rscm/errors.hpp"
#include "rscm/kernels.hpp"

#include <cmath>
#include <vector>

namespace rscm {

namespace {

// Returns false instead of throwing so the jitter loop can retry.
bool try_cholesky(const Matrix& a, Matrix& l) {
    const std::size_t p = a.rows();
    l = Matrix(p, p);
    for (std::size_t j = 0; j < p; ++j) {
        const double d = a(j, j) - kernels::sumsq(l.row(j), j);
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < p; ++i)
            l(i, j) = (a(i, j) - kernels::dot(l.row(i), l.row(j), j)) / ljj;
    }
    return true;
}

} // namespace

Matrix cholesky(const Matrix& a) {
    if (!a.square()) throw InvalidInputError("cholesky: matrix must be square");
    Matrix l;
    if (!try_cholesky(a, l))
        throw NumericalError("cholesky: matrix is not positive definite");
    return l;
}

CholeskyResult cholesky_with_jitter(const Matrix& a, double rel_start, double rel_cap) {
    if (!a.square()) throw InvalidInputError("cholesky_with_jitter: matrix must be square");
    const double scale = trace(a) / static_cast<double>(a.rows());
    CholeskyResult r;
    if (try_cholesky(a, r.factor)) return r;
    for (double rel = rel_start; rel <= rel_cap * (1.0 + 1e-12); rel *= 10.0) {
        const double jitter = rel * scale;
        if (jitter > 0.0 && try_cholesky(add_diagonal(a, jitter), r.factor)) {
            r.jitter = jitter;
            return r;
        }
    }
    throw NumericalError("cholesky_with_jitter: matrix not positive definite even after "
                         "maximum diagonal loading");
}

void solve_lower_inplace(const Matrix& l, double* x) {
    const std::size_t p = l.rows();
    for (std::size_t i = 0; i < p; ++i)
        x[i] = (x[i] - kernels::dot(l.row(i), x, i)) / l(i, i);
}

void solve_upper_transposed_inplace(const Matrix& l, double* x) {
    const std::size_t p = l.rows();
    for (std::size_t ii = p; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < p; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
}

double log_det_from_factor(const Matrix& l) {
    double s = 0.0;
    for (std::size_t i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
    return 2.0 * s;
}

double quad_form_inv(const Matrix& l, const double* d, std::size_t p) {
    std::vector<double> y(d, d + p);
    solve_lower_inplace(l, y.data());
    return kernels::sumsq(y.data(), p);
}

Matrix inverse_from_factor(const Matrix& l) {
    const std::size_t p = l.rows();
    Matrix inv(p, p);
    std::vector<double> e(p);
    for (std::size_t j = 0; j < p; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        solve_lower_inplace(l, e.data());
        solve_upper_transposed_inplace(l, e.data());
        for (std::size_t i = 0; i < p; ++i) inv(i, j) = e[i];
    }
    return inv;
}

} // namespace rscm
