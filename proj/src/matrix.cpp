#include "rscm/matrix.hpp"

#include "rscm/errors.hpp"
#include "rscm/kernels.hpp"

#include <cmath>

namespace rscm {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (!a.same_shape(b))
        throw InvalidInputError(std::string(what) + ": shape mismatch");
}

} // namespace

double trace(const Matrix& a) {
    if (!a.square()) throw InvalidInputError("trace: matrix must be square");
    double t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double frobenius_sq(const Matrix& a) {
    return kernels::sumsq(a.data(), a.size());
}

double inner(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "inner");
    return kernels::dot(a.data(), b.data(), a.size());
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(pa[i] - pb[i]));
    return m;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InvalidInputError("matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.row(i);
        const double* ai = a.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k)
            kernels::axpy(ai[k], b.row(k), ci, b.cols());
    }
    return c;
}

Vector matvec(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) throw InvalidInputError("matvec: dimension mismatch");
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        y[i] = kernels::dot(a.row(i), x.data(), a.cols());
    return y;
}

void add_scaled(Matrix& y, double a, const Matrix& x) {
    require_same_shape(y, x, "add_scaled");
    kernels::axpy(a, x.data(), y.data(), y.size());
}

Matrix lincomb(double a, const Matrix& x, double b, const Matrix& y) {
    require_same_shape(x, y, "lincomb");
    Matrix z(x.rows(), x.cols());
    kernels::lincomb(a, x.data(), b, y.data(), z.data(), z.size());
    return z;
}

void scale_inplace(Matrix& x, double a) {
    kernels::scale(a, x.data(), x.size());
}

Matrix add_diagonal(const Matrix& a, double c) {
    if (!a.square()) throw InvalidInputError("add_diagonal: matrix must be square");
    Matrix r = a;
    for (std::size_t i = 0; i < r.rows(); ++i) r(i, i) += c;
    return r;
}

} // namespace rscm
