#pragma once

#include <cstddef>
#include <vector>

namespace rscm {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. Rows are contiguous, so row-wise
// operations feed the vector kernels directly.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t p) {
        Matrix m(p, p);
        for (std::size_t i = 0; i < p; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }
    bool square() const { return rows_ == cols_ && rows_ > 0; }
    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double trace(const Matrix& a);
double frobenius_sq(const Matrix& a);
double inner(const Matrix& a, const Matrix& b); // entrywise <A,B>
double max_abs_diff(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);
Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, const Vector& x);

void add_scaled(Matrix& y, double a, const Matrix& x);             // y += a*x
Matrix lincomb(double a, const Matrix& x, double b, const Matrix& y); // a*x + b*y
void scale_inplace(Matrix& x, double a);

// a + c*I
Matrix add_diagonal(const Matrix& a, double c);

} // namespace rscm
