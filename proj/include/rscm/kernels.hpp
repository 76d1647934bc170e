#pragma once

#include <cstddef>

// Low-level array kernels behind everything numeric in this library.
// Each operation has a scalar reference implementation and, on x86-64,
// an AVX2+FMA variant. The backend is chosen once at startup (runtime
// CPU detection, overridable via the RSCM_BACKEND environment variable
// or set_backend()); all variants are equivalence-tested against the
// scalar reference.

namespace rscm::kernels {

enum class Backend { Scalar, Avx2 };

struct Ops {
    double (*dot)(const double*, const double*, std::size_t);
    double (*sumsq)(const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*dist_sq)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scale)(double, double*, std::size_t);
    void (*lincomb)(double, const double*, double, const double*, double*, std::size_t);
    void (*outer_acc)(double, const double*, double*, std::size_t);
};

Backend active_backend();
const char* backend_name(Backend b);
bool backend_supported(Backend b);
void set_backend(Backend b); // throws InvalidInputError if unsupported here

// Dispatched entry points.
double dot(const double* x, const double* y, std::size_t n);
double sumsq(const double* x, std::size_t n);
double sum(const double* x, std::size_t n);
double dist_sq(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);    // y += a*x
void scale(double a, double* x, std::size_t n);                    // x *= a
void lincomb(double a, const double* x, double b, const double* y,
             double* z, std::size_t n);                            // z = a*x + b*y
void outer_acc(double w, const double* x, double* a, std::size_t p); // A += w*x*x^T

namespace detail {
const Ops& scalar_ops();
const Ops* avx2_ops_or_null(); // null when this build carries no avx2 kernels
#if defined(RSCM_HAVE_AVX2)
const Ops& avx2_ops();
#endif
} // namespace detail

} // namespace rscm::kernels
