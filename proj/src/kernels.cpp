#include "rscm/kernels.hpp"

#include "rscm/errors.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

namespace rscm::kernels {

namespace {

double scalar_dot(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double scalar_sumsq(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

double scalar_sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double scalar_dist_sq(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

void scalar_axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scalar_scale(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void scalar_lincomb(double a, const double* x, double b, const double* y,
                    double* z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = a * x[i] + b * y[i];
}

void scalar_outer_acc(double w, const double* x, double* a, std::size_t p) {
    for (std::size_t i = 0; i < p; ++i) {
        const double wi = w * x[i];
        double* row = a + i * p;
        for (std::size_t j = 0; j < p; ++j) row[j] += wi * x[j];
    }
}

bool cpu_has_avx2() {
#if defined(RSCM_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Dispatch {
    Ops ops;
    Backend backend;

    Dispatch() {
        backend = cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
        if (const char* env = std::getenv("RSCM_BACKEND")) {
            const std::string v(env);
            if (v == "scalar") backend = Backend::Scalar;
            else if (v == "avx2" && cpu_has_avx2()) backend = Backend::Avx2;
        }
        apply(backend);
    }

    void apply(Backend b) {
        if (b == Backend::Avx2) {
            if (const Ops* table = detail::avx2_ops_or_null()) {
                ops = *table;
                backend = b;
                return;
            }
        }
        ops = detail::scalar_ops();
        backend = Backend::Scalar;
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

} // namespace

namespace detail {

const Ops& scalar_ops() {
    static const Ops ops = {scalar_dot,  scalar_sumsq,   scalar_sum,
                            scalar_dist_sq, scalar_axpy, scalar_scale,
                            scalar_lincomb, scalar_outer_acc};
    return ops;
}

#if !defined(RSCM_HAVE_AVX2)
const Ops* avx2_ops_or_null() { return nullptr; }
#endif

} // namespace detail

Backend active_backend() { return dispatch().backend; }

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

bool backend_supported(Backend b) {
    if (b == Backend::Scalar) return true;
    return cpu_has_avx2();
}

void set_backend(Backend b) {
    if (!backend_supported(b))
        throw InvalidInputError(std::string("kernel backend not supported on this cpu: ") +
                                backend_name(b));
    dispatch().apply(b);
}

double dot(const double* x, const double* y, std::size_t n) { return dispatch().ops.dot(x, y, n); }
double sumsq(const double* x, std::size_t n) { return dispatch().ops.sumsq(x, n); }
double sum(const double* x, std::size_t n) { return dispatch().ops.sum(x, n); }
double dist_sq(const double* x, const double* y, std::size_t n) { return dispatch().ops.dist_sq(x, y, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { dispatch().ops.axpy(a, x, y, n); }
void scale(double a, double* x, std::size_t n) { dispatch().ops.scale(a, x, n); }
void lincomb(double a, const double* x, double b, const double* y, double* z, std::size_t n) {
    dispatch().ops.lincomb(a, x, b, y, z, n);
}
void outer_acc(double w, const double* x, double* a, std::size_t p) {
    dispatch().ops.outer_acc(w, x, a, p);
}

} // namespace rscm::kernels
