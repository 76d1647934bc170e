#include <doctest.h>

#include <rscm/errors.hpp>
#include <rscm/kernels.hpp>
#include <rscm/rng.hpp>

#include <cmath>
#include <cstdlib>
#include <vector>

using namespace rscm;

namespace {

// Long-double reference reductions, independent of either backend.
long double ref_dot(const std::vector<double>& x, const std::vector<double>& y) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += static_cast<long double>(x[i]) * static_cast<long double>(y[i]);
    return acc;
}

long double ref_sumsq(const std::vector<double>& x) { return ref_dot(x, x); }

long double ref_sum(const std::vector<double>& x) {
    long double acc = 0.0L;
    for (double v : x) acc += v;
    return acc;
}

long double ref_dist_sq(const std::vector<double>& x, const std::vector<double>& y) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double d = static_cast<long double>(x[i]) - y[i];
        acc += d * d;
    }
    return acc;
}

std::vector<double> random_vec(std::size_t n, RngStream& rng, double spread) {
    std::vector<double> v(n);
    for (auto& e : v) e = spread * rng.normal();
    return v;
}

struct BackendGuard {
    kernels::Backend saved = kernels::active_backend();
    ~BackendGuard() { kernels::set_backend(saved); }
};

void check_close(double got, long double want, double scale) {
    const double tol = 1e-13 * (scale + 1.0);
    CHECK(std::abs(got - static_cast<double>(want)) <= tol);
}

void run_reduction_checks() {
    RngStream rng(20240811);
    for (std::size_t n = 0; n <= 97; ++n) {
        auto x = random_vec(n, rng, 3.0);
        auto y = random_vec(n, rng, 0.5);
        const double scale = static_cast<double>(ref_sumsq(x) + ref_sumsq(y));
        check_close(kernels::dot(x.data(), y.data(), n), ref_dot(x, y), scale);
        check_close(kernels::sumsq(x.data(), n), ref_sumsq(x), scale);
        check_close(kernels::sum(x.data(), n), ref_sum(x), std::sqrt((double)n) * 3.0 + scale * 0.01);
        check_close(kernels::dist_sq(x.data(), y.data(), n), ref_dist_sq(x, y), scale);
    }
}

} // namespace

TEST_CASE("scalar backend is always available and selectable") {
    BackendGuard guard;
    CHECK(kernels::backend_supported(kernels::Backend::Scalar));
    kernels::set_backend(kernels::Backend::Scalar);
    CHECK(kernels::active_backend() == kernels::Backend::Scalar);
    CHECK(std::string(kernels::backend_name(kernels::Backend::Scalar)) == "scalar");
    CHECK(std::string(kernels::backend_name(kernels::Backend::Avx2)) == "avx2");
}

TEST_CASE("selecting an unsupported backend throws") {
    BackendGuard guard;
    if (!kernels::backend_supported(kernels::Backend::Avx2)) {
        CHECK_THROWS_AS(kernels::set_backend(kernels::Backend::Avx2), InvalidInputError);
    } else {
        kernels::set_backend(kernels::Backend::Avx2);
        CHECK(kernels::active_backend() == kernels::Backend::Avx2);
    }
}

TEST_CASE("reductions match a long-double reference on every size 0..97") {
    BackendGuard guard;
    kernels::set_backend(kernels::Backend::Scalar);
    run_reduction_checks();
    if (kernels::backend_supported(kernels::Backend::Avx2)) {
        kernels::set_backend(kernels::Backend::Avx2);
        run_reduction_checks();
    }
}

TEST_CASE("vector updates agree across backends on every size 0..97") {
    if (!kernels::backend_supported(kernels::Backend::Avx2)) return;
    BackendGuard guard;
    RngStream rng(77);
    for (std::size_t n = 0; n <= 97; ++n) {
        auto x = random_vec(n, rng, 2.0);
        auto y = random_vec(n, rng, 2.0);
        const double a = rng.uniform(-2.0, 2.0);
        const double b = rng.uniform(-2.0, 2.0);

        auto y1 = y, y2 = y;
        kernels::set_backend(kernels::Backend::Scalar);
        kernels::axpy(a, x.data(), y1.data(), n);
        kernels::set_backend(kernels::Backend::Avx2);
        kernels::axpy(a, x.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));

        auto s1 = x, s2 = x;
        kernels::set_backend(kernels::Backend::Scalar);
        kernels::scale(b, s1.data(), n);
        kernels::set_backend(kernels::Backend::Avx2);
        kernels::scale(b, s2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(s1[i] == s2[i]);

        std::vector<double> z1(n), z2(n);
        kernels::set_backend(kernels::Backend::Scalar);
        kernels::lincomb(a, x.data(), b, y.data(), z1.data(), n);
        kernels::set_backend(kernels::Backend::Avx2);
        kernels::lincomb(a, x.data(), b, y.data(), z2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(z1[i] == doctest::Approx(z2[i]).epsilon(1e-14));
    }
}

TEST_CASE("outer_acc accumulates w * x * x^T") {
    BackendGuard guard;
    RngStream rng(5150);
    for (std::size_t p : {std::size_t{1}, std::size_t{3}, std::size_t{8}, std::size_t{17}, std::size_t{33}}) {
        auto x = random_vec(p, rng, 1.5);
        const double w = 0.7;
        std::vector<double> expected(p * p, 0.25);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) expected[i * p + j] += w * x[i] * x[j];

        for (auto backend : {kernels::Backend::Scalar, kernels::Backend::Avx2}) {
            if (!kernels::backend_supported(backend)) continue;
            kernels::set_backend(backend);
            std::vector<double> acc(p * p, 0.25);
            kernels::outer_acc(w, x.data(), acc.data(), p);
            for (std::size_t i = 0; i < p * p; ++i)
                CHECK(acc[i] == doctest::Approx(expected[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("dispatched entry points follow the selected backend") {
    BackendGuard guard;
    // Compare dispatch output bitwise against the per-backend tables.
    RngStream rng(99);
    auto x = random_vec(64, rng, 1.0);
    auto y = random_vec(64, rng, 1.0);
    kernels::set_backend(kernels::Backend::Scalar);
    CHECK(kernels::dot(x.data(), y.data(), 64) ==
          kernels::detail::scalar_ops().dot(x.data(), y.data(), 64));
    const kernels::Ops* avx2 = kernels::detail::avx2_ops_or_null();
    if (avx2 != nullptr && kernels::backend_supported(kernels::Backend::Avx2)) {
        kernels::set_backend(kernels::Backend::Avx2);
        CHECK(kernels::dot(x.data(), y.data(), 64) == avx2->dot(x.data(), y.data(), 64));
    }
}
