#include <doctest.h>

#include <rscm/dataset.hpp>
#include <rscm/errors.hpp>
#include <rscm/rng.hpp>
#include <rscm/stats.hpp>
#include <rscm/synth.hpp>

#include "test_util.hpp"

#include <cmath>

using namespace rscm;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t j = 0;
        for (double v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}

double median_objective(const Matrix& samples, const Vector& c) {
    double total = 0.0;
    for (std::size_t i = 0; i < samples.rows(); ++i) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < samples.cols(); ++j) {
            const double d = samples(i, j) - c[j];
            d2 += d * d;
        }
        total += std::sqrt(d2);
    }
    return total;
}

} // namespace

TEST_CASE("two point cloud has the textbook covariance") {
    Matrix x = from_rows({{0, 0}, {2, 2}});
    Vector mu = sample_mean(x);
    CHECK(mu == Vector{1.0, 1.0});
    Matrix s = scm(x);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(s(i, j) == 2.0);
}

TEST_CASE("identical rows give the zero covariance") {
    Matrix x = from_rows({{3, -1}, {3, -1}, {3, -1}});
    CHECK(frobenius_sq(scm(x)) == 0.0);
}

TEST_CASE("covariance needs at least two rows") {
    Matrix x(1, 3, 1.0);
    CHECK_THROWS_AS(scm(x), InsufficientSamplesError);
}

TEST_CASE("pooled covariance is the count-weighted average") {
    LabeledDataset data;
    data.labels = {"a", "b"};
    data.classes.push_back(from_rows({{0, 0}, {2, 0}, {0, 2}, {2, 2}}));
    data.classes.push_back(from_rows({{0, 0}, {4, 0}, {0, 4}, {4, 4}, {2, 2}, {2, 2}}));
    auto stats = compute_basic_stats(data);
    Matrix pooled = pooled_scm(stats);
    Matrix expected = lincomb(0.4, stats[0].scm, 0.6, stats[1].scm);
    CHECK(max_abs_diff(pooled, expected) < 1e-15);
    CHECK(stats[0].weight == doctest::Approx(0.4));
    CHECK(stats[1].weight == doctest::Approx(0.6));
}

TEST_CASE("spatial median of a symmetric cross is its center") {
    Matrix x = from_rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    Vector m = spatial_median(x);
    CHECK(std::abs(m[0]) < 1e-8);
    CHECK(std::abs(m[1]) < 1e-8);
}

TEST_CASE("spatial median in one dimension is the sample median") {
    Matrix x = from_rows({{0.0}, {1.0}, {10.0}});
    Vector m = spatial_median(x);
    CHECK(m[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("spatial median of a single sample is that sample") {
    Matrix x = from_rows({{4.0, 5.0, 6.0}});
    CHECK(spatial_median(x) == Vector{4.0, 5.0, 6.0});
}

TEST_CASE("spatial median beats the mean and a fine lattice on the transport objective") {
    RngStream rng(17);
    Matrix x(9, 2);
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    // Push one outlier far away; the median should barely move.
    x(0, 0) = 40.0;
    x(0, 1) = -35.0;

    Vector med = spatial_median(x);
    const double at_median = median_objective(x, med);
    CHECK(at_median <= median_objective(x, sample_mean(x)) + 1e-9);

    double best_grid = std::numeric_limits<double>::infinity();
    for (double gx = -3.0; gx <= 3.0; gx += 0.01)
        for (double gy = -3.0; gy <= 3.0; gy += 0.01)
            best_grid = std::min(best_grid, median_objective(x, {gx, gy}));
    CHECK(at_median <= best_grid + 1e-4);
}

TEST_CASE("spatial median handles a center landing on a sample point") {
    // Three collinear points; the middle one is the minimizer and an
    // iterate can hit it exactly.
    Matrix x = from_rows({{0, 0}, {1, 1}, {2, 2}});
    Vector m = spatial_median(x);
    CHECK(m[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("sign covariance of axis-aligned points is diagonal") {
    Matrix x = from_rows({{2, 0}, {0, -3}});
    Matrix s = sscm(x, Vector{0.0, 0.0});
    CHECK(s(0, 0) == doctest::Approx(0.5));
    CHECK(s(1, 1) == doctest::Approx(0.5));
    CHECK(s(0, 1) == doctest::Approx(0.0));

    // A row equal to the center carries no direction and is skipped.
    Matrix x2 = from_rows({{2, 0}, {0, -3}, {0, 0}});
    Matrix s2 = sscm(x2, Vector{0.0, 0.0});
    CHECK(max_abs_diff(s, s2) < 1e-15);
}

TEST_CASE("sign covariance has unit trace and eigenvalues in [0,1]") {
    RngStream rng(23);
    PopulationSpec spec;
    spec.covariance = make_covariance(CovKind::Ar1, 0.7, 6);
    spec.dof = 8;
    Matrix x = sample_population(spec, 40, rng);
    Vector center = spatial_median(x);
    Matrix s = sscm(x, center);
    CHECK(trace(s) == doctest::Approx(1.0).epsilon(1e-12));
    auto eig = testutil::symmetric_eigenvalues(s);
    for (double e : eig) {
        CHECK(e >= -1e-12);
        CHECK(e <= 1.0 + 1e-12);
    }
}

TEST_CASE("full statistics carry counts, weights and a kurtosis flag") {
    RngStream rng(5);
    PopulationSpec spec;
    spec.covariance = Matrix::identity(3);
    LabeledDataset data;
    data.labels = {"x", "y"};
    data.classes.push_back(sample_population(spec, 12, rng));
    data.classes.push_back(sample_population(spec, 3, rng));
    auto stats = compute_stats(data);
    REQUIRE(stats.size() == 2);
    CHECK(stats[0].count == 12);
    CHECK(stats[0].weight == doctest::Approx(12.0 / 15.0));
    CHECK(stats[0].kurtosis_estimated);
    CHECK(!stats[1].kurtosis_estimated);
    CHECK(stats[1].kurtosis == 0.0);
    CHECK(stats[0].sscm.rows() == 3);
    CHECK(stats[0].spatial_median.size() == 3);

    auto basic = compute_basic_stats(data);
    CHECK(max_abs_diff(basic[0].scm, stats[0].scm) == 0.0);
    CHECK(basic[0].sscm.empty());
    CHECK(basic[0].mean == stats[0].mean);
}
