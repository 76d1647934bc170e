#include "rscm/stats.hpp"

#include "rscm/errors.hpp"
#include "rscm/kernels.hpp"
#include "rscm/params.hpp"

#include <algorithm>
#include <cmath>

namespace rscm {

Vector sample_mean(const Matrix& samples) {
    if (samples.rows() == 0) throw InsufficientSamplesError("sample_mean: no samples");
    const std::size_t n = samples.rows(), p = samples.cols();
    Vector m(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) kernels::axpy(1.0, samples.row(i), m.data(), p);
    kernels::scale(1.0 / static_cast<double>(n), m.data(), p);
    return m;
}

Matrix scm(const Matrix& samples) {
    const std::size_t n = samples.rows(), p = samples.cols();
    if (n < 2) throw InsufficientSamplesError("scm: need at least 2 samples");
    const Vector mean = sample_mean(samples);
    Matrix s(p, p);
    Vector d(p);
    for (std::size_t i = 0; i < n; ++i) {
        kernels::lincomb(1.0, samples.row(i), -1.0, mean.data(), d.data(), p);
        kernels::outer_acc(1.0, d.data(), s.data(), p);
    }
    scale_inplace(s, 1.0 / static_cast<double>(n - 1));
    return s;
}

namespace {

Vector coordinatewise_median(const Matrix& samples) {
    const std::size_t n = samples.rows(), p = samples.cols();
    Vector med(p);
    Vector col(n);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = samples(i, j);
        std::sort(col.begin(), col.end());
        med[j] = (n % 2 == 1) ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
    }
    return med;
}

} // namespace

Vector spatial_median(const Matrix& samples, double tol, int max_iter) {
    const std::size_t n = samples.rows(), p = samples.cols();
    if (n == 0) throw InsufficientSamplesError("spatial_median: no samples");
    if (n == 1) return Vector(samples.row(0), samples.row(0) + p);

    Vector y = coordinatewise_median(samples);
    Vector num(p), next(p), grad(p);
    for (int iter = 0; iter < max_iter; ++iter) {
        std::fill(num.begin(), num.end(), 0.0);
        double denom = 0.0;
        bool hit = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double d2 = kernels::dist_sq(samples.row(i), y.data(), p);
            if (d2 == 0.0) {
                hit = true;
                continue;
            }
            const double w = 1.0 / std::sqrt(d2);
            kernels::axpy(w, samples.row(i), num.data(), p);
            denom += w;
        }
        if (hit) {
            // Gradient of the distance sum over the non-coincident
            // points; step a little down it and continue.
            std::fill(grad.begin(), grad.end(), 0.0);
            double gnorm2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d2 = kernels::dist_sq(samples.row(i), y.data(), p);
                if (d2 == 0.0) continue;
                const double w = 1.0 / std::sqrt(d2);
                for (std::size_t j = 0; j < p; ++j) grad[j] += (y[j] - samples(i, j)) * w;
            }
            gnorm2 = kernels::sumsq(grad.data(), p);
            if (gnorm2 == 0.0 || denom == 0.0) return y; // y optimal for the rest too
            const double step = 1e-10 / std::sqrt(gnorm2);
            kernels::axpy(-step, grad.data(), y.data(), p);
            continue;
        }
        kernels::scale(1.0 / denom, num.data(), p);
        next = num;
        const double move2 = kernels::dist_sq(next.data(), y.data(), p);
        y = next;
        if (move2 <= tol * tol) break;
    }
    return y;
}

Matrix sscm(const Matrix& samples, const Vector& center) {
    const std::size_t n = samples.rows(), p = samples.cols();
    if (n == 0) throw InsufficientSamplesError("sscm: no samples");
    if (center.size() != p) throw InvalidInputError("sscm: center length must match columns");
    Matrix s(p, p);
    Vector d(p);
    std::size_t used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        kernels::lincomb(1.0, samples.row(i), -1.0, center.data(), d.data(), p);
        const double norm2 = kernels::sumsq(d.data(), p);
        if (norm2 <= 0.0) continue;
        kernels::outer_acc(1.0 / norm2, d.data(), s.data(), p);
        ++used;
    }
    if (used > 0) scale_inplace(s, 1.0 / static_cast<double>(used));
    return s;
}

std::vector<ClassSampleStats> compute_stats(const LabeledDataset& data) {
    if (data.num_classes() == 0) throw InvalidInputError("compute_stats: empty dataset");
    const std::size_t total = data.total_count();
    std::vector<ClassSampleStats> stats(data.num_classes());
    for (std::size_t k = 0; k < data.num_classes(); ++k) {
        const Matrix& cls = data.classes[k];
        ClassSampleStats& st = stats[k];
        st.count = cls.rows();
        st.weight = static_cast<double>(cls.rows()) / static_cast<double>(total);
        st.mean = sample_mean(cls);
        st.scm = scm(cls);
        st.spatial_median = spatial_median(cls);
        st.sscm = sscm(cls, st.spatial_median);
        if (st.count >= 4) {
            try {
                st.kurtosis = estimate_kurtosis(cls);
                st.kurtosis_estimated = true;
            } catch (const NumericalError&) {
                // Every coordinate flat: stay on the gaussian fallback and
                // let the moment stage report the degeneracy.
            }
        }
    }
    return stats;
}

std::vector<ClassSampleStats> compute_basic_stats(const LabeledDataset& data) {
    if (data.num_classes() == 0) throw InvalidInputError("compute_basic_stats: empty dataset");
    const std::size_t total = data.total_count();
    std::vector<ClassSampleStats> stats(data.num_classes());
    for (std::size_t k = 0; k < data.num_classes(); ++k) {
        ClassSampleStats& st = stats[k];
        st.count = data.classes[k].rows();
        st.weight = static_cast<double>(st.count) / static_cast<double>(total);
        st.mean = sample_mean(data.classes[k]);
        st.scm = scm(data.classes[k]);
    }
    return stats;
}

Matrix pooled_scm(const std::vector<ClassSampleStats>& stats) {
    if (stats.empty()) throw InvalidInputError("pooled_scm: no class statistics");
    Matrix pooled(stats.front().scm.rows(), stats.front().scm.cols());
    for (const auto& st : stats) add_scaled(pooled, st.weight, st.scm);
    return pooled;
}

} // namespace rscm
