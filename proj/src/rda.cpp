#include "rscm/rda.hpp"

#include "rscm/errors.hpp"
#include "rscm/kernels.hpp"
#include "rscm/linalg.hpp"
#include "rscm/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rscm {

double RdaModel::score(std::size_t k, const double* x) const {
    const RdaClass& c = classes[k];
    const std::size_t p = c.mean.size();
    Vector d(p);
    kernels::lincomb(1.0, x, -1.0, c.mean.data(), d.data(), p);
    return quad_form_inv(c.chol, d.data(), p) + c.log_det;
}

std::size_t RdaModel::predict(const double* x) const {
    if (classes.empty()) throw InvalidInputError("predict: model has no classes");
    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < classes.size(); ++k) {
        const double s = score(k, x);
        if (s < best_score) {
            best_score = s;
            best = k;
        }
    }
    return best;
}

double RdaModel::accuracy(const LabeledDataset& test) const {
    if (test.num_classes() != classes.size())
        throw InvalidInputError("accuracy: class count mismatch");
    std::size_t correct = 0, total = 0;
    for (std::size_t k = 0; k < test.num_classes(); ++k) {
        const Matrix& cls = test.classes[k];
        for (std::size_t i = 0; i < cls.rows(); ++i, ++total)
            if (predict(cls.row(i)) == k) ++correct;
    }
    if (total == 0) throw InvalidInputError("accuracy: empty test set");
    return static_cast<double>(correct) / static_cast<double>(total);
}

namespace {

RdaModel assemble_model(const LabeledDataset& data,
                        const std::vector<ClassSampleStats>& stats,
                        const std::vector<ShrinkageEstimate>& estimates,
                        std::string provenance) {
    RdaModel model;
    model.provenance = std::move(provenance);
    for (std::size_t k = 0; k < stats.size(); ++k) {
        RdaClass c;
        c.label = data.labels[k];
        c.mean = stats[k].mean;
        c.covariance = estimates[k].matrix;
        c.alpha = estimates[k].alpha;
        c.beta = estimates[k].beta;
        try {
            CholeskyResult f = cholesky_with_jitter(c.covariance);
            c.chol = std::move(f.factor);
            c.jitter = f.jitter;
        } catch (const NumericalError& e) {
            throw NumericalError("training failed for class \"" + c.label +
                                 "\": " + e.what());
        }
        c.log_det = log_det_from_factor(c.chol);
        model.classes.push_back(std::move(c));
    }
    return model;
}

} // namespace

RdaModel train(const LabeledDataset& data, Method method, InnerProductBasis basis,
               std::vector<std::string>* warnings) {
    if (data.num_classes() == 0) throw InvalidInputError("train: empty dataset");
    if (method_needs_moments(method)) {
        const std::vector<ClassSampleStats> stats = compute_stats(data);
        const PopulationMoments moments = estimate_moments(stats, basis, warnings);
        return assemble_model(data, stats, estimate_all(stats, moments, method),
                              method_token(method));
    }
    const std::vector<ClassSampleStats> stats = compute_basic_stats(data);
    return assemble_model(data, stats, estimate_all(stats, PopulationMoments{}, method),
                          method_token(method));
}

RdaModel train_fixed(const LabeledDataset& data, double alpha, double beta,
                     const std::string& provenance) {
    if (data.num_classes() == 0) throw InvalidInputError("train_fixed: empty dataset");
    const std::vector<ClassSampleStats> stats = compute_basic_stats(data);
    return assemble_model(data, stats, estimate_fixed_pair(stats, alpha, beta), provenance);
}

CvSpec CvSpec::for_folds(int folds, std::uint64_t seed) {
    CvSpec spec;
    spec.folds = folds;
    spec.seed = seed;
    double step;
    if (folds == 5) step = 0.25;
    else if (folds == 10) step = 0.125;
    else throw InvalidInputError("CvSpec::for_folds: only 5 or 10 folds have preset grids");
    for (double a = 0.0; a <= 1.0 + 1e-12; a += step)
        for (double b = 0.0; b <= 1.0 + 1e-12; b += step)
            spec.grid.emplace_back(std::min(a, 1.0), std::min(b, 1.0));
    return spec;
}

CvResult cross_validate(const LabeledDataset& data, const CvSpec& spec) {
    if (data.num_classes() == 0) throw InvalidInputError("cross_validate: empty dataset");
    if (spec.folds < 2) throw InvalidInputError("cross_validate: need at least 2 folds");
    if (spec.grid.empty()) throw InvalidInputError("cross_validate: empty tuning grid");
    for (const auto& [a, b] : spec.grid)
        if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
            throw InvalidInputError("cross_validate: grid pairs must lie in [0,1]^2");
    for (std::size_t k = 0; k < data.num_classes(); ++k)
        if (data.class_count(k) < static_cast<std::size_t>(spec.folds))
            throw InvalidInputError("cross_validate: class \"" + data.labels[k] +
                                    "\" has fewer samples than folds");

    // Stratified fold assignment: shuffle within each class, then deal
    // round-robin so every fold sees near-proportional class counts.
    const std::size_t k_count = data.num_classes();
    std::vector<std::vector<int>> fold_of(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        const std::size_t n = data.class_count(k);
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        RngStream rng = RngStream::derive(spec.seed, k);
        for (std::size_t i = n - 1; i > 0; --i) {
            const auto j =
                static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
            std::swap(idx[i], idx[j]);
        }
        fold_of[k].assign(n, 0);
        for (std::size_t pos = 0; pos < n; ++pos)
            fold_of[k][idx[pos]] = static_cast<int>(pos % static_cast<std::size_t>(spec.folds));
    }

    std::vector<std::size_t> errors(spec.grid.size(), 0);
    std::size_t total = 0;
    for (int f = 0; f < spec.folds; ++f) {
        LabeledDataset train_part, test_part;
        train_part.labels = data.labels;
        test_part.labels = data.labels;
        for (std::size_t k = 0; k < k_count; ++k) {
            const Matrix& cls = data.classes[k];
            std::vector<std::size_t> tr, te;
            for (std::size_t i = 0; i < cls.rows(); ++i)
                (fold_of[k][i] == f ? te : tr).push_back(i);
            Matrix trm(tr.size(), cls.cols()), tem(te.size(), cls.cols());
            for (std::size_t i = 0; i < tr.size(); ++i)
                std::copy(cls.row(tr[i]), cls.row(tr[i]) + cls.cols(), trm.row(i));
            for (std::size_t i = 0; i < te.size(); ++i)
                std::copy(cls.row(te[i]), cls.row(te[i]) + cls.cols(), tem.row(i));
            train_part.classes.push_back(std::move(trm));
            test_part.classes.push_back(std::move(tem));
        }
        const std::vector<ClassSampleStats> stats = compute_basic_stats(train_part);
        for (std::size_t g = 0; g < spec.grid.size(); ++g) {
            const auto [a, b] = spec.grid[g];
            const RdaModel model = assemble_model(
                train_part, stats, estimate_fixed_pair(stats, a, b), "cv");
            for (std::size_t k = 0; k < k_count; ++k) {
                const Matrix& te = test_part.classes[k];
                for (std::size_t i = 0; i < te.rows(); ++i)
                    if (model.predict(te.row(i)) != k) ++errors[g];
            }
        }
        for (std::size_t k = 0; k < k_count; ++k) total += test_part.classes[k].rows();
    }

    std::size_t best = 0;
    for (std::size_t g = 1; g < spec.grid.size(); ++g)
        if (errors[g] < errors[best]) best = g;

    CvResult r;
    r.alpha = spec.grid[best].first;
    r.beta = spec.grid[best].second;
    r.cv_error = static_cast<double>(errors[best]) / static_cast<double>(total);
    return r;
}

RdaModel train_cv(const LabeledDataset& data, const CvSpec& spec) {
    const CvResult cv = cross_validate(data, spec);
    return train_fixed(data, cv.alpha, cv.beta, "cv");
}

std::string model_to_json(const RdaModel& model) {
    nlohmann::json j;
    j["provenance"] = model.provenance;
    j["dim"] = model.dim();
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& c : model.classes) {
        nlohmann::json jc;
        jc["label"] = c.label;
        jc["alpha"] = c.alpha;
        jc["beta"] = c.beta;
        jc["jitter"] = c.jitter;
        jc["log_det"] = c.log_det;
        jc["mean"] = c.mean;
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < c.covariance.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t jj = 0; jj < c.covariance.cols(); ++jj)
                row.push_back(c.covariance(i, jj));
            rows.push_back(std::move(row));
        }
        jc["covariance"] = std::move(rows);
        classes.push_back(std::move(jc));
    }
    j["classes"] = std::move(classes);
    return j.dump(2);
}

} // namespace rscm
