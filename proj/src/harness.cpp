#include "rscm/harness.hpp"

#include "rscm/errors.hpp"
#include "rscm/kernels.hpp"
#include "rscm/parallel.hpp"
#include "rscm/params.hpp"
#include "rscm/rda.hpp"
#include "rscm/stats.hpp"
#include "rscm/tuning.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace rscm {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot open output file: " + path);
    return out;
}

struct MeanStd {
    double mean = 0.0;
    double std_dev = 0.0;
};

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd ms;
    const std::size_t n = values.size();
    for (double v : values) ms.mean += v;
    ms.mean /= static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - ms.mean) * (v - ms.mean);
        ms.std_dev = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return ms;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

std::vector<ShrinkageEstimate> run_method(const LabeledDataset& data, Method method) {
    if (method_needs_moments(method)) {
        const std::vector<ClassSampleStats> stats = compute_stats(data);
        const PopulationMoments moments = estimate_moments(stats);
        return estimate_all(stats, moments, method);
    }
    return estimate_all(compute_basic_stats(data), PopulationMoments{}, method);
}

std::vector<SimulationRow> run_simulation(const SimulationConfig& cfg) {
    if (cfg.trials < 2) throw InvalidInputError("run_simulation: need at least 2 trials");
    if (cfg.methods.empty()) throw InvalidInputError("run_simulation: no methods given");
    if (!cfg.use_custom && cfg.dim < 2)
        throw InvalidInputError("run_simulation: dimension must be at least 2");

    // Fixed setups draw their class means once, from a stream that the
    // per-trial streams (indices >= 1) never touch.
    std::vector<PopulationSpec> fixed_specs;
    std::vector<PopulationSampler> fixed_samplers;
    std::vector<double> fixed_norms;
    const bool randomized = !cfg.use_custom && setup_is_randomized(cfg.setup);
    std::size_t k_count = 0;
    if (cfg.use_custom) {
        fixed_specs = cfg.custom;
    } else if (!randomized) {
        RngStream mean_rng = RngStream::derive(cfg.seed, 0);
        fixed_specs = make_setup(cfg.setup, cfg.dim, mean_rng);
    }
    if (!randomized) {
        for (const auto& s : fixed_specs) {
            if (s.count < 2)
                throw InvalidInputError("run_simulation: every population needs count >= 2");
            fixed_samplers.emplace_back(s);
            fixed_norms.push_back(frobenius_sq(s.covariance));
        }
        k_count = fixed_specs.size();
    } else {
        k_count = 4; // randomized setups always draw four classes
    }

    const std::size_t m_count = cfg.methods.size();
    std::vector<double> nmse(cfg.trials * m_count * k_count, 0.0);
    std::vector<double> elapsed(cfg.trials * m_count, 0.0);

    parallel_for(0, cfg.trials, cfg.threads, [&](std::size_t t) {
        RngStream rng = RngStream::derive(cfg.seed, t + 1);

        std::vector<PopulationSpec> trial_specs;
        const std::vector<PopulationSpec>* specs = &fixed_specs;
        std::vector<PopulationSampler> trial_samplers;
        const std::vector<PopulationSampler>* samplers = &fixed_samplers;
        std::vector<double> trial_norms;
        const std::vector<double>* norms = &fixed_norms;
        if (randomized) {
            trial_specs = draw_randomized_setup(cfg.dim, rng);
            for (const auto& s : trial_specs) {
                trial_samplers.emplace_back(s);
                trial_norms.push_back(frobenius_sq(s.covariance));
            }
            specs = &trial_specs;
            samplers = &trial_samplers;
            norms = &trial_norms;
        }

        LabeledDataset data;
        for (std::size_t k = 0; k < specs->size(); ++k) {
            data.labels.push_back(std::to_string(k + 1));
            data.classes.push_back((*samplers)[k].draw((*specs)[k].count, rng));
        }

        for (std::size_t m = 0; m < m_count; ++m) {
            const auto t0 = std::chrono::steady_clock::now();
            const std::vector<ShrinkageEstimate> estimates = run_method(data, cfg.methods[m]);
            elapsed[t * m_count + m] = seconds_since(t0);
            for (std::size_t k = 0; k < k_count; ++k) {
                const Matrix& truth = (*specs)[k].covariance;
                const double err = kernels::dist_sq(estimates[k].matrix.data(), truth.data(),
                                                    truth.size());
                nmse[(t * m_count + m) * k_count + k] = err / (*norms)[k];
            }
        }
    });

    std::vector<SimulationRow> rows;
    for (std::size_t m = 0; m < m_count; ++m) {
        std::vector<double> times(cfg.trials);
        for (std::size_t t = 0; t < cfg.trials; ++t) times[t] = elapsed[t * m_count + m];
        const double mean_time = mean_std(times).mean;
        for (std::size_t k = 0; k < k_count; ++k) {
            std::vector<double> values(cfg.trials);
            for (std::size_t t = 0; t < cfg.trials; ++t)
                values[t] = nmse[(t * m_count + m) * k_count + k];
            const MeanStd ms = mean_std(values);
            SimulationRow row;
            row.setup = cfg.setup_label;
            row.class_index = k + 1;
            row.method = method_token(cfg.methods[m]);
            row.nmse_mean = ms.mean;
            row.nmse_std = ms.std_dev;
            row.wall_time = mean_time;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_simulation_csv(const std::string& path, const SimulationConfig& cfg,
                          const std::vector<SimulationRow>& rows) {
    std::ofstream out = open_output(path);
    out << "# simulate setup=" << cfg.setup_label << " p=" << cfg.dim
        << " trials=" << cfg.trials << " seed=" << cfg.seed << "\n";
    out << "setup,class,method,nmse_mean,nmse_std\n";
    for (const auto& r : rows)
        out << r.setup << ',' << r.class_index << ',' << r.method << ',' << fmt(r.nmse_mean)
            << ',' << fmt(r.nmse_std) << "\n";
    if (!out) throw InvalidInputError("failed while writing: " + path);
}

ClassifierSpec parse_classifier(std::string_view token) {
    ClassifierSpec spec;
    if (token == "CV5") {
        spec.is_cv = true;
        spec.folds = 5;
        return spec;
    }
    if (token == "CV10") {
        spec.is_cv = true;
        spec.folds = 10;
        return spec;
    }
    spec.method = parse_method(token);
    return spec;
}

std::string classifier_token(const ClassifierSpec& spec) {
    if (spec.is_cv) return "CV" + std::to_string(spec.folds);
    return method_token(spec.method);
}

std::vector<ClassificationRow> run_classification(const ClassificationConfig& cfg) {
    if (cfg.reps < 1) throw InvalidInputError("run_classification: need at least 1 repetition");
    if (cfg.methods.empty()) throw InvalidInputError("run_classification: no methods given");
    if (cfg.data.num_classes() == 0)
        throw InvalidInputError("run_classification: empty dataset");

    const std::size_t m_count = cfg.methods.size();
    std::vector<double> acc(cfg.reps * m_count, 0.0);
    std::vector<double> elapsed(cfg.reps * m_count, 0.0);
    const std::uint64_t cv_master = RngStream::mix(cfg.seed, 0x63766d61);

    parallel_for(0, cfg.reps, cfg.threads, [&](std::size_t r) {
        RngStream split_rng = RngStream::derive(cfg.seed, r + 1);
        const auto [train_part, test_part] = split_train_test(cfg.data, cfg.split, split_rng);
        for (std::size_t m = 0; m < m_count; ++m) {
            const ClassifierSpec& spec = cfg.methods[m];
            const auto t0 = std::chrono::steady_clock::now();
            RdaModel model;
            if (spec.is_cv) {
                const std::uint64_t cv_seed = RngStream::mix(cv_master, r * m_count + m);
                model = train_cv(train_part, CvSpec::for_folds(spec.folds, cv_seed));
            } else {
                model = train(train_part, spec.method);
            }
            const double a = model.accuracy(test_part);
            elapsed[r * m_count + m] = seconds_since(t0);
            acc[r * m_count + m] = a;
        }
    });

    std::vector<ClassificationRow> rows;
    for (std::size_t m = 0; m < m_count; ++m) {
        std::vector<double> accs(cfg.reps), times(cfg.reps);
        for (std::size_t r = 0; r < cfg.reps; ++r) {
            accs[r] = acc[r * m_count + m];
            times[r] = elapsed[r * m_count + m];
        }
        const MeanStd ms = mean_std(accs);
        ClassificationRow row;
        row.method = classifier_token(cfg.methods[m]);
        row.mean_accuracy = ms.mean;
        row.accuracy_std = ms.std_dev;
        row.median_wall_time = median(times);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_classification_csv(const std::string& path, const ClassificationConfig& cfg,
                              const std::vector<ClassificationRow>& rows) {
    std::ofstream out = open_output(path);
    out << "# classify split=" << fmt(cfg.split) << " reps=" << cfg.reps
        << " seed=" << cfg.seed << "\n";
    out << "method,mean_accuracy,accuracy_std\n";
    for (const auto& r : rows)
        out << r.method << ',' << fmt(r.mean_accuracy) << ',' << fmt(r.accuracy_std) << "\n";
    if (!out) throw InvalidInputError("failed while writing: " + path);
}

SurfaceResult dump_surface(SetupName name, std::size_t p, std::size_t class_index_1based,
                           double step) {
    if (setup_is_randomized(name))
        throw InvalidInputError("surface: setup D has no fixed populations");
    RngStream mean_rng(0); // means do not enter the objective
    return dump_surface(make_setup(name, p, mean_rng), setup_name_str(name),
                        class_index_1based, step);
}

SurfaceResult dump_surface(const std::vector<PopulationSpec>& specs, const std::string& label,
                           std::size_t class_index_1based, double step) {
    if (specs.empty()) throw InvalidInputError("surface: no populations");
    if (class_index_1based < 1 || class_index_1based > specs.size())
        throw InvalidInputError("surface: class index out of range (1.." +
                                std::to_string(specs.size()) + ")");
    if (!(step > 0.0 && step <= 1.0))
        throw InvalidInputError("surface: step must lie in (0, 1]");

    SurfaceResult result;
    result.setup = label;
    result.class_index = class_index_1based;
    const PopulationMoments moments = true_moments(specs);
    result.poly = coefficients_full(moments, class_index_1based - 1);

    std::vector<double> grid;
    const auto n = static_cast<std::size_t>(std::floor(1.0 / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i)
        grid.push_back(std::min(1.0, static_cast<double>(i) * step));
    if (grid.back() < 1.0) grid.push_back(1.0);

    for (double a : grid)
        for (double b : grid)
            result.points.push_back({a, b, evaluate_nmse(result.poly, a, b), false});

    const TuningResult opt = optimize_full(result.poly);
    result.points.push_back(
        {opt.alpha, opt.beta, evaluate_nmse(result.poly, opt.alpha, opt.beta), true});
    return result;
}

void write_surface_csv(const std::string& path, const SurfaceResult& surface) {
    std::ofstream out = open_output(path);
    out << "# surface setup=" << surface.setup << " class=" << surface.class_index << "\n";
    out << "alpha,beta,nmse,optimum\n";
    for (const auto& pt : surface.points)
        out << fmt(pt.alpha) << ',' << fmt(pt.beta) << ',' << fmt(pt.nmse) << ','
            << (pt.optimum ? 1 : 0) << "\n";
    if (!out) throw InvalidInputError("failed while writing: " + path);
}

} // namespace rscm
