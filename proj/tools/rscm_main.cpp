#include "rscm/dataset.hpp"
#include "rscm/errors.hpp"
#include "rscm/harness.hpp"
#include "rscm/kernels.hpp"
#include "rscm/msepoly.hpp"
#include "rscm/rda.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

bool looks_like_json(const std::string& path) {
    return path.size() > 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

bool is_preset_setup(const std::string& s) {
    return s == "A" || s == "B" || s == "C" || s == "D" || s == "a" || s == "b" ||
           s == "c" || s == "d";
}

struct SimulateArgs {
    std::string setup = "A";
    std::size_t p = 200;
    std::size_t trials = 400;
    bool full_scale = false;
    bool trials_given = false;
    std::uint64_t seed = 0;
    std::string methods = "SCM,POOL,POLY,POLYs";
    std::string out;
    unsigned threads = 1;
};

int do_simulate(const SimulateArgs& args) {
    rscm::SimulationConfig cfg;
    cfg.setup_label = args.setup;
    if (is_preset_setup(args.setup)) {
        cfg.setup = rscm::parse_setup_name(args.setup);
        cfg.setup_label = rscm::setup_name_str(cfg.setup);
        cfg.dim = args.p;
    } else {
        cfg.use_custom = true;
        cfg.custom = rscm::populations_from_json_file(args.setup);
        cfg.dim = cfg.custom.front().covariance.rows();
        cfg.setup_label = "custom";
    }
    cfg.trials = args.trials;
    if (args.full_scale && !args.trials_given) cfg.trials = 4000;
    cfg.seed = args.seed;
    cfg.threads = args.threads;
    for (const auto& token : split_list(args.methods))
        cfg.methods.push_back(rscm::parse_method(token));
    if (cfg.methods.empty()) throw rscm::InvalidInputError("simulate: --methods list is empty");

    const std::vector<rscm::SimulationRow> rows = rscm::run_simulation(cfg);
    rscm::write_simulation_csv(args.out, cfg, rows);

    std::printf("setup %s  p=%zu  trials=%zu  seed=%llu\n", cfg.setup_label.c_str(), cfg.dim,
                cfg.trials, static_cast<unsigned long long>(cfg.seed));
    std::printf("%-10s %-6s %12s %12s %12s\n", "method", "class", "nmse_mean", "nmse_std",
                "time_ms");
    for (const auto& r : rows)
        std::printf("%-10s %-6zu %12.6g %12.6g %12.4g\n", r.method.c_str(), r.class_index,
                    r.nmse_mean, r.nmse_std, 1e3 * r.wall_time);
    std::printf("wrote %s\n", args.out.c_str());
    return kExitOk;
}

struct ClassifyArgs {
    std::string data;
    std::string label_col = "label";
    double split = 0.5;
    std::size_t reps = 10;
    std::string methods = "POLY-Ave,POLYs-Ave,CV5";
    std::uint64_t seed = 0;
    std::string out;
    unsigned threads = 1;
};

rscm::LabeledDataset load_input_dataset(const std::string& path, const std::string& label_col,
                                        std::uint64_t seed) {
    if (looks_like_json(path)) {
        const auto specs = rscm::populations_from_json_file(path);
        rscm::RngStream rng = rscm::RngStream::derive(seed, 0);
        return rscm::synthesize_dataset(specs, rng);
    }
    rscm::CsvLoadReport report;
    rscm::LabeledDataset data = rscm::load_csv(path, label_col, &report);
    for (const auto& col : report.dropped_columns)
        std::fprintf(stderr, "warning: dropped constant feature column \"%s\"\n", col.c_str());
    return data;
}

int do_classify(const ClassifyArgs& args) {
    rscm::ClassificationConfig cfg;
    cfg.data = load_input_dataset(args.data, args.label_col, args.seed);
    cfg.split = args.split;
    cfg.reps = args.reps;
    cfg.seed = args.seed;
    cfg.threads = args.threads;
    for (const auto& token : split_list(args.methods))
        cfg.methods.push_back(rscm::parse_classifier(token));
    if (cfg.methods.empty()) throw rscm::InvalidInputError("classify: --methods list is empty");

    const std::vector<rscm::ClassificationRow> rows = rscm::run_classification(cfg);
    rscm::write_classification_csv(args.out, cfg, rows);

    std::printf("classify %s  split=%.3g  reps=%zu  seed=%llu\n", args.data.c_str(), cfg.split,
                cfg.reps, static_cast<unsigned long long>(cfg.seed));
    std::printf("%-10s %14s %14s %14s\n", "method", "mean_accuracy", "accuracy_std",
                "median_time_ms");
    for (const auto& r : rows)
        std::printf("%-10s %14.6g %14.6g %14.4g\n", r.method.c_str(), r.mean_accuracy,
                    r.accuracy_std, 1e3 * r.median_wall_time);
    std::printf("wrote %s\n", args.out.c_str());
    return kExitOk;
}

struct SurfaceArgs {
    std::string setup = "A";
    std::size_t cls = 1;
    double step = 0.05;
    std::size_t p = 200;
    std::string out;
    std::string poly_out;
};

int do_surface(const SurfaceArgs& args) {
    rscm::SurfaceResult surface;
    if (is_preset_setup(args.setup)) {
        surface = rscm::dump_surface(rscm::parse_setup_name(args.setup), args.p, args.cls,
                                     args.step);
    } else {
        const auto specs = rscm::populations_from_json_file(args.setup);
        surface = rscm::dump_surface(specs, "custom", args.cls, args.step);
    }
    rscm::write_surface_csv(args.out, surface);
    if (!args.poly_out.empty()) {
        std::ofstream out(args.poly_out);
        if (!out) throw rscm::InvalidInputError("cannot open output file: " + args.poly_out);
        out << rscm::polynomial_to_json(surface.poly) << "\n";
    }
    const auto& opt = surface.points.back();
    std::printf("surface setup=%s class=%zu step=%.4g points=%zu\n", surface.setup.c_str(),
                surface.class_index, args.step, surface.points.size() - 1);
    std::printf("optimum alpha=%.6f beta=%.6f nmse=%.7f\n", opt.alpha, opt.beta, opt.nmse);
    std::printf("wrote %s\n", args.out.c_str());
    return kExitOk;
}

struct EstimateArgs {
    std::string data;
    std::string label_col = "label";
    std::string method = "POLY";
    std::string basis = "sign";
    std::uint64_t seed = 0;
    std::string out;
};

int do_estimate(const EstimateArgs& args) {
    const rscm::LabeledDataset data = load_input_dataset(args.data, args.label_col, args.seed);
    rscm::InnerProductBasis basis;
    if (args.basis == "sign") basis = rscm::InnerProductBasis::SpatialSign;
    else if (args.basis == "sample") basis = rscm::InnerProductBasis::Sample;
    else throw rscm::InvalidInputError("estimate: --inner-basis must be sign or sample");

    const rscm::ClassifierSpec spec = rscm::parse_classifier(args.method);
    std::vector<std::string> warnings;
    rscm::RdaModel model;
    if (spec.is_cv) {
        model = rscm::train_cv(data, rscm::CvSpec::for_folds(spec.folds, args.seed));
    } else {
        model = rscm::train(data, spec.method, basis, &warnings);
    }
    for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

    std::ofstream out(args.out);
    if (!out) throw rscm::InvalidInputError("cannot open output file: " + args.out);
    out << rscm::model_to_json(model) << "\n";
    std::printf("estimated %zu classes (dim %zu) with %s\n", model.classes.size(), model.dim(),
                model.provenance.c_str());
    for (const auto& c : model.classes)
        std::printf("  class %-12s alpha=%.6f beta=%.6f\n", c.label.c_str(), c.alpha, c.beta);
    std::printf("wrote %s\n", args.out.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiclass regularized covariance estimation and discriminant analysis"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Estimation benchmark over synthetic populations (NMSE per method/class)");
    simulate->add_option("--setup", sim.setup, "Preset A|B|C|D or a population JSON file");
    simulate->add_option("--p", sim.p, "Dimension for preset setups");
    CLI::Option* trials_opt = simulate->add_option("--trials", sim.trials, "Monte Carlo trials");
    simulate->add_flag("--full-scale", sim.full_scale,
                       "Use 4000 trials unless --trials is given");
    simulate->add_option("--seed", sim.seed, "Master seed");
    simulate->add_option("--methods", sim.methods, "Comma-separated method list");
    simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");
    simulate->add_option("--out", sim.out, "Output CSV path")->required();

    ClassifyArgs cls;
    CLI::App* classify = app.add_subcommand(
        "classify", "Discriminant-analysis benchmark on a CSV or synthetic JSON dataset");
    classify->add_option("--data", cls.data, "CSV file or population JSON")->required();
    classify->add_option("--label-col", cls.label_col, "Label column name (CSV input)");
    classify->add_option("--split", cls.split, "Training fraction per class");
    classify->add_option("--reps", cls.reps, "Random split repetitions");
    classify->add_option("--methods", cls.methods,
                         "Comma-separated methods; CV5 and CV10 cross-validate");
    classify->add_option("--seed", cls.seed, "Master seed");
    classify->add_option("--threads", cls.threads, "Worker threads (0 = all cores)");
    classify->add_option("--out", cls.out, "Output CSV path")->required();

    SurfaceArgs surf;
    CLI::App* surface = app.add_subcommand(
        "surface", "Ground-truth normalized MSE surface of one class of a fixed setup");
    surface->add_option("--setup", surf.setup, "Preset A|B|C or a population JSON file");
    surface->add_option("--class", surf.cls, "Class index (1-based)")->required();
    surface->add_option("--step", surf.step, "Grid step in (0, 1]");
    surface->add_option("--p", surf.p, "Dimension for preset setups");
    surface->add_option("--out", surf.out, "Output CSV path")->required();
    surface->add_option("--poly-out", surf.poly_out, "Also write the objective as JSON");

    EstimateArgs est;
    CLI::App* estimate = app.add_subcommand(
        "estimate", "Fit class covariance estimates on a dataset and export them as JSON");
    estimate->add_option("--data", est.data, "CSV file or population JSON")->required();
    estimate->add_option("--label-col", est.label_col, "Label column name (CSV input)");
    estimate->add_option("--method", est.method, "Method token (or CV5/CV10)");
    estimate->add_option("--inner-basis", est.basis,
                         "Cross-class inner product basis: sign or sample");
    estimate->add_option("--seed", est.seed, "Seed for synthetic JSON input or CV folds");
    estimate->add_option("--out", est.out, "Output JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (simulate->parsed()) {
            sim.trials_given = trials_opt->count() > 0;
            return do_simulate(sim);
        }
        if (classify->parsed()) return do_classify(cls);
        if (surface->parsed()) return do_surface(surf);
        if (estimate->parsed()) return do_estimate(est);
    } catch (const rscm::InvalidInputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    } catch (const rscm::NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
    return kExitInput;
}
