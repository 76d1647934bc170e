#pragma once

#include "rscm/dataset.hpp"
#include "rscm/msepoly.hpp"
#include "rscm/shrink.hpp"
#include "rscm/synth.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rscm {

// ---- covariance estimation benchmark -------------------------------

struct SimulationConfig {
    SetupName setup = SetupName::A;
    bool use_custom = false;
    std::vector<PopulationSpec> custom; // used when use_custom is true
    std::string setup_label = "A";
    std::size_t dim = 200;              // ignored for custom populations
    std::size_t trials = 400;
    std::uint64_t seed = 0;
    std::vector<Method> methods;
    unsigned threads = 1;               // 0 = hardware concurrency
};

struct SimulationRow {
    std::string setup;
    std::size_t class_index = 0; // 1-based
    std::string method;
    double nmse_mean = 0.0;
    double nmse_std = 0.0;       // sample standard deviation over trials
    double wall_time = 0.0;      // mean seconds per trial for the method
};

// Per (method, class) normalized MSE over independent trials. Results
// are byte-identical for a fixed seed regardless of thread count:
// trial i always consumes the stream derived from (seed, i + 1) and
// writes into its own slot. Wall time is carried in the rows but never
// written to CSV (it cannot be deterministic).
std::vector<SimulationRow> run_simulation(const SimulationConfig& cfg);

void write_simulation_csv(const std::string& path, const SimulationConfig& cfg,
                          const std::vector<SimulationRow>& rows);

// ---- classification benchmark --------------------------------------

// A classifier under comparison: a covariance method applied through
// the discriminant rule, or cross-validated tuning (CV5 / CV10).
struct ClassifierSpec {
    bool is_cv = false;
    Method method = Method::Poly;
    int folds = 5;
};

ClassifierSpec parse_classifier(std::string_view token);
std::string classifier_token(const ClassifierSpec& spec);

struct ClassificationConfig {
    LabeledDataset data;
    std::vector<ClassifierSpec> methods;
    double split = 0.5;   // training fraction per class
    std::size_t reps = 10;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct ClassificationRow {
    std::string method;
    double mean_accuracy = 0.0;
    double accuracy_std = 0.0;
    double median_wall_time = 0.0; // seconds per repetition; stdout only
};

std::vector<ClassificationRow> run_classification(const ClassificationConfig& cfg);

void write_classification_csv(const std::string& path, const ClassificationConfig& cfg,
                              const std::vector<ClassificationRow>& rows);

// ---- objective surface ----------------------------------------------

struct SurfacePoint {
    double alpha = 0.0;
    double beta = 0.0;
    double nmse = 0.0;
    bool optimum = false;
};

struct SurfaceResult {
    std::string setup;
    std::size_t class_index = 0; // 1-based
    MsePolynomial poly;
    std::vector<SurfacePoint> points; // grid rows followed by the optimum row
};

// Ground-truth normalized MSE surface of one class of a fixed setup,
// sampled on a step grid, plus the analytically refined optimum.
SurfaceResult dump_surface(SetupName name, std::size_t p, std::size_t class_index_1based,
                           double step);
SurfaceResult dump_surface(const std::vector<PopulationSpec>& specs, const std::string& label,
                           std::size_t class_index_1based, double step);

void write_surface_csv(const std::string& path, const SurfaceResult& surface);

// Estimates for one method computed end to end from a dataset
// (statistics, moments when the method needs them, tuning, assembly).
std::vector<ShrinkageEstimate> run_method(const LabeledDataset& data, Method method);

} // namespace rscm
