#pragma once

#include "rscm/matrix.hpp"
#include "rscm/rng.hpp"
#include "rscm/synth.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace rscm {

// Samples grouped by class. Class order is the order labels first
// appear (file order for CSV data, spec order for synthetic data).
struct LabeledDataset {
    std::vector<std::string> labels;
    std::vector<Matrix> classes; // classes[k] is n_k x p

    std::size_t num_classes() const { return classes.size(); }
    std::size_t dim() const { return classes.empty() ? 0 : classes.front().cols(); }
    std::size_t total_count() const;
    std::size_t class_count(std::size_t k) const { return classes[k].rows(); }
};

struct CsvLoadReport {
    std::vector<std::string> dropped_columns;
};

// Loads a numeric CSV with a header row. label_column names the class
// column; every other column must be numeric. Features that are
// constant within any single class are dropped (reported via report).
// Requires every class to keep at least 2 samples and 1 feature.
LabeledDataset load_csv(const std::string& path, const std::string& label_column,
                        CsvLoadReport* report = nullptr);

// Draws spec.count samples per population.
LabeledDataset synthesize_dataset(const std::vector<PopulationSpec>& specs, RngStream& rng);

// Stratified split: per class, shuffle then place round(split * n_k)
// samples in the training part (clamped so both parts get at least one
// sample when n_k >= 2). split must lie in (0, 1).
std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& data,
                                                           double split, RngStream& rng);

} // namespace rscm
