#include "rscm/dataset.hpp"

#include "rscm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace rscm {

std::size_t LabeledDataset::total_count() const {
    std::size_t n = 0;
    for (const auto& c : classes) n += c.rows();
    return n;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_number(const std::string& s, std::size_t line_no, const std::string& col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
        return v;
    } catch (const std::exception&) {
        throw InvalidInputError("csv line " + std::to_string(line_no) + ": column \"" + col +
                                "\" has non-numeric value \"" + s + "\"");
    }
}

} // namespace

LabeledDataset load_csv(const std::string& path, const std::string& label_column,
                        CsvLoadReport* report) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open csv file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw InvalidInputError("csv file is empty: " + path);
    const std::vector<std::string> header = split_csv_line(line);
    if (header.empty()) throw InvalidInputError("csv header row is empty: " + path);

    std::size_t label_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == label_column) label_idx = i;
    if (label_idx == header.size())
        throw InvalidInputError("label column \"" + label_column + "\" not found in " + path);

    std::vector<std::string> feature_names;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (i != label_idx) feature_names.push_back(header[i]);
    if (feature_names.empty())
        throw InvalidInputError("csv has no feature columns besides the label: " + path);

    std::vector<std::string> labels;                // class order of first appearance
    std::vector<std::vector<Vector>> rows_by_class; // raw rows before column dropping
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw InvalidInputError("csv line " + std::to_string(line_no) + ": expected " +
                                    std::to_string(header.size()) + " fields, got " +
                                    std::to_string(fields.size()));
        const std::string& label = fields[label_idx];
        std::size_t k = labels.size();
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) k = i;
        if (k == labels.size()) {
            labels.push_back(label);
            rows_by_class.emplace_back();
        }
        Vector row;
        row.reserve(feature_names.size());
        std::size_t fi = 0;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i == label_idx) continue;
            row.push_back(parse_number(fields[i], line_no, feature_names[fi]));
            ++fi;
        }
        rows_by_class[k].push_back(std::move(row));
    }
    if (labels.empty()) throw InvalidInputError("csv has no data rows: " + path);
    for (std::size_t k = 0; k < labels.size(); ++k)
        if (rows_by_class[k].size() < 2)
            throw InvalidInputError("class \"" + labels[k] + "\" has fewer than 2 samples");

    // Drop features that are constant within any single class: such a
    // feature carries no within-class scatter there and degenerates the
    // class covariance estimate.
    const std::size_t p_raw = feature_names.size();
    std::vector<bool> keep(p_raw, true);
    for (const auto& rows : rows_by_class) {
        for (std::size_t j = 0; j < p_raw; ++j) {
            if (!keep[j]) continue;
            const double first = rows.front()[j];
            bool constant = true;
            for (const auto& r : rows)
                if (r[j] != first) {
                    constant = false;
                    break;
                }
            if (constant) keep[j] = false;
        }
    }

    std::vector<std::size_t> kept_idx;
    for (std::size_t j = 0; j < p_raw; ++j) {
        if (keep[j]) kept_idx.push_back(j);
        else if (report) report->dropped_columns.push_back(feature_names[j]);
    }
    if (kept_idx.empty())
        throw InvalidInputError("csv: every feature column is constant within some class");

    LabeledDataset data;
    data.labels = std::move(labels);
    for (std::size_t k = 0; k < rows_by_class.size(); ++k) {
        const auto& rows = rows_by_class[k];
        Matrix m(rows.size(), kept_idx.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t j = 0; j < kept_idx.size(); ++j) m(r, j) = rows[r][kept_idx[j]];
        data.classes.push_back(std::move(m));
    }
    return data;
}

LabeledDataset synthesize_dataset(const std::vector<PopulationSpec>& specs, RngStream& rng) {
    if (specs.empty()) throw InvalidInputError("synthesize_dataset: no populations given");
    LabeledDataset data;
    for (std::size_t k = 0; k < specs.size(); ++k) {
        if (specs[k].count < 2)
            throw InvalidInputError("synthesize_dataset: population " + std::to_string(k + 1) +
                                    " needs count >= 2");
        data.labels.push_back(std::to_string(k + 1));
        data.classes.push_back(sample_population(specs[k], specs[k].count, rng));
    }
    return data;
}

std::pair<LabeledDataset, LabeledDataset> split_train_test(const LabeledDataset& data,
                                                           double split, RngStream& rng) {
    if (!(split > 0.0 && split < 1.0))
        throw InvalidInputError("split_train_test: split must lie in (0, 1)");
    LabeledDataset train, test;
    train.labels = data.labels;
    test.labels = data.labels;
    for (std::size_t k = 0; k < data.num_classes(); ++k) {
        const Matrix& cls = data.classes[k];
        const std::size_t n = cls.rows();
        if (n < 2)
            throw InvalidInputError("split_train_test: class \"" + data.labels[k] +
                                    "\" has fewer than 2 samples");
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t i = n - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
            std::swap(idx[i], idx[j]);
        }
        std::size_t n_train = static_cast<std::size_t>(std::lround(split * static_cast<double>(n)));
        n_train = std::min(std::max<std::size_t>(n_train, 1), n - 1);
        Matrix tr(n_train, cls.cols());
        Matrix te(n - n_train, cls.cols());
        for (std::size_t i = 0; i < n; ++i) {
            const double* src = cls.row(idx[i]);
            double* dst = (i < n_train) ? tr.row(i) : te.row(i - n_train);
            std::copy(src, src + cls.cols(), dst);
        }
        train.classes.push_back(std::move(tr));
        test.classes.push_back(std::move(te));
    }
    return {std::move(train), std::move(test)};
}

} // namespace rscm
