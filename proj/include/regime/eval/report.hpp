#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regime/eval/metrics.hpp"
#include "regime/markov/model.hpp"

namespace regime::eval {

struct FitEntry {
    std::string label;  // human-readable config, e.g. "hsmm M=3 k=1 gamma"
    double log_likelihood = 0.0;
    markov::HsmmModel model;
};

struct SelectionRow {
    std::string label;
    double log_likelihood = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::size_t n_params = 0;
};

struct SelectionTable {
    std::vector<SelectionRow> rows;  // ascending BIC

    std::string to_csv() const;
    std::string to_text() const;  // aligned columns
};

SelectionTable model_selection_table(const std::vector<FitEntry>& fits,
                                     std::size_t num_observations);

struct ModelEval {
    std::string name;
    std::vector<double> predictions;  // aligned with the shared truths
};

struct EvalRow {
    std::string name;
    MetricSet metric;
};

struct EvalReport {
    std::vector<EvalRow> rows;  // ascending RMSE
    std::size_t n = 0;

    std::string to_json() const;  // includes published reference rows as metadata
};

EvalReport comparison_report(const std::vector<ModelEval>& models,
                             const std::vector<double>& truths);

// 24-hour window of the test trace for plotting: timestamp, truth, one
// column per model. Rows are taken from the first full day present.
std::string trace_csv(const std::vector<std::int64_t>& timestamps,
                      const std::vector<double>& truths, const std::vector<ModelEval>& models);

}  // namespace regime::eval
