#include "regime/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace regime::eval {

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

SelectionTable model_selection_table(const std::vector<FitEntry>& fits,
                                     std::size_t num_observations) {
    if (fits.empty()) throw std::invalid_argument("model_selection_table: no fits");
    SelectionTable table;
    for (const auto& fit : fits) {
        auto ic = markov::information_criteria(fit.model, fit.log_likelihood, num_observations);
        table.rows.push_back(
            {fit.label, fit.log_likelihood, ic.aic, ic.bic, fit.model.num_free_parameters()});
    }
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const SelectionRow& a, const SelectionRow& b) { return a.bic < b.bic; });
    return table;
}

std::string SelectionTable::to_csv() const {
    std::ostringstream out;
    out << "model,log_likelihood,n_params,aic,bic\n";
    for (const auto& r : rows)
        out << r.label << ',' << fmt(r.log_likelihood) << ',' << r.n_params << ','
            << fmt(r.aic) << ',' << fmt(r.bic) << '\n';
    return out.str();
}

std::string SelectionTable::to_text() const {
    std::size_t w = 5;
    for (const auto& r : rows) w = std::max(w, r.label.size());
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-*s  %14s  %8s  %14s  %14s\n", static_cast<int>(w),
                  "model", "logL", "params", "AIC", "BIC");
    out << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-*s  %14.4f  %8zu  %14.4f  %14.4f\n",
                      static_cast<int>(w), r.label.c_str(), r.log_likelihood, r.n_params, r.aic,
                      r.bic);
        out << buf;
    }
    return out.str();
}

EvalReport comparison_report(const std::vector<ModelEval>& models,
                             const std::vector<double>& truths) {
    if (models.empty() || truths.empty())
        throw std::invalid_argument("comparison_report: nothing to compare");
    EvalReport report;
    report.n = truths.size();
    for (const auto& m : models) {
        if (m.predictions.size() != truths.size())
            throw std::invalid_argument("comparison_report: model '" + m.name +
                                        "' evaluated on a different test set");
        report.rows.push_back({m.name, metrics(truths, m.predictions)});
    }
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const EvalRow& a, const EvalRow& b) {
                         return a.metric.rmse < b.metric.rmse;
                     });
    return report;
}

std::string EvalReport::to_json() const {
    nlohmann::json doc;
    doc["n"] = n;
    doc["models"] = nlohmann::json::array();
    for (const auto& r : rows) {
        doc["models"].push_back({{"name", r.name},
                                 {"rmse", r.metric.rmse},
                                 {"mape_percent", r.metric.mape},
                                 {"r2", r.metric.r2},
                                 {"mape_skipped", r.metric.mape_skipped}});
    }
    // RMSEs reported for the original PeMS VDS experiment, for orientation
    // only: this data and split are not that benchmark.
    doc["published_reference_rmse"] = {
        {"lstm", 0.8235}, {"s-hybrid", 0.5326}, {"c-hybrid", 0.4203}};
    return doc.dump(2);
}

std::string trace_csv(const std::vector<std::int64_t>& timestamps,
                      const std::vector<double>& truths, const std::vector<ModelEval>& models) {
    if (timestamps.size() != truths.size())
        throw std::invalid_argument("trace_csv: timestamp/truth mismatch");
    for (const auto& m : models)
        if (m.predictions.size() != truths.size())
            throw std::invalid_argument("trace_csv: prediction length mismatch");

    // Prefer the first midnight boundary so the trace covers one calendar
    // day; fall back to the start of the series.
    std::size_t begin = 0;
    for (std::size_t i = 0; i < timestamps.size(); ++i)
        if (timestamps[i] % 86400 == 0 && timestamps[i] + 86400 <= timestamps.back() + 1) {
            begin = i;
            break;
        }
    const std::int64_t limit = timestamps[begin] + 86400;

    std::ostringstream out;
    out << "timestamp,truth";
    for (const auto& m : models) out << ',' << m.name;
    out << '\n';
    for (std::size_t i = begin; i < timestamps.size() && timestamps[i] < limit; ++i) {
        out << timestamps[i] << ',' << fmt(truths[i]);
        for (const auto& m : models) out << ',' << fmt(m.predictions[i]);
        out << '\n';
    }
    return out.str();
}

}  // namespace regime::eval
