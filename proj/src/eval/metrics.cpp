#include "regime/eval/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace regime::eval {

MetricSet metrics(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
    if (y_true.empty() || y_true.size() != y_pred.size())
        throw std::invalid_argument("metrics: empty or mismatched inputs");
    const std::size_t n = y_true.size();
    double mean = 0.0;
    for (double y : y_true) mean += y;
    mean /= static_cast<double>(n);

    double sse = 0.0, sst = 0.0, ape = 0.0;
    std::size_t ape_n = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y_true[i] - y_pred[i];
        sse += r * r;
        sst += (y_true[i] - mean) * (y_true[i] - mean);
        if (y_true[i] != 0.0) {
            ape += std::abs(r / y_true[i]);
            ++ape_n;
        }
    }
    MetricSet out;
    out.n = n;
    out.rmse = std::sqrt(sse / static_cast<double>(n));
    out.mape_skipped = n - ape_n;
    out.mape = ape_n > 0 ? 100.0 * ape / static_cast<double>(ape_n) : 0.0;
    out.r2 = sst > 0.0 ? 1.0 - sse / sst : (sse == 0.0 ? 1.0 : 0.0);
    return out;
}

std::string to_string(RegimeLabel label) {
    switch (label) {
        case RegimeLabel::Low: return "low";
        case RegimeLabel::Increasing: return "increasing";
        case RegimeLabel::High: return "high";
        case RegimeLabel::Decreasing: return "decreasing";
    }
    throw std::logic_error("unknown RegimeLabel");
}

RegimeLabel regime_label(std::int64_t timestamp) {
    std::int64_t sec = timestamp % 86400;
    if (sec < 0) sec += 86400;
    const int hour = static_cast<int>(sec / 3600);
    if (hour < 6) return RegimeLabel::Low;
    if (hour < 8) return RegimeLabel::Increasing;
    if (hour < 18) return RegimeLabel::High;
    return RegimeLabel::Decreasing;
}

std::vector<double> feature_variance(const Matrix& features,
                                     const std::vector<RegimeLabel>& labels) {
    if (labels.size() != features.rows())
        throw std::invalid_argument("feature_variance: label/row mismatch");
    std::vector<double> out(4, 0.0);
    for (int g = 0; g < 4; ++g) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (static_cast<int>(labels[i]) == g) rows.push_back(i);
        if (rows.size() < 2)
            throw std::invalid_argument("feature_variance: regime " +
                                        to_string(static_cast<RegimeLabel>(g)) +
                                        " has fewer than 2 samples");
        double total = 0.0;
        for (std::size_t d = 0; d < features.cols(); ++d) {
            double mean = 0.0;
            for (std::size_t i : rows) mean += features(i, d);
            mean /= static_cast<double>(rows.size());
            double ss = 0.0;
            for (std::size_t i : rows) ss += (features(i, d) - mean) * (features(i, d) - mean);
            total += ss / static_cast<double>(rows.size() - 1);
        }
        out[g] = total / static_cast<double>(features.cols());
    }
    return out;
}

}  // namespace regime::eval
