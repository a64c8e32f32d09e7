#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regime/core/matrix.hpp"

namespace regime::eval {

struct MetricSet {
    double rmse = 0.0;
    double mape = 0.0;  // percent
    double r2 = 0.0;
    std::size_t n = 0;
    std::size_t mape_skipped = 0;  // exact-zero truths excluded from MAPE
};

// RMSE, MAPE (x100, exact zeros skipped and counted) and R^2 against the
// mean of the truths.
MetricSet metrics(const std::vector<double>& y_true, const std::vector<double>& y_pred);

enum class RegimeLabel { Low, Increasing, High, Decreasing };

std::string to_string(RegimeLabel label);

// Hour-of-day bucket: [0,6) low, [6,8) increasing, [8,18) high, [18,24)
// decreasing. Timestamps are epoch seconds interpreted in UTC.
RegimeLabel regime_label(std::int64_t timestamp);

// Mean over feature dimensions of the per-dimension sample variance of the
// rows belonging to each regime.
std::vector<double> feature_variance(const Matrix& features,
                                     const std::vector<RegimeLabel>& labels);

}  // namespace regime::eval
