#include "regime/data/series.hpp"

#include <cmath>
#include <stdexcept>

namespace regime::data {

SeriesBundle make_bundle(std::vector<std::int64_t> timestamps, std::vector<double> flow) {
    if (flow.size() < 2) throw std::invalid_argument("make_bundle: need at least 2 flow values");
    if (timestamps.size() != flow.size())
        throw std::invalid_argument("make_bundle: timestamp/flow length mismatch");
    SeriesBundle b;
    b.timestamps = std::move(timestamps);
    b.flow = std::move(flow);
    b.delta.resize(b.flow.size() - 1);
    for (std::size_t t = 0; t + 1 < b.flow.size(); ++t) b.delta[t] = b.flow[t + 1] - b.flow[t];
    return b;
}

void split(SeriesBundle& bundle, double train_frac, double val_frac) {
    const std::size_t n = bundle.delta.size();
    if (n < 20) throw std::invalid_argument("split: series too short");
    bundle.splits.train_end = static_cast<std::size_t>(std::floor(train_frac * n));
    bundle.splits.val_end = static_cast<std::size_t>(std::floor((train_frac + val_frac) * n));
    if (bundle.splits.train_end == 0 || bundle.splits.val_end <= bundle.splits.train_end ||
        bundle.splits.val_end >= n)
        throw std::invalid_argument("split: degenerate fractions");
}

void standardize(SeriesBundle& bundle) {
    const std::size_t n = bundle.splits.train_end;
    if (n == 0) throw std::logic_error("standardize: call split first");
    double mean = 0.0;
    for (std::size_t t = 0; t < n; ++t) mean += bundle.delta[t];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double d = bundle.delta[t] - mean;
        var += d * d;
    }
    var /= static_cast<double>(n);
    if (var <= 0.0) throw std::runtime_error("standardize: constant train split");
    bundle.mean = mean;
    bundle.stddev = std::sqrt(var);
    bundle.delta_std.resize(bundle.delta.size());
    for (std::size_t t = 0; t < bundle.delta.size(); ++t)
        bundle.delta_std[t] = (bundle.delta[t] - mean) / bundle.stddev;
    bundle.standardized = true;
}

double destandardize(const SeriesBundle& bundle, double z) {
    return z * bundle.stddev + bundle.mean;
}

WindowSet make_windows(const std::vector<double>& values, std::size_t begin, std::size_t end,
                       std::size_t width) {
    if (end > values.size() || begin > end)
        throw std::invalid_argument("make_windows: bad span");
    if (end - begin <= width)
        throw std::invalid_argument("make_windows: span not longer than window");
    WindowSet out;
    for (std::size_t i = begin; i + width < end; ++i) {
        out.inputs.emplace_back(values.begin() + i, values.begin() + i + width);
        out.targets.push_back(values[i + width]);
        out.target_index.push_back(i + width);
    }
    return out;
}

}  // namespace regime::data
