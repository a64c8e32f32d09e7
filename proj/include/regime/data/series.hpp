#pragma once

#include <cstdint>
#include <vector>

namespace regime::data {

// Chronological train/val/test boundaries over the delta series:
// [0, train_end), [train_end, val_end), [val_end, size).
struct SplitBoundaries {
    std::size_t train_end = 0;
    std::size_t val_end = 0;
};

// A flow series with its first-difference fluctuation. timestamps align
// with flow; delta[t] = flow[t+1] - flow[t] and is labeled with
// timestamps[t+1] (the instant the new reading arrives).
struct SeriesBundle {
    std::vector<std::int64_t> timestamps;  // epoch seconds, 5-minute grid
    std::vector<double> flow;
    std::vector<double> delta;
    std::vector<double> delta_std;  // standardized delta (after standardize)
    double mean = 0.0;
    double stddev = 1.0;
    bool standardized = false;
    SplitBoundaries splits;

    std::int64_t delta_timestamp(std::size_t t) const { return timestamps[t + 1]; }
};

SeriesBundle make_bundle(std::vector<std::int64_t> timestamps, std::vector<double> flow);

// Contiguous chronological split with floor-based boundaries.
void split(SeriesBundle& bundle, double train_frac = 0.60, double val_frac = 0.15);

// z-scores delta using mean/std of the train split only.
void standardize(SeriesBundle& bundle);

double destandardize(const SeriesBundle& bundle, double z);

// Sliding next-step supervision: window [i, i+width) predicts value[i+width].
struct WindowSet {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    std::vector<std::size_t> target_index;  // index of the target within the source span
};

WindowSet make_windows(const std::vector<double>& values, std::size_t begin, std::size_t end,
                       std::size_t width);

}  // namespace regime::data
