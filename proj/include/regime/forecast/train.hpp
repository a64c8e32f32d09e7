#pragma once

#include <cstdint>
#include <vector>

#include "regime/data/series.hpp"
#include "regime/forecast/features.hpp"
#include "regime/neural/adadelta.hpp"
#include "regime/neural/network.hpp"

namespace regime::forecast {

struct EpochStat {
    std::size_t epoch = 0;
    double train_mse = 0.0;
    double val_mse = 0.0;
};

struct TrainRun {
    std::uint64_t seed = 0;
    std::size_t max_epochs = 500;
    std::size_t patience = 10;
    std::size_t batch_size = 64;
    neural::AdadeltaConfig optimizer;

    // Filled by train():
    std::vector<EpochStat> history;
    std::size_t best_epoch = 0;
};

// Mini-batch Adadelta on the mean squared error with early stopping on the
// validation set; the parameters with the lowest validation error are
// restored before returning. Shuffling draws from the run's "shuffle"
// substream, so a fixed seed reproduces the history bit for bit.
void train(neural::NetworkGraph& net, const SampleSet& train_set, const SampleSet& val_set,
           TrainRun& run);

std::vector<double> predict(const neural::NetworkGraph& net, const SampleSet& samples);

double evaluate_mse(const neural::NetworkGraph& net, const SampleSet& samples);

// Maps standardized delta predictions back to flow units:
// flow_hat[i] = flow[target_index[i]] + destandardized prediction.
std::vector<double> reintegrate_flow(const data::SeriesBundle& bundle, const SampleSet& samples,
                                     const std::vector<double>& predictions);

}  // namespace regime::forecast
