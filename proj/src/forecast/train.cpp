#include "regime/forecast/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "regime/core/rng.hpp"

namespace regime::forecast {

using neural::NetworkGraph;

double evaluate_mse(const NetworkGraph& net, const SampleSet& samples) {
    double sse = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double r = neural::forward(net, samples.inputs[i]).prediction - samples.targets[i];
        sse += r * r;
    }
    return sse / static_cast<double>(samples.size());
}

std::vector<double> predict(const NetworkGraph& net, const SampleSet& samples) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        out.push_back(neural::forward(net, samples.inputs[i]).prediction);
    return out;
}

void train(NetworkGraph& net, const SampleSet& train_set, const SampleSet& val_set,
           TrainRun& run) {
    if (train_set.size() == 0 || val_set.size() == 0)
        throw std::invalid_argument("train: empty train or validation set");
    net.validate();
    run.history.clear();

    Rng shuffle_rng(run.seed, "shuffle");
    neural::AdadeltaState opt(net, run.optimizer);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    NetworkGraph best = net;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;

    for (std::size_t epoch = 0; epoch < run.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng.engine());
        double train_sse = 0.0;
        for (std::size_t start = 0; start < order.size(); start += run.batch_size) {
            const std::size_t stop = std::min(order.size(), start + run.batch_size);
            NetworkGraph grads = net.zeros_like();
            for (std::size_t b = start; b < stop; ++b) {
                const std::size_t i = order[b];
                auto fwd = neural::forward(net, train_set.inputs[i]);
                const double r = fwd.prediction - train_set.targets[i];
                if (!std::isfinite(r))
                    throw std::runtime_error("train: non-finite loss at epoch " +
                                             std::to_string(epoch) + ", batch index " +
                                             std::to_string(start / run.batch_size));
                train_sse += r * r;
                auto g = neural::backward(net, train_set.inputs[i], fwd,
                                          2.0 * r / static_cast<double>(stop - start));
                neural::axpy(grads, g);
            }
            neural::adadelta_step(opt, net, grads);
        }

        EpochStat stat;
        stat.epoch = epoch;
        stat.train_mse = train_sse / static_cast<double>(train_set.size());
        stat.val_mse = evaluate_mse(net, val_set);
        run.history.push_back(stat);

        if (stat.val_mse < best_val) {
            best_val = stat.val_mse;
            best = net;
            run.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best > run.patience) {
            break;
        }
    }
    net = best;
}

std::vector<double> reintegrate_flow(const data::SeriesBundle& bundle, const SampleSet& samples,
                                     const std::vector<double>& predictions) {
    if (predictions.size() != samples.size())
        throw std::invalid_argument("reintegrate_flow: prediction count mismatch");
    std::vector<double> flow_hat(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::size_t t = samples.target_index[i];  // delta index: flow[t+1]-flow[t]
        flow_hat[i] = bundle.flow[t] + data::destandardize(bundle, predictions[i]);
    }
    return flow_hat;
}

}  // namespace regime::forecast
