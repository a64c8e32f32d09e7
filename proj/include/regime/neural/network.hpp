#pragma once

#include <vector>

#include "regime/core/matrix.hpp"
#include "regime/neural/layers.hpp"

namespace regime::neural {

// One or two LSTM branches, concatenated final hidden states, dense head.
// The optional fixed output reduction averages a 2-unit terminal layer to
// the scalar prediction (used when an architecture lists a 2-unit last
// dense layer for a scalar target).
struct NetworkGraph {
    std::vector<std::vector<LstmLayerParams>> branches;
    std::vector<DenseLayerParams> head;
    std::size_t window = 0;
    bool reduce_mean_output = false;

    void validate() const;
    std::size_t num_parameters() const;
    // Same topology, all parameters zero; used for gradients and optimizer slots.
    NetworkGraph zeros_like() const;
    // Width of the input to the final dense layer (the feature vector).
    std::size_t feature_dim() const;
    std::size_t merged_dim() const;
};

// All parameter arrays, in a fixed traversal order.
std::vector<std::vector<double>*> parameter_spans(NetworkGraph& net);
std::vector<const std::vector<double>*> parameter_spans(const NetworkGraph& net);

struct LstmSeqCache {
    Matrix f, i, o, g, c, h;  // T x units
};

struct ForwardCache {
    std::vector<std::vector<LstmSeqCache>> lstm;  // per branch, per layer
    std::vector<double> merged;                   // concatenated final hidden states
    std::vector<std::vector<double>> dense_pre;   // per head layer pre-activations
    std::vector<std::vector<double>> dense_out;   // per head layer activations
};

struct ForwardResult {
    double prediction = 0.0;
    std::vector<double> features;  // input of the final dense layer
    ForwardCache cache;
};

// inputs: one window x input_dim matrix per branch; initial h, c are zero.
ForwardResult forward(const NetworkGraph& net, const std::vector<Matrix>& inputs);

// Exact gradients of loss_grad * prediction w.r.t. every parameter,
// backpropagated through the dense head and through time in each branch.
NetworkGraph backward(const NetworkGraph& net, const std::vector<Matrix>& inputs,
                      const ForwardResult& fwd, double loss_grad);

// Accumulate src into dst (same topology).
void axpy(NetworkGraph& dst, const NetworkGraph& src, double scale = 1.0);

struct MseResult {
    double loss = 0.0;
    std::vector<double> grad;  // d loss / d pred_i = 2 (pred - target) / N
};
MseResult mse_loss(const std::vector<double>& pred, const std::vector<double>& target);

}  // namespace regime::neural
