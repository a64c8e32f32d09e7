#pragma once

#include <cstddef>
#include <vector>

#include "regime/core/matrix.hpp"
#include "regime/core/rng.hpp"

namespace regime::neural {

// Gate weight matrices act on the concatenation [h_prev, x_t]: the first
// `units` columns multiply the previous hidden state.
struct LstmLayerParams {
    std::size_t units = 0;
    std::size_t input_dim = 0;
    Matrix w_f, w_i, w_o, w_c;          // units x (units + input_dim)
    std::vector<double> b_f, b_i, b_o, b_c;

    void validate() const;
};

LstmLayerParams make_lstm_layer(std::size_t units, std::size_t input_dim);

enum class Activation { LeakyRelu, Linear };

inline constexpr double kLeakyReluAlpha = 0.01;

inline double leaky_relu(double x, double alpha = kLeakyReluAlpha) {
    return x >= 0.0 ? x : alpha * x;
}
inline double leaky_relu_grad(double x, double alpha = kLeakyReluAlpha) {
    return x >= 0.0 ? 1.0 : alpha;
}

struct DenseLayerParams {
    Matrix w;               // out_dim x in_dim
    std::vector<double> b;  // out_dim
    Activation activation = Activation::LeakyRelu;

    std::size_t out_dim() const { return b.size(); }
    std::size_t in_dim() const { return w.cols(); }
    void validate() const;
};

DenseLayerParams make_dense_layer(std::size_t out_dim, std::size_t in_dim, Activation act);

// Glorot-uniform initialization of one weight matrix.
void init_uniform(Matrix& w, std::size_t fan_in, std::size_t fan_out, Rng& rng);

// One LSTM step; exposed mainly so the cell equations can be checked in
// isolation against a scalar reimplementation.
struct LstmStep {
    std::vector<double> f, i, o, g, c, h;
};
LstmStep lstm_cell_forward(const LstmLayerParams& p, const std::vector<double>& x,
                           const std::vector<double>& h_prev, const std::vector<double>& c_prev);

}  // namespace regime::neural
