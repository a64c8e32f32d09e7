#include "regime/neural/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace regime::neural {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_gate(const Matrix& w, const std::vector<double>& b, std::size_t units,
                std::size_t width) {
    if (w.rows() != units || w.cols() != width || b.size() != units)
        throw std::invalid_argument("LstmLayerParams: inconsistent gate shapes");
    for (double v : w.flat())
        if (!std::isfinite(v)) throw std::invalid_argument("LstmLayerParams: non-finite weight");
    for (double v : b)
        if (!std::isfinite(v)) throw std::invalid_argument("LstmLayerParams: non-finite bias");
}

}  // namespace

void LstmLayerParams::validate() const {
    const std::size_t width = units + input_dim;
    check_gate(w_f, b_f, units, width);
    check_gate(w_i, b_i, units, width);
    check_gate(w_o, b_o, units, width);
    check_gate(w_c, b_c, units, width);
}

LstmLayerParams make_lstm_layer(std::size_t units, std::size_t input_dim) {
    LstmLayerParams p;
    p.units = units;
    p.input_dim = input_dim;
    const std::size_t width = units + input_dim;
    p.w_f = p.w_i = p.w_o = p.w_c = Matrix(units, width);
    p.b_f.assign(units, 0.0);
    p.b_i.assign(units, 0.0);
    p.b_o.assign(units, 0.0);
    p.b_c.assign(units, 0.0);
    return p;
}

void DenseLayerParams::validate() const {
    if (w.rows() != b.size()) throw std::invalid_argument("DenseLayerParams: shape mismatch");
    for (double v : w.flat())
        if (!std::isfinite(v)) throw std::invalid_argument("DenseLayerParams: non-finite weight");
}

DenseLayerParams make_dense_layer(std::size_t out_dim, std::size_t in_dim, Activation act) {
    DenseLayerParams p;
    p.w = Matrix(out_dim, in_dim);
    p.b.assign(out_dim, 0.0);
    p.activation = act;
    return p;
}

void init_uniform(Matrix& w, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : w.flat()) v = rng.uniform(-bound, bound);
}

LstmStep lstm_cell_forward(const LstmLayerParams& p, const std::vector<double>& x,
                           const std::vector<double>& h_prev, const std::vector<double>& c_prev) {
    if (x.size() != p.input_dim || h_prev.size() != p.units || c_prev.size() != p.units)
        throw std::invalid_argument("lstm_cell_forward: input shape mismatch");
    LstmStep s;
    s.f.resize(p.units);
    s.i.resize(p.units);
    s.o.resize(p.units);
    s.g.resize(p.units);
    s.c.resize(p.units);
    s.h.resize(p.units);
    for (std::size_t u = 0; u < p.units; ++u) {
        double af = p.b_f[u], ai = p.b_i[u], ao = p.b_o[u], ag = p.b_c[u];
        const double* wf = p.w_f.row(u);
        const double* wi = p.w_i.row(u);
        const double* wo = p.w_o.row(u);
        const double* wc = p.w_c.row(u);
        for (std::size_t v = 0; v < p.units; ++v) {
            af += wf[v] * h_prev[v];
            ai += wi[v] * h_prev[v];
            ao += wo[v] * h_prev[v];
            ag += wc[v] * h_prev[v];
        }
        for (std::size_t v = 0; v < p.input_dim; ++v) {
            const double xv = x[v];
            af += wf[p.units + v] * xv;
            ai += wi[p.units + v] * xv;
            ao += wo[p.units + v] * xv;
            ag += wc[p.units + v] * xv;
        }
        s.f[u] = sigmoid(af);
        s.i[u] = sigmoid(ai);
        s.o[u] = sigmoid(ao);
        s.g[u] = std::tanh(ag);
        s.c[u] = s.f[u] * c_prev[u] + s.i[u] * s.g[u];
        s.h[u] = s.o[u] * std::tanh(s.c[u]);
    }
    return s;
}

}  // namespace regime::neural
