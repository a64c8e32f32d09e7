#include "regime/neural/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace regime::neural {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void NetworkGraph::validate() const {
    if (branches.empty() || head.empty() || window == 0)
        throw std::invalid_argument("NetworkGraph: incomplete graph");
    std::size_t merged = 0;
    for (const auto& branch : branches) {
        if (branch.empty()) throw std::invalid_argument("NetworkGraph: empty branch");
        std::size_t prev = branch.front().input_dim;
        for (const auto& layer : branch) {
            layer.validate();
            if (layer.input_dim != prev)
                throw std::invalid_argument("NetworkGraph: branch layer width mismatch");
            prev = layer.units;
        }
        merged += prev;
    }
    std::size_t width = merged;
    for (const auto& layer : head) {
        layer.validate();
        if (layer.in_dim() != width)
            throw std::invalid_argument("NetworkGraph: dense layer width mismatch");
        width = layer.out_dim();
    }
    const std::size_t out = head.back().out_dim();
    if (reduce_mean_output ? out != 2 : out != 1)
        throw std::invalid_argument("NetworkGraph: scalar prediction requires 1 output unit");
}

std::size_t NetworkGraph::merged_dim() const {
    std::size_t merged = 0;
    for (const auto& branch : branches) merged += branch.back().units;
    return merged;
}

std::size_t NetworkGraph::feature_dim() const { return head.back().in_dim(); }

std::vector<std::vector<double>*> parameter_spans(NetworkGraph& net) {
    std::vector<std::vector<double>*> spans;
    for (auto& branch : net.branches)
        for (auto& l : branch) {
            spans.push_back(&l.w_f.flat());
            spans.push_back(&l.w_i.flat());
            spans.push_back(&l.w_o.flat());
            spans.push_back(&l.w_c.flat());
            spans.push_back(&l.b_f);
            spans.push_back(&l.b_i);
            spans.push_back(&l.b_o);
            spans.push_back(&l.b_c);
        }
    for (auto& l : net.head) {
        spans.push_back(&l.w.flat());
        spans.push_back(&l.b);
    }
    return spans;
}

std::vector<const std::vector<double>*> parameter_spans(const NetworkGraph& net) {
    auto spans = parameter_spans(const_cast<NetworkGraph&>(net));
    return {spans.begin(), spans.end()};
}

std::size_t NetworkGraph::num_parameters() const {
    std::size_t n = 0;
    for (const auto* s : parameter_spans(*this)) n += s->size();
    return n;
}

NetworkGraph NetworkGraph::zeros_like() const {
    NetworkGraph z = *this;
    for (auto* s : parameter_spans(z))
        for (double& v : *s) v = 0.0;
    return z;
}

void axpy(NetworkGraph& dst, const NetworkGraph& src, double scale) {
    auto d = parameter_spans(dst);
    auto s = parameter_spans(src);
    if (d.size() != s.size()) throw std::invalid_argument("axpy: topology mismatch");
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i]->size() != s[i]->size()) throw std::invalid_argument("axpy: span mismatch");
        for (std::size_t j = 0; j < d[i]->size(); ++j) (*d[i])[j] += scale * (*s[i])[j];
    }
}

namespace {

// Runs one LSTM layer over the whole window, filling the cache in place.
void lstm_seq_forward(const LstmLayerParams& p, const Matrix& input, LstmSeqCache& cache) {
    const std::size_t T = input.rows();
    const std::size_t U = p.units;
    cache.f = cache.i = cache.o = cache.g = cache.c = cache.h = Matrix(T, U);
    for (std::size_t t = 0; t < T; ++t) {
        const double* h_prev = (t > 0) ? cache.h.row(t - 1) : nullptr;
        const double* c_prev = (t > 0) ? cache.c.row(t - 1) : nullptr;
        const double* x = input.row(t);
        for (std::size_t u = 0; u < U; ++u) {
            double af = p.b_f[u], ai = p.b_i[u], ao = p.b_o[u], ag = p.b_c[u];
            const double* wf = p.w_f.row(u);
            const double* wi = p.w_i.row(u);
            const double* wo = p.w_o.row(u);
            const double* wc = p.w_c.row(u);
            if (h_prev)
                for (std::size_t v = 0; v < U; ++v) {
                    const double hv = h_prev[v];
                    af += wf[v] * hv;
                    ai += wi[v] * hv;
                    ao += wo[v] * hv;
                    ag += wc[v] * hv;
                }
            for (std::size_t v = 0; v < p.input_dim; ++v) {
                const double xv = x[v];
                af += wf[U + v] * xv;
                ai += wi[U + v] * xv;
                ao += wo[U + v] * xv;
                ag += wc[U + v] * xv;
            }
            const double f = sigmoid(af), i = sigmoid(ai), o = sigmoid(ao), g = std::tanh(ag);
            const double c = f * (c_prev ? c_prev[u] : 0.0) + i * g;
            cache.f(t, u) = f;
            cache.i(t, u) = i;
            cache.o(t, u) = o;
            cache.g(t, u) = g;
            cache.c(t, u) = c;
            cache.h(t, u) = o * std::tanh(c);
        }
    }
}

// Backward through one layer. d_h holds dL/dh_t for every step (upper
// layers and the head both contribute). Returns dL/dx as a T x input_dim
// matrix and accumulates parameter gradients into grad.
Matrix lstm_seq_backward(const LstmLayerParams& p, const Matrix& input, const LstmSeqCache& cache,
                         const Matrix& d_h_in, LstmLayerParams& grad) {
    const std::size_t T = input.rows();
    const std::size_t U = p.units;
    Matrix d_x(T, p.input_dim);
    std::vector<double> dh_next(U, 0.0), dc_next(U, 0.0);
    std::vector<double> da_f(U), da_i(U), da_o(U), da_g(U);
    for (std::size_t t = T; t-- > 0;) {
        const double* c_prev = (t > 0) ? cache.c.row(t - 1) : nullptr;
        for (std::size_t u = 0; u < U; ++u) {
            const double f = cache.f(t, u), i = cache.i(t, u), o = cache.o(t, u),
                         g = cache.g(t, u), c = cache.c(t, u);
            const double tc = std::tanh(c);
            const double dh = d_h_in(t, u) + dh_next[u];
            const double dc = dh * o * (1.0 - tc * tc) + dc_next[u];
            const double d_f = dc * (c_prev ? c_prev[u] : 0.0);
            const double di = dc * g;
            const double dg = dc * i;
            const double d_o = dh * tc;
            da_f[u] = d_f * f * (1.0 - f);
            da_i[u] = di * i * (1.0 - i);
            da_o[u] = d_o * o * (1.0 - o);
            da_g[u] = dg * (1.0 - g * g);
            dc_next[u] = dc * f;
        }
        const double* h_prev = (t > 0) ? cache.h.row(t - 1) : nullptr;
        const double* x = input.row(t);
        std::fill(dh_next.begin(), dh_next.end(), 0.0);
        for (std::size_t u = 0; u < U; ++u) {
            double* gwf = grad.w_f.row(u);
            double* gwi = grad.w_i.row(u);
            double* gwo = grad.w_o.row(u);
            double* gwc = grad.w_c.row(u);
            const double* wf = p.w_f.row(u);
            const double* wi = p.w_i.row(u);
            const double* wo = p.w_o.row(u);
            const double* wc = p.w_c.row(u);
            const double af = da_f[u], ai = da_i[u], ao = da_o[u], ag = da_g[u];
            if (h_prev)
                for (std::size_t v = 0; v < U; ++v) {
                    const double hv = h_prev[v];
                    gwf[v] += af * hv;
                    gwi[v] += ai * hv;
                    gwo[v] += ao * hv;
                    gwc[v] += ag * hv;
                    dh_next[v] += wf[v] * af + wi[v] * ai + wo[v] * ao + wc[v] * ag;
                }
            for (std::size_t v = 0; v < p.input_dim; ++v) {
                const double xv = x[v];
                gwf[U + v] += af * xv;
                gwi[U + v] += ai * xv;
                gwo[U + v] += ao * xv;
                gwc[U + v] += ag * xv;
                d_x(t, v) += wf[U + v] * af + wi[U + v] * ai + wo[U + v] * ao + wc[U + v] * ag;
            }
            grad.b_f[u] += af;
            grad.b_i[u] += ai;
            grad.b_o[u] += ao;
            grad.b_c[u] += ag;
        }
    }
    return d_x;
}

}  // namespace

ForwardResult forward(const NetworkGraph& net, const std::vector<Matrix>& inputs) {
    if (inputs.size() != net.branches.size())
        throw std::invalid_argument("forward: expected one input per branch");
    ForwardResult out;
    out.cache.lstm.resize(net.branches.size());
    out.cache.merged.reserve(net.merged_dim());
    for (std::size_t b = 0; b < net.branches.size(); ++b) {
        const Matrix& input = inputs[b];
        if (input.rows() != net.window || input.cols() != net.branches[b].front().input_dim)
            throw std::invalid_argument("forward: input shape mismatch");
        for (double v : input.flat())
            if (!std::isfinite(v)) throw std::invalid_argument("forward: non-finite input");
        auto& caches = out.cache.lstm[b];
        caches.resize(net.branches[b].size());
        const Matrix* layer_in = &input;
        for (std::size_t l = 0; l < net.branches[b].size(); ++l) {
            lstm_seq_forward(net.branches[b][l], *layer_in, caches[l]);
            layer_in = &caches[l].h;
        }
        const Matrix& top = caches.back().h;
        for (std::size_t u = 0; u < top.cols(); ++u)
            out.cache.merged.push_back(top(net.window - 1, u));
    }

    std::vector<double> act = out.cache.merged;
    out.cache.dense_pre.resize(net.head.size());
    out.cache.dense_out.resize(net.head.size());
    for (std::size_t l = 0; l < net.head.size(); ++l) {
        const auto& layer = net.head[l];
        if (l + 1 == net.head.size()) out.features = act;
        std::vector<double> pre(layer.out_dim());
        for (std::size_t u = 0; u < layer.out_dim(); ++u) {
            double a = layer.b[u];
            const double* w = layer.w.row(u);
            for (std::size_t v = 0; v < act.size(); ++v) a += w[v] * act[v];
            pre[u] = a;
        }
        out.cache.dense_pre[l] = pre;
        for (std::size_t u = 0; u < pre.size(); ++u)
            if (layer.activation == Activation::LeakyRelu) pre[u] = leaky_relu(pre[u]);
        out.cache.dense_out[l] = pre;
        act = std::move(pre);
    }
    if (net.reduce_mean_output) {
        out.prediction = 0.5 * (act[0] + act[1]);
    } else {
        out.prediction = act[0];
    }
    return out;
}

NetworkGraph backward(const NetworkGraph& net, const std::vector<Matrix>& inputs,
                      const ForwardResult& fwd, double loss_grad) {
    if (fwd.cache.lstm.size() != net.branches.size() ||
        fwd.cache.dense_pre.size() != net.head.size())
        throw std::invalid_argument("backward: cache does not match network");
    NetworkGraph grad = net.zeros_like();

    std::vector<double> d_act(net.head.back().out_dim(),
                              net.reduce_mean_output ? 0.5 * loss_grad : loss_grad);
    for (std::size_t l = net.head.size(); l-- > 0;) {
        const auto& layer = net.head[l];
        const auto& pre = fwd.cache.dense_pre[l];
        const std::vector<double>& in =
            (l == 0) ? fwd.cache.merged : fwd.cache.dense_out[l - 1];
        std::vector<double> d_pre(layer.out_dim());
        for (std::size_t u = 0; u < layer.out_dim(); ++u)
            d_pre[u] = d_act[u] * (layer.activation == Activation::LeakyRelu
                                       ? leaky_relu_grad(pre[u])
                                       : 1.0);
        std::vector<double> d_in(layer.in_dim(), 0.0);
        for (std::size_t u = 0; u < layer.out_dim(); ++u) {
            const double* w = layer.w.row(u);
            double* gw = grad.head[l].w.row(u);
            for (std::size_t v = 0; v < layer.in_dim(); ++v) {
                gw[v] += d_pre[u] * in[v];
                d_in[v] += w[v] * d_pre[u];
            }
            grad.head[l].b[u] += d_pre[u];
        }
        d_act = std::move(d_in);
    }

    // Split the merged gradient back into branches and run BPTT top-down.
    std::size_t offset = 0;
    for (std::size_t b = 0; b < net.branches.size(); ++b) {
        const auto& branch = net.branches[b];
        const auto& caches = fwd.cache.lstm[b];
        const std::size_t top_units = branch.back().units;
        Matrix d_h(net.window, top_units);
        for (std::size_t u = 0; u < top_units; ++u)
            d_h(net.window - 1, u) = d_act[offset + u];
        offset += top_units;
        for (std::size_t l = branch.size(); l-- > 0;) {
            const Matrix& input = (l == 0) ? inputs[b] : caches[l - 1].h;
            d_h = lstm_seq_backward(branch[l], input, caches[l], d_h, grad.branches[b][l]);
        }
    }
    return grad;
}

MseResult mse_loss(const std::vector<double>& pred, const std::vector<double>& target) {
    if (pred.empty() || pred.size() != target.size())
        throw std::invalid_argument("mse_loss: bad lengths");
    MseResult out;
    out.grad.resize(pred.size());
    const double n = static_cast<double>(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double r = pred[i] - target[i];
        out.loss += r * r;
        out.grad[i] = 2.0 * r / n;
    }
    out.loss /= n;
    return out;
}

}  // namespace regime::neural
