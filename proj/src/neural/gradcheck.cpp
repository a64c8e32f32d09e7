#include "regime/neural/gradcheck.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace regime::neural {

namespace {

// Central differences of the squared error suffer catastrophic cancellation
// in plain doubles: at eps = 1e-5 the round-off floor sits near the 1e-4
// tolerance for small gradients. Evaluating the perturbed losses in long
// double pushes that floor several decades down while the parameters being
// checked stay exactly the doubles the analytic pass saw.
long double forward_ld(const NetworkGraph& net, const std::vector<Matrix>& inputs) {
    std::vector<long double> merged;
    for (std::size_t b = 0; b < net.branches.size(); ++b) {
        const std::size_t T = net.window;
        std::vector<std::vector<long double>> layer_in(T);
        for (std::size_t t = 0; t < T; ++t) {
            layer_in[t].assign(inputs[b].row(t), inputs[b].row(t) + inputs[b].cols());
        }
        for (const auto& p : net.branches[b]) {
            const std::size_t U = p.units;
            std::vector<long double> h(U, 0.0L), c(U, 0.0L), h_new(U), c_new(U);
            std::vector<std::vector<long double>> layer_out(T);
            for (std::size_t t = 0; t < T; ++t) {
                const auto& x = layer_in[t];
                for (std::size_t u = 0; u < U; ++u) {
                    long double af = p.b_f[u], ai = p.b_i[u], ao = p.b_o[u], ag = p.b_c[u];
                    const double* wf = p.w_f.row(u);
                    const double* wi = p.w_i.row(u);
                    const double* wo = p.w_o.row(u);
                    const double* wc = p.w_c.row(u);
                    for (std::size_t v = 0; v < U; ++v) {
                        const long double hv = h[v];
                        af += wf[v] * hv;
                        ai += wi[v] * hv;
                        ao += wo[v] * hv;
                        ag += wc[v] * hv;
                    }
                    for (std::size_t v = 0; v < p.input_dim; ++v) {
                        const long double xv = x[v];
                        af += wf[U + v] * xv;
                        ai += wi[U + v] * xv;
                        ao += wo[U + v] * xv;
                        ag += wc[U + v] * xv;
                    }
                    const long double f = 1.0L / (1.0L + std::exp(-af));
                    const long double i = 1.0L / (1.0L + std::exp(-ai));
                    const long double o = 1.0L / (1.0L + std::exp(-ao));
                    const long double g = std::tanh(ag);
                    c_new[u] = f * c[u] + i * g;
                    h_new[u] = o * std::tanh(c_new[u]);
                }
                h = h_new;
                c = c_new;
                layer_out[t] = h;
            }
            layer_in = std::move(layer_out);
        }
        merged.insert(merged.end(), layer_in[T - 1].begin(), layer_in[T - 1].end());
    }

    std::vector<long double> act = std::move(merged);
    for (const auto& layer : net.head) {
        std::vector<long double> out(layer.out_dim());
        for (std::size_t u = 0; u < layer.out_dim(); ++u) {
            long double a = layer.b[u];
            const double* w = layer.w.row(u);
            for (std::size_t v = 0; v < act.size(); ++v) a += w[v] * act[v];
            if (layer.activation == Activation::LeakyRelu && a < 0.0L) a *= kLeakyReluAlpha;
            out[u] = a;
        }
        act = std::move(out);
    }
    return net.reduce_mean_output ? 0.5L * (act[0] + act[1]) : act[0];
}

long double sample_loss_ld(const NetworkGraph& net, const std::vector<Matrix>& inputs,
                           double target) {
    const long double r = forward_ld(net, inputs) - static_cast<long double>(target);
    return r * r;
}

}  // namespace

double max_relative_error(NetworkGraph net, const std::vector<Matrix>& inputs, double target,
                          double eps, const NetworkGraph& analytic) {
    if (!(eps > 0.0)) throw std::invalid_argument("max_relative_error: eps must be positive");
    net.validate();
    auto spans = parameter_spans(net);
    auto grads = parameter_spans(analytic);
    if (spans.size() != grads.size())
        throw std::invalid_argument("max_relative_error: gradient topology mismatch");
    double worst = 0.0;
    for (std::size_t s = 0; s < spans.size(); ++s) {
        for (std::size_t j = 0; j < spans[s]->size(); ++j) {
            double& p = (*spans[s])[j];
            const double saved = p;
            p = saved + eps;
            const long double up = sample_loss_ld(net, inputs, target);
            p = saved - eps;
            const long double down = sample_loss_ld(net, inputs, target);
            p = saved;
            const double numeric = static_cast<double>((up - down) / (2.0L * eps));
            const double a = (*grads[s])[j];
            const double rel =
                std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-12});
            worst = std::max(worst, rel);
        }
    }
    return worst;
}

double gradient_check(const NetworkGraph& net, const std::vector<Matrix>& inputs, double target,
                      double eps) {
    auto fwd = forward(net, inputs);
    const double loss_grad = 2.0 * (fwd.prediction - target);
    auto analytic = backward(net, inputs, fwd, loss_grad);
    return max_relative_error(net, inputs, target, eps, analytic);
}

}  // namespace regime::neural
