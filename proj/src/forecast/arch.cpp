#include "regime/forecast/arch.hpp"

#include <stdexcept>

#include "regime/core/rng.hpp"

namespace regime::forecast {

using neural::Activation;
using neural::DenseLayerParams;
using neural::LstmLayerParams;
using neural::NetworkGraph;

std::string to_string(ArchKind kind) {
    switch (kind) {
        case ArchKind::Baseline: return "baseline";
        case ArchKind::SHybrid: return "s-hybrid";
        case ArchKind::CHybrid: return "c-hybrid";
    }
    throw std::logic_error("unknown ArchKind");
}

ArchKind arch_from_string(const std::string& name) {
    if (name == "baseline") return ArchKind::Baseline;
    if (name == "s-hybrid") return ArchKind::SHybrid;
    if (name == "c-hybrid") return ArchKind::CHybrid;
    throw std::invalid_argument("unknown architecture: " + name);
}

namespace {

std::vector<LstmLayerParams> lstm_stack(const std::vector<std::size_t>& units,
                                        std::size_t input_dim) {
    std::vector<LstmLayerParams> stack;
    std::size_t dim = input_dim;
    for (std::size_t u : units) {
        stack.push_back(neural::make_lstm_layer(u, dim));
        dim = u;
    }
    return stack;
}

std::vector<DenseLayerParams> dense_head(const std::vector<std::size_t>& units,
                                         std::size_t input_dim) {
    std::vector<DenseLayerParams> head;
    std::size_t dim = input_dim;
    for (std::size_t l = 0; l < units.size(); ++l) {
        const bool last = (l + 1 == units.size());
        head.push_back(neural::make_dense_layer(units[l], dim,
                                                last ? Activation::Linear
                                                     : Activation::LeakyRelu));
        dim = units[l];
    }
    return head;
}

void seed_parameters(NetworkGraph& net, std::uint64_t run_seed) {
    Rng rng(run_seed, "net-init");
    for (auto& branch : net.branches)
        for (auto& l : branch) {
            const std::size_t fan_in = l.units + l.input_dim;
            neural::init_uniform(l.w_f, fan_in, l.units, rng);
            neural::init_uniform(l.w_i, fan_in, l.units, rng);
            neural::init_uniform(l.w_o, fan_in, l.units, rng);
            neural::init_uniform(l.w_c, fan_in, l.units, rng);
            // Open forget gates at the start so long-range credit can flow.
            for (double& b : l.b_f) b = 1.0;
        }
    for (auto& l : net.head) neural::init_uniform(l.w, l.in_dim(), l.out_dim(), rng);
}

NetworkGraph build_scaled(const ArchitectureSpec& spec, std::uint64_t run_seed,
                          std::size_t divisor) {
    spec.validate();
    auto scale = [divisor](std::size_t u) { return std::max<std::size_t>(1, u / divisor); };
    NetworkGraph net;
    net.window = spec.window;
    switch (spec.kind) {
        case ArchKind::Baseline:
        case ArchKind::SHybrid: {
            const std::size_t in = spec.kind == ArchKind::Baseline ? 1 : spec.num_states;
            net.branches.push_back(lstm_stack({scale(20), scale(20), scale(10)}, in));
            net.head = dense_head({scale(10), scale(10), 6, 2}, scale(10));
            net.reduce_mean_output = true;
            break;
        }
        case ArchKind::CHybrid: {
            net.branches.push_back(lstm_stack({scale(20), scale(10)}, 1));
            net.branches.push_back(lstm_stack({scale(20), scale(10)}, spec.num_states));
            net.head = dense_head({scale(10), 6, 6, 1}, 2 * scale(10));
            break;
        }
    }
    seed_parameters(net, run_seed);
    net.validate();
    return net;
}

}  // namespace

void ArchitectureSpec::validate() const {
    if (window == 0) throw std::invalid_argument("ArchitectureSpec: window must be positive");
    if (kind != ArchKind::Baseline && num_states == 0)
        throw std::invalid_argument("ArchitectureSpec: hybrid architectures need num_states");
}

NetworkGraph build(const ArchitectureSpec& spec, std::uint64_t run_seed) {
    return build_scaled(spec, run_seed, 1);
}

NetworkGraph build_reduced(const ArchitectureSpec& spec, std::uint64_t run_seed) {
    return build_scaled(spec, run_seed, 2);
}

}  // namespace regime::forecast
