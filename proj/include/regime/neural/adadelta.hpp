#pragma once

#include "regime/neural/network.hpp"

namespace regime::neural {

struct AdadeltaConfig {
    double learning_rate = 0.20;
    double rho = 0.95;
    double epsilon = 1e-7;
};

// Scalar update rule, exposed for unit tests:
//   eg2  <- rho eg2 + (1-rho) g^2
//   dx    = -sqrt(edx2 + eps) / sqrt(eg2 + eps) * g
//   edx2 <- rho edx2 + (1-rho) dx^2
//   param <- param + lr * dx
void adadelta_update(double& param, double grad, double& eg2, double& edx2,
                     const AdadeltaConfig& cfg);

// Per-parameter accumulators with the same topology as the network.
struct AdadeltaState {
    NetworkGraph eg2;
    NetworkGraph edx2;
    AdadeltaConfig cfg;

    explicit AdadeltaState(const NetworkGraph& net, AdadeltaConfig cfg = {})
        : eg2(net.zeros_like()), edx2(net.zeros_like()), cfg(cfg) {}
};

void adadelta_step(AdadeltaState& state, NetworkGraph& net, const NetworkGraph& grads);

}  // namespace regime::neural
