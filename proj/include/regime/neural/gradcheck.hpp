#pragma once

#include "regime/neural/network.hpp"

namespace regime::neural {

// Central finite differences of the squared-error loss on one sample
// against the given analytic gradients. Returns the max over parameters of
// |analytic - numeric| / max(|analytic|, |numeric|, 1e-12).
double max_relative_error(NetworkGraph net, const std::vector<Matrix>& inputs, double target,
                          double eps, const NetworkGraph& analytic);

// Convenience wrapper that computes the analytic gradients itself.
double gradient_check(const NetworkGraph& net, const std::vector<Matrix>& inputs, double target,
                      double eps = 1e-5);

}  // namespace regime::neural
