#pragma once

#include <cstdint>
#include <vector>

#include "regime/markov/inference.hpp"
#include "regime/markov/model.hpp"

namespace regime::markov {

struct FitConfig {
    std::size_t num_states = 3;
    std::size_t num_components = 1;
    SojournFamily family = SojournFamily::Geometric;  // Geometric => plain HMM
    int u_max = 288;
    std::size_t max_iters = 200;
    double tol = 1e-6;  // relative log-likelihood change
    std::uint64_t seed = 0;
    std::size_t restarts = 3;
    double variance_floor = 1e-6;
};

struct FitResult {
    HsmmModel model;
    std::vector<double> log_likelihood_trace;  // of the best restart
};

// EM estimation. The geometric family is carried by the diagonal of A
// (plain HMM); the other families produce an explicit-duration semi-Markov
// model with zero diagonal. Sojourn parameters of the two-parameter
// families are re-estimated each M-step by golden-section search on the
// expected complete-data duration log-likelihood.
FitResult baum_welch_fit(const std::vector<double>& obs, const FitConfig& config);

}  // namespace regime::markov
