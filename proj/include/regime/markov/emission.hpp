#pragma once

#include <cstddef>
#include <vector>

#include "regime/core/matrix.hpp"

namespace regime::markov {

// Per-state Gaussian mixture over the (univariate, standardized) fluctuation.
// All three parameter tables are M x k: row = state, column = mixture component.
struct GmmEmission {
    Matrix weights;
    Matrix means;
    Matrix variances;

    std::size_t num_states() const { return means.rows(); }
    std::size_t num_components() const { return means.cols(); }

    // Throws std::invalid_argument on shape mismatch, non-simplex weight
    // rows (tolerance 1e-9) or non-positive variances.
    void validate() const;

    double log_density(std::size_t state, double x) const;
    double density(std::size_t state, double x) const;

    // log of c_{jl} * N(x | mu_{jl}, var_{jl}) for each component l.
    std::vector<double> component_log_joint(std::size_t state, double x) const;
};

}  // namespace regime::markov
