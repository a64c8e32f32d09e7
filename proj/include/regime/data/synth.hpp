#pragma once

#include <cstdint>
#include <vector>

#include "regime/data/series.hpp"
#include "regime/markov/model.hpp"

namespace regime::data {

// Ground-truth generator for recovery and ordering experiments. In the
// default mode the embedded (semi-)Markov model drives a state path whose
// GMM emissions become the delta series directly; flow is the running sum.
// With flow_level set, Poisson counts are drawn around a sinusoidal
// diurnal rate instead and the model is ignored.
struct SynthSpec {
    markov::HsmmModel model;
    std::size_t length = 1000;  // number of delta observations
    std::uint64_t seed = 0;
    // Optional per-state AR(1) coefficient (requires k = 1): the emission
    // mean is shifted by phi_j * (previous delta - previous state mean).
    std::vector<double> ar1;

    bool flow_level = false;
    double base_rate = 200.0;
    double diurnal_amplitude = 0.0;
};

struct SynthResult {
    SeriesBundle bundle;
    std::vector<int> labels;  // per-delta true state (empty in flow_level mode)
};

SynthResult synthesize(const SynthSpec& spec);

}  // namespace regime::data
