#pragma once

#include <vector>

#include "regime/core/matrix.hpp"
#include "regime/data/series.hpp"
#include "regime/forecast/arch.hpp"
#include "regime/markov/model.hpp"

namespace regime::forecast {

// Supervised next-step samples: one window x dim input matrix per network
// branch, a standardized-delta target, and the target's index into the
// bundle's delta series (for timestamps and flow reintegration).
struct SampleSet {
    std::vector<std::vector<Matrix>> inputs;
    std::vector<double> targets;
    std::vector<std::size_t> target_index;

    std::size_t size() const { return targets.size(); }
};

struct FeatureSet {
    SampleSet train, val, test;
};

// Builds windows over standardized fluctuations and, for the hybrids, the
// regime model's per-step state probabilities. Posteriors are computed on
// each split's observations separately so nothing leaks across the split
// boundaries. smoothed=false restricts the probabilities to the forward
// filter for strict causality.
FeatureSet make_features(const ArchitectureSpec& spec, const data::SeriesBundle& bundle,
                         const markov::HsmmModel* hmm, bool smoothed = true);

}  // namespace regime::forecast
