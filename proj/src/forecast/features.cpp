#include "regime/forecast/features.hpp"

#include <stdexcept>

#include "regime/markov/inference.hpp"

namespace regime::forecast {

namespace {

SampleSet build_split(const ArchitectureSpec& spec, const std::vector<double>& delta,
                      const markov::HsmmModel* hmm, bool smoothed, std::size_t begin,
                      std::size_t end) {
    const std::size_t len = end - begin;
    if (len <= spec.window)
        throw std::invalid_argument("make_features: window exceeds split length");

    Matrix post;
    if (spec.kind != ArchKind::Baseline) {
        if (hmm == nullptr)
            throw std::invalid_argument("make_features: hybrid architecture needs a regime model");
        if (hmm->num_states() != spec.num_states)
            throw std::invalid_argument("make_features: regime model state count mismatch");
        std::vector<double> segment(delta.begin() + begin, delta.begin() + end);
        post = markov::state_posteriors(*hmm, segment, smoothed);
    }

    SampleSet out;
    const std::size_t w = spec.window;
    for (std::size_t i = 0; i + w < len; ++i) {
        std::vector<Matrix> sample;
        if (spec.kind != ArchKind::SHybrid) {
            Matrix x(w, 1);
            for (std::size_t t = 0; t < w; ++t) x(t, 0) = delta[begin + i + t];
            sample.push_back(std::move(x));
        }
        if (spec.kind != ArchKind::Baseline) {
            Matrix p(w, spec.num_states);
            for (std::size_t t = 0; t < w; ++t)
                for (std::size_t j = 0; j < spec.num_states; ++j) p(t, j) = post(i + t, j);
            sample.push_back(std::move(p));
        }
        out.inputs.push_back(std::move(sample));
        out.targets.push_back(delta[begin + i + w]);
        out.target_index.push_back(begin + i + w);
    }
    return out;
}

}  // namespace

FeatureSet make_features(const ArchitectureSpec& spec, const data::SeriesBundle& bundle,
                         const markov::HsmmModel* hmm, bool smoothed) {
    spec.validate();
    if (!bundle.standardized || bundle.splits.val_end == 0)
        throw std::invalid_argument("make_features: bundle must be standardized and split");
    const auto& d = bundle.delta_std;
    FeatureSet out;
    out.train = build_split(spec, d, hmm, smoothed, 0, bundle.splits.train_end);
    out.val = build_split(spec, d, hmm, smoothed, bundle.splits.train_end, bundle.splits.val_end);
    out.test = build_split(spec, d, hmm, smoothed, bundle.splits.val_end, d.size());
    return out;
}

}  // namespace regime::forecast
