#include "regime/data/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "regime/core/rng.hpp"

namespace regime::data {

namespace {

constexpr std::int64_t kStep = 300;  // 5 minutes
constexpr std::int64_t kEpochStart = 1640995200;  // 2022-01-01T00:00:00Z

std::vector<std::int64_t> grid(std::size_t n) {
    std::vector<std::int64_t> ts(n);
    for (std::size_t i = 0; i < n; ++i) ts[i] = kEpochStart + kStep * static_cast<std::int64_t>(i);
    return ts;
}

double sample_emission(const markov::GmmEmission& e, std::size_t state, Rng& rng) {
    const std::size_t K = e.num_components();
    std::size_t l = 0;
    if (K > 1) l = rng.categorical(e.weights.row(state), K);
    return rng.normal(e.means(state, l), std::sqrt(e.variances(state, l)));
}

std::size_t sample_next_state(const markov::HsmmModel& m, std::size_t current, Rng& rng) {
    return rng.categorical(m.transition.row(current), m.num_states());
}

int sample_duration(const std::vector<double>& pmf, Rng& rng) {
    return 1 + static_cast<int>(rng.categorical(pmf.data(), pmf.size()));
}

}  // namespace

SynthResult synthesize(const SynthSpec& spec) {
    if (spec.length < 1) throw std::invalid_argument("synthesize: empty length");
    Rng rng(spec.seed, "synth");
    SynthResult out;

    if (spec.flow_level) {
        const std::size_t n = spec.length + 1;
        std::vector<double> flow(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double hour = std::fmod(static_cast<double>(i) * kStep / 3600.0, 24.0);
            const double rate = std::max(
                spec.base_rate + spec.diurnal_amplitude * std::sin(2.0 * M_PI * hour / 24.0), 1.0);
            std::poisson_distribution<long> pois(rate);
            flow[i] = static_cast<double>(pois(rng.engine()));
        }
        out.bundle = make_bundle(grid(n), std::move(flow));
        return out;
    }

    const auto& model = spec.model;
    model.validate();
    const std::size_t M = model.num_states();
    if (!spec.ar1.empty() &&
        (spec.ar1.size() != M || model.emission.num_components() != 1))
        throw std::invalid_argument("synthesize: ar1 needs one coefficient per state and k = 1");

    std::vector<int> labels;
    labels.reserve(spec.length);
    std::size_t state = rng.categorical(model.initial.data(), M);
    if (model.kind == markov::ModelKind::PlainHmm) {
        for (std::size_t t = 0; t < spec.length; ++t) {
            labels.push_back(static_cast<int>(state));
            if (t + 1 < spec.length) state = sample_next_state(model, state, rng);
        }
    } else {
        std::vector<std::vector<double>> pmf(M);
        for (std::size_t j = 0; j < M; ++j) pmf[j] = model.sojourn.pmf_table(j);
        while (labels.size() < spec.length) {
            const int u = sample_duration(pmf[state], rng);
            for (int i = 0; i < u && labels.size() < spec.length; ++i)
                labels.push_back(static_cast<int>(state));
            if (M > 1) state = sample_next_state(model, state, rng);
        }
    }

    std::vector<double> delta(spec.length);
    for (std::size_t t = 0; t < spec.length; ++t) {
        const std::size_t j = static_cast<std::size_t>(labels[t]);
        double x = sample_emission(model.emission, j, rng);
        if (!spec.ar1.empty() && t > 0) {
            const std::size_t prev = static_cast<std::size_t>(labels[t - 1]);
            x += spec.ar1[j] * (delta[t - 1] - model.emission.means(prev, 0));
        }
        delta[t] = x;
    }

    std::vector<double> flow(spec.length + 1);
    flow[0] = 0.0;
    for (std::size_t t = 0; t < spec.length; ++t) flow[t + 1] = flow[t] + delta[t];
    out.bundle = make_bundle(grid(spec.length + 1), std::move(flow));
    out.labels = std::move(labels);
    return out;
}

}  // namespace regime::data
