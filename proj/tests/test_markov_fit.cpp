#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "regime/data/synth.hpp"
#include "regime/markov/fit.hpp"
#include "regime/markov/inference.hpp"

using namespace regime;
using markov::FitConfig;
using markov::HsmmModel;
using markov::ModelKind;
using markov::SojournFamily;

namespace {

// Sample a plain-HMM path + emissions directly (independent of data::synthesize).
std::vector<double> sample_plain(const HsmmModel& m, std::size_t T, Rng& rng,
                                 std::vector<int>* states = nullptr) {
    std::vector<double> obs(T);
    std::size_t z = rng.categorical(m.initial.data(), m.num_states());
    for (std::size_t t = 0; t < T; ++t) {
        if (t > 0) z = rng.categorical(m.transition.row(z), m.num_states());
        const std::size_t l = rng.categorical(m.emission.weights.row(z),
                                              m.emission.num_components());
        obs[t] = rng.normal(m.emission.means(z, l), std::sqrt(m.emission.variances(z, l)));
        if (states) states->push_back(static_cast<int>(z));
    }
    return obs;
}

bool monotone(const std::vector<double>& trace, double slack = 1e-8) {
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i] + slack < trace[i - 1]) return false;
    return true;
}

}  // namespace

TEST_CASE("plain EM traces are non-decreasing") {
    Rng rng(4001);
    for (int trial = 0; trial < 8; ++trial) {
        auto gen = oracle::random_model(rng, 2, 1, ModelKind::PlainHmm,
                                        SojournFamily::Geometric, 30);
        auto obs = sample_plain(gen, 300, rng);
        FitConfig cfg;
        cfg.num_states = 2;
        cfg.max_iters = 40;
        cfg.restarts = 1;
        cfg.seed = 90 + trial;
        auto fit = markov::baum_welch_fit(obs, cfg);
        CHECK(monotone(fit.log_likelihood_trace));
    }
}

TEST_CASE("semi-Markov EM traces are non-decreasing for every family") {
    Rng rng(4002);
    for (auto family : {SojournFamily::Logarithmic, SojournFamily::Gamma,
                        SojournFamily::Weibull}) {
        auto gen = oracle::random_model(rng, 2, 1, ModelKind::SemiMarkov, family, 20);
        auto obs = sample_plain(gen, 250, rng);  // any data works for the property
        FitConfig cfg;
        cfg.num_states = 2;
        cfg.family = family;
        cfg.u_max = 20;
        cfg.max_iters = 25;
        cfg.restarts = 1;
        cfg.seed = 7;
        auto fit = markov::baum_welch_fit(obs, cfg);
        CHECK(monotone(fit.log_likelihood_trace));
        CHECK(fit.model.kind == ModelKind::SemiMarkov);
        for (std::size_t j = 0; j < 2; ++j) CHECK(fit.model.transition(j, j) == 0.0);
    }
}

TEST_CASE("two-state parameter recovery up to relabeling") {
    HsmmModel gen;
    gen.kind = ModelKind::PlainHmm;
    gen.initial = {0.5, 0.5};
    gen.transition = Matrix::from_rows({{0.9, 0.1}, {0.2, 0.8}});
    gen.emission.weights = Matrix(2, 1, 1.0);
    gen.emission.means = Matrix::from_rows({{-1.0}, {2.0}});
    gen.emission.variances = Matrix(2, 1, 0.25);
    gen.sojourn.family = SojournFamily::Geometric;
    gen.sojourn.u_max = 60;
    gen.sojourn.p1 = {0.9, 0.8};

    Rng rng(4003);
    auto obs = sample_plain(gen, 20000, rng);
    FitConfig cfg;
    cfg.num_states = 2;
    cfg.seed = 11;
    auto fit = markov::baum_welch_fit(obs, cfg);

    // orient: state with the smaller mean first
    std::vector<std::size_t> perm = {0, 1};
    if (fit.model.emission.means(0, 0) > fit.model.emission.means(1, 0)) perm = {1, 0};
    auto m = fit.model.permuted(perm);
    CHECK(m.emission.means(0, 0) == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(m.emission.means(1, 0) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::abs(m.transition(0, 0) - 0.9) < 0.05);
    CHECK(std::abs(m.transition(1, 1) - 0.8) < 0.05);
    CHECK(std::abs(std::sqrt(m.emission.variances(0, 0)) - 0.5) < 0.05);
}

TEST_CASE("plain fit mirrors the diagonal into a geometric sojourn") {
    Rng rng(4004);
    auto gen = oracle::random_model(rng, 2, 1, ModelKind::PlainHmm, SojournFamily::Geometric, 30);
    auto obs = sample_plain(gen, 400, rng);
    FitConfig cfg;
    cfg.num_states = 2;
    cfg.max_iters = 30;
    cfg.restarts = 1;
    auto fit = markov::baum_welch_fit(obs, cfg);
    REQUIRE(fit.model.sojourn.num_states() == 2);
    for (std::size_t j = 0; j < 2; ++j)
        CHECK(fit.model.sojourn.p1[j] == doctest::Approx(fit.model.transition(j, j)));
}

TEST_CASE("fit is deterministic for a fixed seed") {
    Rng rng(4005);
    auto gen = oracle::random_model(rng, 3, 1, ModelKind::PlainHmm, SojournFamily::Geometric, 30);
    auto obs = sample_plain(gen, 500, rng);
    FitConfig cfg;
    cfg.num_states = 3;
    cfg.max_iters = 20;
    cfg.seed = 123;
    auto a = markov::baum_welch_fit(obs, cfg);
    auto b = markov::baum_welch_fit(obs, cfg);
    CHECK(a.log_likelihood_trace == b.log_likelihood_trace);
    CHECK(a.model.transition.flat() == b.model.transition.flat());
    CHECK(a.model.emission.means.flat() == b.model.emission.means.flat());
}

TEST_CASE("gmm components are used when k = 2") {
    // one state, two well-separated mixture lobes
    Rng rng(4006);
    std::vector<double> obs;
    for (int i = 0; i < 2000; ++i)
        obs.push_back(rng.uniform() < 0.3 ? rng.normal(-3.0, 0.5) : rng.normal(2.0, 0.5));
    FitConfig cfg;
    cfg.num_states = 1;
    cfg.num_components = 2;
    cfg.max_iters = 60;
    cfg.seed = 5;
    auto fit = markov::baum_welch_fit(obs, cfg);
    std::vector<double> means = {fit.model.emission.means(0, 0), fit.model.emission.means(0, 1)};
    std::sort(means.begin(), means.end());
    CHECK(means[0] == doctest::Approx(-3.0).epsilon(0.1));
    CHECK(means[1] == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("logarithmic HSMM recovers the generator's segmentation") {
    HsmmModel gen;
    gen.kind = ModelKind::SemiMarkov;
    gen.initial = {0.5, 0.5};
    gen.transition = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    gen.emission.weights = Matrix(2, 1, 1.0);
    gen.emission.means = Matrix::from_rows({{-2.0}, {2.0}});
    gen.emission.variances = Matrix(2, 1, 0.25);
    gen.sojourn.family = SojournFamily::Logarithmic;
    gen.sojourn.u_max = 40;
    gen.sojourn.p1 = {0.85, 0.85};
    gen.sojourn.shift = {2, 2};

    data::SynthSpec spec;
    spec.model = gen;
    spec.length = 4000;
    spec.seed = 99;
    auto synth = data::synthesize(spec);

    FitConfig cfg;
    cfg.num_states = 2;
    cfg.family = SojournFamily::Logarithmic;
    cfg.u_max = 40;
    cfg.max_iters = 30;
    cfg.seed = 3;
    auto fit = markov::baum_welch_fit(synth.bundle.delta, cfg);
    auto path = markov::viterbi_decode(fit.model, synth.bundle.delta);

    std::size_t agree = 0;
    for (std::size_t t = 0; t < path.size(); ++t)
        if (path[t] == synth.labels[t]) ++agree;
    double acc = static_cast<double>(std::max(agree, path.size() - agree)) /
                 static_cast<double>(path.size());
    CHECK(acc > 0.95);
}
