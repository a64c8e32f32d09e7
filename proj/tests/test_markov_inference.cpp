#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "regime/markov/inference.hpp"

using namespace regime;
using namespace regime::markov;

TEST_CASE("standard normal emission density") {
    GmmEmission e;
    e.weights = Matrix(1, 1, 1.0);
    e.means = Matrix(1, 1, 0.0);
    e.variances = Matrix(1, 1, 1.0);
    CHECK(e.density(0, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-10));
    CHECK(e.density(0, 3.0) == doctest::Approx(0.0044318484119380075).epsilon(1e-8));
}

TEST_CASE("mixture of identical components collapses") {
    GmmEmission one;
    one.weights = Matrix(1, 1, 1.0);
    one.means = Matrix(1, 1, 0.7);
    one.variances = Matrix(1, 1, 1.3);
    GmmEmission two;
    two.weights = Matrix(1, 2, 0.5);
    two.means = Matrix(1, 2, 0.7);
    two.variances = Matrix(1, 2, 1.3);
    for (double x : {-2.0, 0.0, 0.7, 3.5})
        CHECK(two.density(0, x) == doctest::Approx(one.density(0, x)).epsilon(1e-12));
}

TEST_CASE("single-state chain degenerates to iid likelihood") {
    Rng rng(3);
    auto model = oracle::random_model(rng, 1, 1, ModelKind::PlainHmm,
                                      SojournFamily::Geometric, 10);
    auto obs = oracle::random_obs(rng, 20);
    auto post = forward_backward(model, obs);
    double expected = 0.0;
    for (double x : obs) expected += model.emission.log_density(0, x);
    CHECK(post.log_likelihood == doctest::Approx(expected).epsilon(1e-12));
    for (std::size_t t = 0; t < obs.size(); ++t) {
        CHECK(post.gamma(t, 0) == 1.0);
        CHECK(post.viterbi_path[t] == 0);
    }
}

TEST_CASE("plain HMM likelihood and viterbi match path enumeration") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t M = 2 + rng.index(2);
        const std::size_t T = 3 + rng.index(4);
        auto model = oracle::random_model(rng, M, 1 + rng.index(2), ModelKind::PlainHmm,
                                          SojournFamily::Geometric, static_cast<int>(T));
        auto obs = oracle::random_obs(rng, T);
        std::vector<int> best;
        const double total = oracle::hmm_path_sum(model, obs, &best);
        auto post = forward_backward(model, obs);
        CHECK(post.log_likelihood == doctest::Approx(std::log(total)).epsilon(1e-10));
        CHECK(post.viterbi_path == best);
    }
}

TEST_CASE("semi-Markov likelihood and viterbi match segmentation enumeration") {
    Rng rng(12);
    const SojournFamily families[] = {SojournFamily::Geometric, SojournFamily::Logarithmic,
                                      SojournFamily::Gamma, SojournFamily::Weibull};
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t M = 2 + rng.index(2);
        const std::size_t T = 3 + rng.index(4);
        auto model = oracle::random_model(rng, M, 1 + rng.index(2), ModelKind::SemiMarkov,
                                          families[trial % 4], static_cast<int>(T));
        auto obs = oracle::random_obs(rng, T);
        std::vector<int> best;
        const double total = oracle::hsmm_segmentation_sum(model, obs, &best);
        auto post = forward_backward(model, obs);
        CHECK(post.log_likelihood == doctest::Approx(std::log(total)).epsilon(1e-9));
        CHECK(post.viterbi_path == best);
    }
}

TEST_CASE("posterior rows sum to one") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const bool semi = trial % 2 == 1;
        auto model = oracle::random_model(rng, 3, 2,
                                          semi ? ModelKind::SemiMarkov : ModelKind::PlainHmm,
                                          semi ? SojournFamily::Gamma : SojournFamily::Geometric,
                                          8);
        auto obs = oracle::random_obs(rng, 40);
        auto gamma = state_posteriors(model, obs);
        for (std::size_t t = 0; t < obs.size(); ++t) {
            double row = 0.0;
            for (std::size_t j = 0; j < 3; ++j) row += gamma(t, j);
            CHECK(row == doctest::Approx(1.0).epsilon(1e-6));
        }
        auto filtered = state_posteriors(model, obs, /*smoothed=*/false);
        for (std::size_t t = 0; t < obs.size(); ++t) {
            double row = 0.0;
            for (std::size_t j = 0; j < 3; ++j) row += filtered(t, j);
            CHECK(row == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("well-separated emissions dominate the posterior") {
    Rng rng(14);
    auto model = oracle::random_model(rng, 2, 1, ModelKind::PlainHmm,
                                      SojournFamily::Geometric, 8);
    model.emission.means(0, 0) = 0.0;
    model.emission.means(1, 0) = 100.0;
    model.emission.variances(0, 0) = 1.0;
    model.emission.variances(1, 0) = 1.0;
    std::vector<double> obs(30, 0.0);
    auto gamma = state_posteriors(model, obs);
    for (std::size_t t = 1; t + 1 < obs.size(); ++t) CHECK(gamma(t, 0) > 0.99);
}

TEST_CASE("relabeling invariance of the likelihood") {
    Rng rng(15);
    for (int trial = 0; trial < 6; ++trial) {
        const bool semi = trial % 2 == 1;
        auto model = oracle::random_model(rng, 3, 1,
                                          semi ? ModelKind::SemiMarkov : ModelKind::PlainHmm,
                                          semi ? SojournFamily::Weibull : SojournFamily::Geometric,
                                          6);
        auto obs = oracle::random_obs(rng, 25);
        auto perm_model = model.permuted({2, 0, 1});
        CHECK(log_likelihood(model, obs) ==
              doctest::Approx(log_likelihood(perm_model, obs)).epsilon(1e-10));
    }
}

TEST_CASE("no underflow on long sequences") {
    Rng rng(16);
    auto model = oracle::random_model(rng, 3, 1, ModelKind::PlainHmm,
                                      SojournFamily::Geometric, 50);
    auto obs = oracle::random_obs(rng, 100000);
    CHECK(std::isfinite(log_likelihood(model, obs)));

    auto semi = oracle::random_model(rng, 3, 1, ModelKind::SemiMarkov,
                                     SojournFamily::Logarithmic, 50);
    auto obs2 = oracle::random_obs(rng, 20000);
    CHECK(std::isfinite(log_likelihood(semi, obs2)));
}

TEST_CASE("error paths") {
    Rng rng(17);
    auto model = oracle::random_model(rng, 2, 1, ModelKind::PlainHmm,
                                      SojournFamily::Geometric, 8);
    CHECK_THROWS(forward_backward(model, {}));
    CHECK_THROWS(forward_backward(model, {0.0, std::nan("")}));
}
