#pragma once

#include <cstdint>
#include <vector>

#include "regime/core/matrix.hpp"

namespace regime::forecast {

// Markov-switching autoregression: each latent regime j carries its own
// AR(L) law x_t ~ N(intercept_j + sum_i coef(j,i) x_{t-i}, noise_var_j),
// with a plain first-order Markov chain over regimes.
struct ArHmmModel {
    std::size_t lag = 1;
    Matrix transition;                // M x M
    std::vector<double> initial;      // M
    Matrix coef;                      // M x L, coef(j,i) multiplies x_{t-1-i}
    std::vector<double> intercept;    // M
    std::vector<double> noise_var;    // M

    std::size_t num_states() const { return intercept.size(); }
    void validate() const;
};

struct ArHmmFitConfig {
    std::size_t num_states = 5;
    std::size_t lag = 1;
    std::size_t max_iters = 100;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    std::size_t restarts = 3;
};

struct ArHmmFitResult {
    ArHmmModel model;
    std::vector<double> log_likelihood_trace;
};

// EM: forward-backward over the lag-conditioned emission densities, then
// gamma-weighted least squares per state (ridge 1e-8) for the AR
// coefficients and intercept, residual-weighted variance, and the usual
// transition/initial updates.
ArHmmFitResult fit_ar_hmm(const std::vector<double>& series, const ArHmmFitConfig& config);

// Filtered regime probabilities p(z_t | x_1..t) for t = lag..T-1.
Matrix ar_hmm_filter(const ArHmmModel& model, const std::vector<double>& series);

// One-step prediction of the value following `history`: the per-regime AR
// means weighted by the filtered probabilities of the last step.
double ar_hmm_predict(const ArHmmModel& model, const std::vector<double>& history);

// Predictions for every target index in [begin, end) of `series`, each
// using only observations before the target (single forward filter pass).
std::vector<double> ar_hmm_predict_range(const ArHmmModel& model,
                                         const std::vector<double>& series, std::size_t begin,
                                         std::size_t end);

}  // namespace regime::forecast
