#pragma once

#include <cstddef>
#include <vector>

#include "regime/core/matrix.hpp"
#include "regime/markov/model.hpp"

namespace regime::markov {

struct PosteriorTable {
    Matrix gamma;                   // T x M smoothed state probabilities
    double log_likelihood = 0.0;
    std::vector<int> viterbi_path;  // length T
};

// Smoothed posteriors, total log-likelihood and the Viterbi path in one
// pass. PlainHmm scores paths by the chain product; SemiMarkov scores
// segmentations with the sojourn pmf and right-censors the last segment
// with the survival function.
PosteriorTable forward_backward(const HsmmModel& model, const std::vector<double>& obs);

double log_likelihood(const HsmmModel& model, const std::vector<double>& obs);

std::vector<int> viterbi_decode(const HsmmModel& model, const std::vector<double>& obs);

// Convenience projection of the gamma table. smoothed=false gives the
// forward-only (filtered) probabilities p(z_t | x_1..t) instead.
Matrix state_posteriors(const HsmmModel& model, const std::vector<double>& obs,
                        bool smoothed = true);

namespace detail {

// Expected sufficient statistics of one E-step, shared by forward_backward
// and the EM driver in fit.cpp.

struct HmmLattice {
    Matrix alpha;               // T x M, filtered p(z_t | x_1..t)
    Matrix beta;                // T x M, scaled backward variables
    Matrix gamma;               // T x M
    std::vector<double> scale;  // per-step normalizers c_t
    Matrix log_b;               // T x M emission log-densities
    double log_likelihood = 0.0;
};

HmmLattice hmm_forward_backward(const HsmmModel& model, const std::vector<double>& obs);

struct HsmmLattice {
    Matrix gamma;               // T x M occupancy posteriors
    double log_likelihood = 0.0;
    // Expected counts (only filled when with_counts):
    std::vector<double> start_post;  // first-segment state posterior
    Matrix trans_counts;             // M x M expected segment transitions
    Matrix eta;                      // M x U completed-segment duration counts
    Matrix eta_censored;             // M x U censored last-segment duration posterior
    Matrix filtered;                 // T x M forward-only occupancy (when requested)
};

HsmmLattice hsmm_forward_backward(const HsmmModel& model, const std::vector<double>& obs,
                                  bool with_counts, bool with_filtered = false);

Matrix emission_log_table(const HsmmModel& model, const std::vector<double>& obs);

}  // namespace detail

}  // namespace regime::markov
