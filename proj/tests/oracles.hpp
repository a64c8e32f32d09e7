#pragma once

// Brute-force reference implementations used to check the dynamic-programming
// recursions. Deliberately independent of the library's inference code:
// everything here enumerates paths or segmentations explicitly.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "regime/core/rng.hpp"
#include "regime/markov/model.hpp"

namespace oracle {

using regime::Matrix;
using regime::Rng;
using regime::markov::HsmmModel;
using regime::markov::ModelKind;
using regime::markov::SojournFamily;

inline double gauss_pdf(double x, double mu, double var) {
    return std::exp(-0.5 * (x - mu) * (x - mu) / var) / std::sqrt(2.0 * M_PI * var);
}

inline double emission_pdf(const HsmmModel& m, std::size_t j, double x) {
    double p = 0.0;
    for (std::size_t l = 0; l < m.emission.num_components(); ++l)
        p += m.emission.weights(j, l) *
             gauss_pdf(x, m.emission.means(j, l), m.emission.variances(j, l));
    return p;
}

// Exhaustive sum over all M^T state paths of the chain joint density.
inline double hmm_path_sum(const HsmmModel& m, const std::vector<double>& obs,
                           std::vector<int>* best_path = nullptr) {
    const std::size_t T = obs.size();
    const std::size_t M = m.num_states();
    std::vector<int> path(T, 0);
    double total = 0.0;
    double best = -1.0;
    while (true) {
        double p = m.initial[path[0]] * emission_pdf(m, path[0], obs[0]);
        for (std::size_t t = 1; t < T; ++t)
            p *= m.transition(path[t - 1], path[t]) * emission_pdf(m, path[t], obs[t]);
        total += p;
        if (best_path && p > best) {
            best = p;
            *best_path = path;
        }
        std::size_t t = T;
        while (t > 0) {
            if (++path[t - 1] < static_cast<int>(M)) break;
            path[t - 1] = 0;
            --t;
        }
        if (t == 0) break;
    }
    return total;
}

// Exhaustive sum over all segmentations under the right-censored
// semi-Markov density: completed sojourns use the pmf, the final one the
// survival function.
inline double hsmm_segmentation_sum(const HsmmModel& m, const std::vector<double>& obs,
                                    std::vector<int>* best_path = nullptr) {
    const std::size_t T = obs.size();
    const std::size_t M = m.num_states();
    const int U = m.sojourn.u_max;
    double total = 0.0;
    double best = -1.0;
    std::vector<int> current(T);

    std::function<void(std::size_t, int, double)> recurse = [&](std::size_t t, int prev,
                                                                double p) {
        for (std::size_t j = 0; j < M; ++j) {
            if (prev >= 0) {
                if (static_cast<int>(j) == prev) continue;
                if (m.transition(prev, j) <= 0.0) continue;
            }
            const double enter = p * (prev < 0 ? m.initial[j] : m.transition(prev, j));
            double obs_prod = 1.0;
            for (int u = 1; u <= std::min<int>(U, static_cast<int>(T - t)); ++u) {
                obs_prod *= emission_pdf(m, j, obs[t + u - 1]);
                for (int s = 0; s < u; ++s) current[t + s] = static_cast<int>(j);
                if (t + u == T) {
                    const double q = enter * m.sojourn.survival(j, u) * obs_prod;
                    total += q;
                    if (best_path && q > best) {
                        best = q;
                        *best_path = current;
                    }
                } else {
                    recurse(t + u, static_cast<int>(j), enter * m.sojourn.pmf(j, u) * obs_prod);
                }
            }
        }
    };
    recurse(0, -1, 1.0);
    return total;
}

// Random valid model; semi-Markov models get a zero diagonal.
inline HsmmModel random_model(Rng& rng, std::size_t M, std::size_t K, ModelKind kind,
                              SojournFamily family, int u_max) {
    HsmmModel m;
    m.kind = kind;
    m.initial.resize(M);
    m.transition = Matrix(M, M);
    double pi_sum = 0.0;
    for (std::size_t j = 0; j < M; ++j) pi_sum += (m.initial[j] = rng.uniform(0.1, 1.0));
    for (std::size_t j = 0; j < M; ++j) m.initial[j] /= pi_sum;
    for (std::size_t i = 0; i < M; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            if (kind == ModelKind::SemiMarkov && i == j) {
                m.transition(i, j) = 0.0;
                continue;
            }
            row += (m.transition(i, j) = rng.uniform(0.1, 1.0));
        }
        for (std::size_t j = 0; j < M; ++j) m.transition(i, j) /= row;
    }
    m.emission.weights = Matrix(M, K);
    m.emission.means = Matrix(M, K);
    m.emission.variances = Matrix(M, K);
    for (std::size_t j = 0; j < M; ++j) {
        double w = 0.0;
        for (std::size_t l = 0; l < K; ++l) w += (m.emission.weights(j, l) = rng.uniform(0.2, 1.0));
        for (std::size_t l = 0; l < K; ++l) {
            m.emission.weights(j, l) /= w;
            m.emission.means(j, l) = rng.normal(0.0, 2.0);
            m.emission.variances(j, l) = rng.uniform(0.2, 2.0);
        }
    }
    m.sojourn.family = family;
    m.sojourn.u_max = u_max;
    m.sojourn.p1.resize(M);
    switch (family) {
        case SojournFamily::Geometric:
        case SojournFamily::Logarithmic:
            for (auto& v : m.sojourn.p1) v = rng.uniform(0.1, 0.9);
            break;
        case SojournFamily::Gamma:
        case SojournFamily::Weibull:
            m.sojourn.p2.resize(M);
            for (std::size_t j = 0; j < M; ++j) {
                m.sojourn.p1[j] = rng.uniform(0.5, 3.0);
                m.sojourn.p2[j] = rng.uniform(0.5, 3.0);
            }
            break;
    }
    if (family == SojournFamily::Logarithmic) {
        m.sojourn.shift.resize(M);
        for (auto& s : m.sojourn.shift) s = 1 + static_cast<int>(rng.index(2));
    }
    return m;
}

inline std::vector<double> random_obs(Rng& rng, std::size_t T) {
    std::vector<double> obs(T);
    for (auto& x : obs) x = rng.normal(0.0, 2.0);
    return obs;
}

}  // namespace oracle
