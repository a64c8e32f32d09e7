#include "regime/markov/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "regime/core/numeric.hpp"

namespace regime::markov {

namespace detail {

Matrix emission_log_table(const HsmmModel& model, const std::vector<double>& obs) {
    const std::size_t T = obs.size();
    const std::size_t M = model.num_states();
    Matrix log_b(T, M);
    for (std::size_t t = 0; t < T; ++t) {
        if (!std::isfinite(obs[t]))
            throw std::invalid_argument("inference: non-finite observation");
        for (std::size_t j = 0; j < M; ++j)
            log_b(t, j) = model.emission.log_density(j, obs[t]);
    }
    return log_b;
}

HmmLattice hmm_forward_backward(const HsmmModel& model, const std::vector<double>& obs) {
    const std::size_t T = obs.size();
    const std::size_t M = model.num_states();
    if (T == 0) throw std::invalid_argument("inference: empty observation sequence");

    HmmLattice lat;
    lat.log_b = emission_log_table(model, obs);
    lat.alpha = Matrix(T, M);
    lat.beta = Matrix(T, M);
    lat.gamma = Matrix(T, M);
    lat.scale.assign(T, 0.0);

    // Scaled forward pass: alpha(t,j) = p(z_t = j | x_1..t), scale = p(x_t | x_1..t-1).
    // Emission densities are shifted by their per-step max before exponentiation.
    std::vector<double> shift(T);
    Matrix b(T, M);
    for (std::size_t t = 0; t < T; ++t) {
        double mx = kNegInf;
        for (std::size_t j = 0; j < M; ++j) mx = std::max(mx, lat.log_b(t, j));
        shift[t] = std::isfinite(mx) ? mx : 0.0;
        for (std::size_t j = 0; j < M; ++j) b(t, j) = std::exp(lat.log_b(t, j) - shift[t]);
    }

    double ll = 0.0;
    for (std::size_t j = 0; j < M; ++j) lat.alpha(0, j) = model.initial[j] * b(0, j);
    for (std::size_t t = 0; t < T; ++t) {
        if (t > 0) {
            for (std::size_t j = 0; j < M; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < M; ++i)
                    s += lat.alpha(t - 1, i) * model.transition(i, j);
                lat.alpha(t, j) = s * b(t, j);
            }
        }
        double c = 0.0;
        for (std::size_t j = 0; j < M; ++j) c += lat.alpha(t, j);
        if (!(c > 0.0)) throw std::runtime_error("inference: zero forward mass (likelihood underflow)");
        for (std::size_t j = 0; j < M; ++j) lat.alpha(t, j) /= c;
        lat.scale[t] = c;
        ll += std::log(c) + shift[t];
    }
    lat.log_likelihood = ll;

    for (std::size_t j = 0; j < M; ++j) lat.beta(T - 1, j) = 1.0;
    for (std::size_t t = T - 1; t-- > 0;) {
        for (std::size_t i = 0; i < M; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < M; ++j)
                s += model.transition(i, j) * b(t + 1, j) * lat.beta(t + 1, j);
            lat.beta(t, i) = s / lat.scale[t + 1];
        }
    }
    for (std::size_t t = 0; t < T; ++t) {
        double row = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            lat.gamma(t, j) = lat.alpha(t, j) * lat.beta(t, j);
            row += lat.gamma(t, j);
        }
        for (std::size_t j = 0; j < M; ++j) lat.gamma(t, j) /= row;
    }
    return lat;
}

namespace {

// Precomputed log tables driving the explicit-duration recursions.
struct HsmmTables {
    std::size_t T = 0, M = 0;
    int U = 0;
    Matrix log_d;       // M x U
    Matrix log_D;       // M x U (survival)
    Matrix log_A;       // M x M
    std::vector<double> log_pi;
    Matrix cum_log_b;   // M x (T+1) prefix sums of emission log-densities

    // log prod_{t=s..e} b_j(x_t), inclusive 0-based.
    double seg(std::size_t j, std::size_t s, std::size_t e) const {
        return cum_log_b(j, e + 1) - cum_log_b(j, s);
    }
};

HsmmTables build_tables(const HsmmModel& model, const std::vector<double>& obs) {
    HsmmTables tb;
    tb.T = obs.size();
    tb.M = model.num_states();
    tb.U = std::min<int>(model.sojourn.u_max, static_cast<int>(tb.T));

    tb.log_d = Matrix(tb.M, tb.U);
    tb.log_D = Matrix(tb.M, tb.U);
    for (std::size_t j = 0; j < tb.M; ++j) {
        const auto pmf = model.sojourn.pmf_table(j);
        double tail = 0.0;
        for (int u = model.sojourn.u_max; u >= 1; --u) {
            tail += pmf[u - 1];
            if (u <= tb.U) {
                tb.log_d(j, u - 1) = pmf[u - 1] > 0.0 ? std::log(pmf[u - 1]) : kNegInf;
                tb.log_D(j, u - 1) = tail > 0.0 ? std::log(std::min(tail, 1.0)) : kNegInf;
            }
        }
        tb.log_D(j, 0) = 0.0;  // D(1) = 1 exactly
    }

    tb.log_A = Matrix(tb.M, tb.M, kNegInf);
    for (std::size_t i = 0; i < tb.M; ++i)
        for (std::size_t j = 0; j < tb.M; ++j)
            if (model.transition(i, j) > 0.0) tb.log_A(i, j) = std::log(model.transition(i, j));
    tb.log_pi.assign(tb.M, kNegInf);
    for (std::size_t j = 0; j < tb.M; ++j)
        if (model.initial[j] > 0.0) tb.log_pi[j] = std::log(model.initial[j]);

    const Matrix log_b = emission_log_table(model, obs);
    tb.cum_log_b = Matrix(tb.M, tb.T + 1);
    for (std::size_t j = 0; j < tb.M; ++j) {
        tb.cum_log_b(j, 0) = 0.0;
        for (std::size_t t = 0; t < tb.T; ++t)
            tb.cum_log_b(j, t + 1) = tb.cum_log_b(j, t) + log_b(t, j);
    }
    return tb;
}

}  // namespace

HsmmLattice hsmm_forward_backward(const HsmmModel& model, const std::vector<double>& obs,
                                  bool with_counts, bool with_filtered) {
    const std::size_t T = obs.size();
    const std::size_t M = model.num_states();
    if (T == 0) throw std::invalid_argument("inference: empty observation sequence");

    HsmmLattice lat;
    lat.gamma = Matrix(T, M);

    if (M == 1) {
        // Degenerate chain: one unbroken (censored) sojourn.
        const Matrix log_b = emission_log_table(model, obs);
        double ll = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            ll += log_b(t, 0);
            lat.gamma(t, 0) = 1.0;
        }
        lat.log_likelihood = ll;
        if (with_counts) {
            lat.start_post.assign(1, 1.0);
            lat.trans_counts = Matrix(1, 1);
            const int U = std::min<int>(model.sojourn.u_max, static_cast<int>(T));
            lat.eta = Matrix(1, U);
            lat.eta_censored = Matrix(1, U);
            if (static_cast<int>(T) <= U) lat.eta_censored(0, T - 1) = 1.0;
        }
        if (with_filtered) lat.filtered = Matrix(T, 1, 1.0);
        return lat;
    }

    const HsmmTables tb = build_tables(model, obs);
    const int U = tb.U;

    // Forward: inflow(t,j) = log p(x_0..t-1, segment of j starts at t);
    //          alpha_end(t,j) = log p(x_0..t, completed segment of j ends at t).
    Matrix inflow(T, M, kNegInf);
    Matrix alpha_end(T, M, kNegInf);
    std::vector<double> terms;
    terms.reserve(std::max<std::size_t>(static_cast<std::size_t>(U), M) + 1);

    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t j = 0; j < M; ++j) {
            if (t == 0) {
                inflow(0, j) = tb.log_pi[j];
            } else {
                terms.clear();
                for (std::size_t i = 0; i < M; ++i)
                    if (i != j && tb.log_A(i, j) != kNegInf)
                        terms.push_back(alpha_end(t - 1, i) + tb.log_A(i, j));
                inflow(t, j) = log_sum_exp(terms);
            }
        }
        for (std::size_t j = 0; j < M; ++j) {
            terms.clear();
            const int umax = std::min<int>(U, static_cast<int>(t) + 1);
            for (int u = 1; u <= umax; ++u) {
                const std::size_t s = t - u + 1;
                if (tb.log_d(j, u - 1) == kNegInf) continue;
                terms.push_back(inflow(s, j) + tb.log_d(j, u - 1) + tb.seg(j, s, t));
            }
            alpha_end(t, j) = log_sum_exp(terms);
        }
    }

    terms.clear();
    for (std::size_t j = 0; j < M; ++j) {
        const int umax = std::min<int>(U, static_cast<int>(T));
        for (int u = 1; u <= umax; ++u) {
            const std::size_t s = T - u;
            terms.push_back(inflow(s, j) + tb.log_D(j, u - 1) + tb.seg(j, s, T - 1));
        }
    }
    const double ll = log_sum_exp(terms);
    if (!std::isfinite(ll))
        throw std::runtime_error("inference: non-finite semi-Markov log-likelihood");
    lat.log_likelihood = ll;

    // Backward: outflow(s,j) = log p(x_s..T-1 | segment of j starts at s);
    //           beta_end(t,i) = log p(x_t+1..T-1 | completed segment of i ends at t).
    Matrix outflow(T, M, kNegInf);
    Matrix beta_end(T, M, kNegInf);
    for (std::size_t s = T; s-- > 0;) {
        for (std::size_t j = 0; j < M; ++j) {
            terms.clear();
            const int umax = std::min<int>(U, static_cast<int>(T - s));
            for (int u = 1; u <= umax; ++u) {
                const std::size_t e = s + u - 1;
                if (e == T - 1) {
                    terms.push_back(tb.log_D(j, u - 1) + tb.seg(j, s, T - 1));
                } else if (tb.log_d(j, u - 1) != kNegInf) {
                    terms.push_back(tb.log_d(j, u - 1) + tb.seg(j, s, e) + beta_end(e, j));
                }
            }
            outflow(s, j) = log_sum_exp(terms);
        }
        if (s >= 1) {
            for (std::size_t i = 0; i < M; ++i) {
                terms.clear();
                for (std::size_t j = 0; j < M; ++j)
                    if (j != i && tb.log_A(i, j) != kNegInf)
                        terms.push_back(tb.log_A(i, j) + outflow(s, j));
                beta_end(s - 1, i) = log_sum_exp(terms);
            }
        }
    }

    // Occupancy via the start/end flow balance:
    // gamma(t) = gamma(t-1) + P(start at t) - P(completed end at t-1).
    for (std::size_t t = 0; t < T; ++t) {
        double row = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            double g = (t == 0) ? 0.0 : lat.gamma(t - 1, j);
            g += std::exp(inflow(t, j) + outflow(t, j) - ll);
            if (t > 0 && t - 1 < T - 1) g -= std::exp(alpha_end(t - 1, j) + beta_end(t - 1, j) - ll);
            g = std::clamp(g, 0.0, 1.0);
            lat.gamma(t, j) = g;
            row += g;
        }
        if (!(row > 0.0)) throw std::runtime_error("inference: degenerate occupancy row");
        for (std::size_t j = 0; j < M; ++j) lat.gamma(t, j) /= row;
    }

    if (with_counts) {
        lat.start_post.assign(M, 0.0);
        for (std::size_t j = 0; j < M; ++j)
            lat.start_post[j] = std::exp(inflow(0, j) + outflow(0, j) - ll);
        lat.trans_counts = Matrix(M, M);
        for (std::size_t t = 0; t + 1 < T; ++t)
            for (std::size_t i = 0; i < M; ++i) {
                if (alpha_end(t, i) == kNegInf) continue;
                for (std::size_t j = 0; j < M; ++j)
                    if (j != i && tb.log_A(i, j) != kNegInf)
                        lat.trans_counts(i, j) +=
                            std::exp(alpha_end(t, i) + tb.log_A(i, j) + outflow(t + 1, j) - ll);
            }
        lat.eta = Matrix(M, U);
        lat.eta_censored = Matrix(M, U);
        for (std::size_t s = 0; s < T; ++s)
            for (std::size_t j = 0; j < M; ++j) {
                if (inflow(s, j) == kNegInf) continue;
                const int umax = std::min<int>(U, static_cast<int>(T - s));
                for (int u = 1; u <= umax; ++u) {
                    const std::size_t e = s + u - 1;
                    if (e == T - 1) {
                        lat.eta_censored(j, u - 1) +=
                            std::exp(inflow(s, j) + tb.log_D(j, u - 1) + tb.seg(j, s, T - 1) - ll);
                    } else if (tb.log_d(j, u - 1) != kNegInf) {
                        lat.eta(j, u - 1) += std::exp(inflow(s, j) + tb.log_d(j, u - 1) +
                                                      tb.seg(j, s, e) + beta_end(e, j) - ll);
                    }
                }
            }
    }

    if (with_filtered) {
        lat.filtered = Matrix(T, M);
        for (std::size_t t = 0; t < T; ++t) {
            double row = 0.0;
            for (std::size_t j = 0; j < M; ++j) {
                terms.clear();
                const int umax = std::min<int>(U, static_cast<int>(t) + 1);
                for (int u = 1; u <= umax; ++u) {
                    const std::size_t s = t - u + 1;
                    terms.push_back(inflow(s, j) + tb.seg(j, s, t) + tb.log_D(j, u - 1));
                }
                // Shift by the forward mass scale for stability.
                lat.filtered(t, j) = std::exp(log_sum_exp(terms) - ll);
                row += lat.filtered(t, j);
            }
            for (std::size_t j = 0; j < M; ++j) lat.filtered(t, j) /= row;
        }
    }

    return lat;
}

}  // namespace detail

namespace {

std::vector<int> viterbi_plain(const HsmmModel& model, const std::vector<double>& obs) {
    const std::size_t T = obs.size();
    const std::size_t M = model.num_states();
    const Matrix log_b = detail::emission_log_table(model, obs);
    Matrix log_A(M, M, kNegInf);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            if (model.transition(i, j) > 0.0) log_A(i, j) = std::log(model.transition(i, j));

    Matrix delta(T, M, kNegInf);
    std::vector<std::vector<int>> back(T, std::vector<int>(M, 0));
    for (std::size_t j = 0; j < M; ++j)
        delta(0, j) = (model.initial[j] > 0.0 ? std::log(model.initial[j]) : kNegInf) + log_b(0, j);
    for (std::size_t t = 1; t < T; ++t)
        for (std::size_t j = 0; j < M; ++j) {
            double best = kNegInf;
            int arg = 0;
            for (std::size_t i = 0; i < M; ++i) {
                const double cand = delta(t - 1, i) + log_A(i, j);
                if (cand > best) {
                    best = cand;
                    arg = static_cast<int>(i);
                }
            }
            delta(t, j) = best + log_b(t, j);
            back[t][j] = arg;
        }
    int state = 0;
    double best = kNegInf;
    for (std::size_t j = 0; j < M; ++j)
        if (delta(T - 1, j) > best) {
            best = delta(T - 1, j);
            state = static_cast<int>(j);
        }
    std::vector<int> path(T);
    path[T - 1] = state;
    for (std::size_t t = T - 1; t-- > 0;) {
        state = back[t + 1][state];
        path[t] = state;
    }
    return path;
}

std::vector<int> viterbi_semi(const HsmmModel& model, const std::vector<double>& obs) {
    const std::size_t T = obs.size();
    const std::size_t M = model.num_states();
    if (M == 1) return std::vector<int>(T, 0);

    const int U = std::min<int>(model.sojourn.u_max, static_cast<int>(T));
    Matrix log_d(M, U), log_D(M, U);
    for (std::size_t j = 0; j < M; ++j) {
        const auto pmf = model.sojourn.pmf_table(j);
        double tail = 0.0;
        for (int u = model.sojourn.u_max; u >= 1; --u) {
            tail += pmf[u - 1];
            if (u <= U) {
                log_d(j, u - 1) = pmf[u - 1] > 0.0 ? std::log(pmf[u - 1]) : kNegInf;
                log_D(j, u - 1) = tail > 0.0 ? std::log(std::min(tail, 1.0)) : kNegInf;
            }
        }
        log_D(j, 0) = 0.0;
    }
    Matrix log_A(M, M, kNegInf);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            if (model.transition(i, j) > 0.0) log_A(i, j) = std::log(model.transition(i, j));
    const Matrix log_b = detail::emission_log_table(model, obs);
    Matrix cum(M, T + 1);
    for (std::size_t j = 0; j < M; ++j) {
        cum(j, 0) = 0.0;
        for (std::size_t t = 0; t < T; ++t) cum(j, t + 1) = cum(j, t) + log_b(t, j);
    }
    auto seg = [&](std::size_t j, std::size_t s, std::size_t e) { return cum(j, e + 1) - cum(j, s); };

    Matrix v_inflow(T, M, kNegInf);   // best score entering a segment of j at t
    Matrix v_end(T, M, kNegInf);      // best score with completed segment of j ending at t
    std::vector<std::vector<int>> bp_prev(T, std::vector<int>(M, -1));  // predecessor state at start t
    std::vector<std::vector<int>> bp_dur(T, std::vector<int>(M, 0));    // duration of segment ending at t

    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t j = 0; j < M; ++j) {
            if (t == 0) {
                v_inflow(0, j) = model.initial[j] > 0.0 ? std::log(model.initial[j]) : kNegInf;
            } else {
                double best = kNegInf;
                int arg = -1;
                for (std::size_t i = 0; i < M; ++i) {
                    if (i == j) continue;
                    const double cand = v_end(t - 1, i) + log_A(i, j);
                    if (cand > best) {
                        best = cand;
                        arg = static_cast<int>(i);
                    }
                }
                v_inflow(t, j) = best;
                bp_prev[t][j] = arg;
            }
        }
        for (std::size_t j = 0; j < M; ++j) {
            double best = kNegInf;
            int arg = 0;
            const int umax = std::min<int>(U, static_cast<int>(t) + 1);
            for (int u = 1; u <= umax; ++u) {
                const std::size_t s = t - u + 1;
                const double cand = v_inflow(s, j) + log_d(j, u - 1) + seg(j, s, t);
                if (cand > best) {
                    best = cand;
                    arg = u;
                }
            }
            v_end(t, j) = best;
            bp_dur[t][j] = arg;
        }
    }

    double best = kNegInf;
    std::size_t best_j = 0;
    int best_u = 1;
    for (std::size_t j = 0; j < M; ++j) {
        const int umax = std::min<int>(U, static_cast<int>(T));
        for (int u = 1; u <= umax; ++u) {
            const std::size_t s = T - u;
            const double cand = v_inflow(s, j) + log_D(j, u - 1) + seg(j, s, T - 1);
            if (cand > best) {
                best = cand;
                best_j = j;
                best_u = u;
            }
        }
    }
    if (!std::isfinite(best))
        throw std::runtime_error("viterbi: no feasible segmentation (u_max too small?)");

    std::vector<int> path(T);
    std::size_t e = T;  // exclusive end of the current segment
    std::size_t j = best_j;
    int u = best_u;
    while (true) {
        const std::size_t s = e - u;
        for (std::size_t t = s; t < e; ++t) path[t] = static_cast<int>(j);
        if (s == 0) break;
        const int prev = bp_prev[s][j];
        j = static_cast<std::size_t>(prev);
        u = bp_dur[s - 1][j];
        e = s;
    }
    return path;
}

}  // namespace

std::vector<int> viterbi_decode(const HsmmModel& model, const std::vector<double>& obs) {
    model.validate();
    if (obs.empty()) throw std::invalid_argument("viterbi: empty observation sequence");
    if (model.num_states() == 1) return std::vector<int>(obs.size(), 0);
    return model.kind == ModelKind::PlainHmm ? viterbi_plain(model, obs)
                                             : viterbi_semi(model, obs);
}

PosteriorTable forward_backward(const HsmmModel& model, const std::vector<double>& obs) {
    model.validate();
    if (obs.empty()) throw std::invalid_argument("forward_backward: empty observation sequence");
    PosteriorTable out;
    if (model.kind == ModelKind::PlainHmm) {
        auto lat = detail::hmm_forward_backward(model, obs);
        out.gamma = std::move(lat.gamma);
        out.log_likelihood = lat.log_likelihood;
    } else {
        auto lat = detail::hsmm_forward_backward(model, obs, /*with_counts=*/false);
        out.gamma = std::move(lat.gamma);
        out.log_likelihood = lat.log_likelihood;
    }
    out.viterbi_path = viterbi_decode(model, obs);
    return out;
}

double log_likelihood(const HsmmModel& model, const std::vector<double>& obs) {
    model.validate();
    if (obs.empty()) throw std::invalid_argument("log_likelihood: empty observation sequence");
    if (model.kind == ModelKind::PlainHmm)
        return detail::hmm_forward_backward(model, obs).log_likelihood;
    return detail::hsmm_forward_backward(model, obs, false).log_likelihood;
}

Matrix state_posteriors(const HsmmModel& model, const std::vector<double>& obs, bool smoothed) {
    model.validate();
    if (obs.empty()) throw std::invalid_argument("state_posteriors: empty observation sequence");
    if (model.kind == ModelKind::PlainHmm) {
        auto lat = detail::hmm_forward_backward(model, obs);
        return smoothed ? lat.gamma : lat.alpha;
    }
    auto lat = detail::hsmm_forward_backward(model, obs, false, /*with_filtered=*/!smoothed);
    return smoothed ? lat.gamma : lat.filtered;
}

}  // namespace regime::markov
