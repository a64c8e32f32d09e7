#include "regime/markov/fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "regime/core/numeric.hpp"
#include "regime/core/rng.hpp"

namespace regime::markov {

namespace {

double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters = 60) {
    const double phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

// Expected duration log-likelihood for one state under a candidate density:
// sum_u eta(u) log d(u) + sum_u eta_cens(u) log D(u), d renormalized on
// {1..u_max}.
double duration_objective(const SojournDensity& density, std::size_t state,
                          const double* eta, const double* eta_cens, int n) {
    std::vector<double> pmf;
    try {
        pmf = density.pmf_table(state);
    } catch (const std::exception&) {
        return kNegInf;
    }
    const int u_max = density.u_max;
    std::vector<double> surv(u_max);
    double tail = 0.0;
    for (int u = u_max; u >= 1; --u) {
        tail += pmf[u - 1];
        surv[u - 1] = std::min(tail, 1.0);
    }
    surv[0] = 1.0;
    double q = 0.0;
    for (int u = 1; u <= n; ++u) {
        if (eta[u - 1] > 0.0)
            q += eta[u - 1] * (pmf[u - 1] > 0.0 ? std::log(pmf[u - 1]) : -1e10);
        if (eta_cens[u - 1] > 0.0)
            q += eta_cens[u - 1] * (surv[u - 1] > 0.0 ? std::log(surv[u - 1]) : -1e10);
    }
    return q;
}

// Maximize the expected duration log-likelihood for one state, in place.
// Only accepts parameters that improve the objective, so the overall EM
// iteration never decreases the likelihood.
void reestimate_sojourn_state(SojournDensity& density, std::size_t state,
                              const double* eta, const double* eta_cens, int n) {
    auto objective = [&](const SojournDensity& cand) {
        return duration_objective(cand, state, eta, eta_cens, n);
    };
    SojournDensity best = density;
    double best_q = objective(density);

    switch (density.family) {
        case SojournFamily::Geometric:
        case SojournFamily::Logarithmic: {
            auto eval_p = [&](double p, int shift) {
                SojournDensity cand = density;
                cand.p1[state] = p;
                if (density.family == SojournFamily::Logarithmic) cand.shift[state] = shift;
                return objective(cand);
            };
            const int shift_hi =
                density.family == SojournFamily::Logarithmic ? std::min(4, density.u_max) : 1;
            for (int s = 1; s <= shift_hi; ++s) {
                const double p = golden_max([&](double x) { return eval_p(x, s); }, 1e-6, 1.0 - 1e-6);
                const double q = eval_p(p, s);
                if (q > best_q) {
                    best_q = q;
                    best.p1[state] = p;
                    if (density.family == SojournFamily::Logarithmic) best.shift[state] = s;
                }
            }
            break;
        }
        case SojournFamily::Gamma:
        case SojournFamily::Weibull: {
            double log_shape = std::log(density.p1[state]);
            double log_scale = std::log(density.p2[state]);
            auto eval = [&](double ls, double lc) {
                SojournDensity cand = density;
                cand.p1[state] = std::exp(ls);
                cand.p2[state] = std::exp(lc);
                return objective(cand);
            };
            for (int sweep = 0; sweep < 3; ++sweep) {
                log_shape = golden_max([&](double x) { return eval(x, log_scale); },
                                       log_shape - 3.0, log_shape + 3.0, 40);
                log_scale = golden_max([&](double x) { return eval(log_shape, x); },
                                       log_scale - 3.0, log_scale + 3.0, 40);
            }
            const double q = eval(log_shape, log_scale);
            if (q > best_q) {
                best_q = q;
                best.p1[state] = std::exp(log_shape);
                best.p2[state] = std::exp(log_scale);
            }
            break;
        }
    }
    density = best;
}

// Weighted GMM re-estimation shared by both model kinds. occupancy is T x M.
void reestimate_emission(GmmEmission& emission, const std::vector<double>& obs,
                         const Matrix& occupancy, double variance_floor) {
    const std::size_t T = obs.size();
    const std::size_t M = emission.num_states();
    const std::size_t K = emission.num_components();
    for (std::size_t j = 0; j < M; ++j) {
        std::vector<double> w(K, 0.0), wx(K, 0.0), wxx(K, 0.0);
        for (std::size_t t = 0; t < T; ++t) {
            const double g = occupancy(t, j);
            if (g <= 0.0) continue;
            auto lj = emission.component_log_joint(j, obs[t]);
            const double norm = log_sum_exp(lj);
            for (std::size_t l = 0; l < K; ++l) {
                const double r = g * std::exp(lj[l] - norm);
                w[l] += r;
                wx[l] += r * obs[t];
                wxx[l] += r * obs[t] * obs[t];
            }
        }
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        if (total <= 0.0) continue;  // state starved; keep previous parameters
        for (std::size_t l = 0; l < K; ++l) {
            if (w[l] <= 1e-12) continue;
            const double mean = wx[l] / w[l];
            const double var = std::max(wxx[l] / w[l] - mean * mean, variance_floor);
            emission.weights(j, l) = w[l] / total;
            emission.means(j, l) = mean;
            emission.variances(j, l) = var;
        }
        double wsum = 0.0;
        for (std::size_t l = 0; l < K; ++l) wsum += emission.weights(j, l);
        for (std::size_t l = 0; l < K; ++l) emission.weights(j, l) /= wsum;
    }
}

std::vector<double> quantiles(const std::vector<double>& obs, std::size_t n) {
    std::vector<double> sorted = obs;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double pos = (i + 0.5) / n * (sorted.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - lo;
        q[i] = sorted[lo] * (1.0 - frac) + sorted[std::min(lo + 1, sorted.size() - 1)] * frac;
    }
    return q;
}

HsmmModel initial_plain_model(const std::vector<double>& obs, const FitConfig& cfg, Rng& rng) {
    const std::size_t M = cfg.num_states;
    const std::size_t K = cfg.num_components;
    const double mean = std::accumulate(obs.begin(), obs.end(), 0.0) / obs.size();
    double var = 0.0;
    for (double x : obs) var += (x - mean) * (x - mean);
    var = std::max(var / obs.size(), cfg.variance_floor);
    const double sd = std::sqrt(var);

    HsmmModel model;
    model.kind = ModelKind::PlainHmm;
    model.initial.assign(M, 1.0 / M);
    model.transition = Matrix(M, M);
    const double stay = (M == 1) ? 1.0 : 0.8;
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            model.transition(i, j) = (i == j) ? stay : (1.0 - stay) / (M - 1);

    model.emission.weights = Matrix(M, K, 1.0 / K);
    model.emission.means = Matrix(M, K);
    model.emission.variances = Matrix(M, K, var);
    const auto q = quantiles(obs, M);
    for (std::size_t j = 0; j < M; ++j)
        for (std::size_t l = 0; l < K; ++l) {
            const double spread = (K > 1) ? (static_cast<double>(l) - 0.5 * (K - 1)) * 0.5 * sd : 0.0;
            model.emission.means(j, l) = q[j] + spread + rng.normal(0.0, 0.05 * sd);
        }
    return model;
}

struct EmResult {
    HsmmModel model;
    std::vector<double> trace;
};

EmResult run_em_plain(HsmmModel model, const std::vector<double>& obs, const FitConfig& cfg) {
    const std::size_t T = obs.size();
    const std::size_t M = model.num_states();
    std::vector<double> trace;
    double prev_ll = kNegInf;
    for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
        auto lat = detail::hmm_forward_backward(model, obs);
        trace.push_back(lat.log_likelihood);

        // Transition counts. Emission densities re-scaled per step so the
        // xi rows can be normalized directly.
        Matrix xi_sum(M, M);
        for (std::size_t t = 0; t + 1 < T; ++t) {
            double mx = kNegInf;
            for (std::size_t j = 0; j < M; ++j) mx = std::max(mx, lat.log_b(t + 1, j));
            double total = 0.0;
            Matrix xi(M, M);
            for (std::size_t i = 0; i < M; ++i)
                for (std::size_t j = 0; j < M; ++j) {
                    const double v = lat.alpha(t, i) * model.transition(i, j) *
                                     std::exp(lat.log_b(t + 1, j) - mx) * lat.beta(t + 1, j);
                    xi(i, j) = v;
                    total += v;
                }
            if (total <= 0.0) continue;
            for (std::size_t i = 0; i < M; ++i)
                for (std::size_t j = 0; j < M; ++j) xi_sum(i, j) += xi(i, j) / total;
        }

        for (std::size_t j = 0; j < M; ++j) model.initial[j] = lat.gamma(0, j);
        if (T > 1 && M > 1) {
            for (std::size_t i = 0; i < M; ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < M; ++j) row += xi_sum(i, j);
                if (row > 0.0)
                    for (std::size_t j = 0; j < M; ++j) model.transition(i, j) = xi_sum(i, j) / row;
            }
        }
        reestimate_emission(model.emission, obs, lat.gamma, cfg.variance_floor);

        if (iter > 0 && lat.log_likelihood - prev_ll <
                            cfg.tol * std::max(1.0, std::abs(prev_ll)))
            break;
        prev_ll = lat.log_likelihood;
    }
    return {std::move(model), std::move(trace)};
}

EmResult run_em_semi(HsmmModel model, const std::vector<double>& obs, const FitConfig& cfg) {
    const std::size_t M = model.num_states();
    std::vector<double> trace;
    double prev_ll = kNegInf;
    for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
        auto lat = detail::hsmm_forward_backward(model, obs, /*with_counts=*/true);
        trace.push_back(lat.log_likelihood);

        double start_total = std::accumulate(lat.start_post.begin(), lat.start_post.end(), 0.0);
        for (std::size_t j = 0; j < M; ++j) model.initial[j] = lat.start_post[j] / start_total;
        if (M > 1) {
            for (std::size_t i = 0; i < M; ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < M; ++j) row += lat.trans_counts(i, j);
                if (row > 0.0) {
                    for (std::size_t j = 0; j < M; ++j)
                        model.transition(i, j) = (i == j) ? 0.0 : lat.trans_counts(i, j) / row;
                }
            }
        }
        reestimate_emission(model.emission, obs, lat.gamma, cfg.variance_floor);
        const int n = static_cast<int>(lat.eta.cols());
        for (std::size_t j = 0; j < M; ++j)
            reestimate_sojourn_state(model.sojourn, j, lat.eta.row(j), lat.eta_censored.row(j), n);

        if (iter > 0 && lat.log_likelihood - prev_ll <
                            cfg.tol * std::max(1.0, std::abs(prev_ll)))
            break;
        prev_ll = lat.log_likelihood;
    }
    return {std::move(model), std::move(trace)};
}

// Sojourn parameters from maximum likelihood on the Viterbi-segment
// durations of the plain-HMM warm start.
SojournDensity init_sojourn(const FitConfig& cfg, const HsmmModel& plain,
                            const std::vector<double>& obs) {
    const std::size_t M = cfg.num_states;
    SojournDensity density;
    density.family = cfg.family;
    density.u_max = cfg.u_max;
    density.p1.assign(M, 0.5);
    if (cfg.family == SojournFamily::Gamma || cfg.family == SojournFamily::Weibull)
        density.p2.assign(M, 1.0);
    if (cfg.family == SojournFamily::Logarithmic) density.shift.assign(M, 1);

    const auto path = viterbi_decode(plain, obs);
    Matrix counts(M, cfg.u_max);
    std::vector<std::vector<double>> durations(M);
    int run = 1;
    for (std::size_t t = 1; t <= path.size(); ++t) {
        if (t < path.size() && path[t] == path[t - 1]) {
            ++run;
            continue;
        }
        const int u = std::min(run, cfg.u_max);
        counts(path[t - 1], u - 1) += 1.0;
        durations[path[t - 1]].push_back(u);
        run = 1;
    }

    std::vector<double> zeros(cfg.u_max, 0.0);
    for (std::size_t j = 0; j < M; ++j) {
        double m = 2.0, v = 1.0;
        if (!durations[j].empty()) {
            m = std::accumulate(durations[j].begin(), durations[j].end(), 0.0) /
                durations[j].size();
            for (double d : durations[j]) v += (d - m) * (d - m);
            v = std::max(v / durations[j].size(), 0.25);
        }
        switch (cfg.family) {
            case SojournFamily::Geometric:
                density.p1[j] = std::clamp(1.0 - 1.0 / std::max(m, 1.0 + 1e-6), 0.01, 0.99);
                break;
            case SojournFamily::Logarithmic:
                density.p1[j] = 0.5;
                density.shift[j] = std::max(
                    1, durations[j].empty()
                           ? 1
                           : static_cast<int>(*std::min_element(durations[j].begin(),
                                                                durations[j].end())));
                break;
            case SojournFamily::Gamma:
                density.p1[j] = std::clamp(m * m / v, 0.05, 50.0);
                density.p2[j] = std::clamp(v / m, 0.05, 100.0);
                break;
            case SojournFamily::Weibull:
                density.p1[j] = 1.2;
                density.p2[j] = std::max(m, 0.5);
                break;
        }
        reestimate_sojourn_state(density, j, counts.row(j), zeros.data(), cfg.u_max);
    }
    return density;
}

}  // namespace

FitResult baum_welch_fit(const std::vector<double>& obs, const FitConfig& cfg) {
    if (cfg.num_states < 1 || cfg.num_components < 1 || cfg.u_max < 1 || cfg.max_iters < 1)
        throw std::invalid_argument("baum_welch_fit: invalid config");
    if (obs.size() <= cfg.num_states * cfg.num_components)
        throw std::invalid_argument("baum_welch_fit: sequence too short for configuration");
    for (double x : obs)
        if (!std::isfinite(x)) throw std::invalid_argument("baum_welch_fit: non-finite observation");

    const bool semi = cfg.family != SojournFamily::Geometric;
    FitResult best;
    double best_ll = kNegInf;
    for (std::size_t r = 0; r < std::max<std::size_t>(cfg.restarts, 1); ++r) {
        Rng rng(substream_seed(cfg.seed, "hmm-init") + r);
        HsmmModel warm = initial_plain_model(obs, cfg, rng);
        EmResult result;
        if (!semi) {
            result = run_em_plain(std::move(warm), obs, cfg);
            // Mirror the fitted diagonal into an explicit geometric sojourn
            // so duration queries work uniformly across kinds.
            result.model.sojourn.family = SojournFamily::Geometric;
            result.model.sojourn.u_max = cfg.u_max;
            result.model.sojourn.p1.resize(cfg.num_states);
            for (std::size_t j = 0; j < cfg.num_states; ++j)
                result.model.sojourn.p1[j] =
                    std::clamp(result.model.transition(j, j), 1e-12, 1.0 - 1e-12);
        } else {
            FitConfig warm_cfg = cfg;
            warm_cfg.max_iters = std::min<std::size_t>(cfg.max_iters, 30);
            auto plain = run_em_plain(warm, obs, warm_cfg);

            HsmmModel model = plain.model;
            model.kind = ModelKind::SemiMarkov;
            model.sojourn = init_sojourn(cfg, plain.model, obs);
            const std::size_t M = cfg.num_states;
            if (M > 1) {
                for (std::size_t i = 0; i < M; ++i) {
                    double row = 0.0;
                    for (std::size_t j = 0; j < M; ++j)
                        if (j != i) row += model.transition(i, j);
                    for (std::size_t j = 0; j < M; ++j)
                        model.transition(i, j) =
                            (i == j) ? 0.0 : (row > 0.0 ? model.transition(i, j) / row : 1.0 / (M - 1));
                }
            }
            result = run_em_semi(std::move(model), obs, cfg);
        }
        if (!result.trace.empty() && result.trace.back() > best_ll) {
            best_ll = result.trace.back();
            best.model = std::move(result.model);
            best.log_likelihood_trace = std::move(result.trace);
        }
    }
    if (!std::isfinite(best_ll))
        throw std::runtime_error("baum_welch_fit: failed to reach a finite likelihood");
    best.model.validate();
    return best;
}

}  // namespace regime::markov
