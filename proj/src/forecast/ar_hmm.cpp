#include "regime/forecast/ar_hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "regime/core/numeric.hpp"
#include "regime/core/rng.hpp"

namespace regime::forecast {

namespace {

constexpr double kRidge = 1e-8;
constexpr double kVarFloor = 1e-8;

// Gaussian elimination with partial pivoting; n is tiny (lag + 1).
std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (std::abs(a(pivot, col)) < 1e-300)
            throw std::runtime_error("fit_ar_hmm: singular weighted normal equations");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double m = a(r, col) / a(col, col);
            if (m == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a(r, c) -= m * a(col, c);
            b[r] -= m * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
        x[r] = s / a(r, r);
    }
    return x;
}

double ar_mean(const ArHmmModel& m, std::size_t j, const std::vector<double>& x, std::size_t t) {
    double mu = m.intercept[j];
    for (std::size_t i = 0; i < m.lag; ++i) mu += m.coef(j, i) * x[t - 1 - i];
    return mu;
}

// Per-step emission log densities for t = lag..T-1 (row t - lag).
Matrix emission_table(const ArHmmModel& m, const std::vector<double>& x) {
    const std::size_t M = m.num_states();
    Matrix log_b(x.size() - m.lag, M);
    for (std::size_t t = m.lag; t < x.size(); ++t)
        for (std::size_t j = 0; j < M; ++j)
            log_b(t - m.lag, j) = log_normal_pdf(x[t], ar_mean(m, j, x, t),
                                                 std::sqrt(m.noise_var[j]));
    return log_b;
}

struct Lattice {
    Matrix alpha;  // filtered, rows normalized
    Matrix gamma;
    Matrix xi_sum;  // M x M expected transitions
    double log_likelihood = 0.0;
};

Lattice forward_backward(const ArHmmModel& m, const Matrix& log_b, bool with_counts) {
    const std::size_t T = log_b.rows(), M = log_b.cols();
    Lattice lat;
    lat.alpha = Matrix(T, M);
    Matrix b(T, M);
    std::vector<double> shift(T);
    for (std::size_t t = 0; t < T; ++t) {
        shift[t] = *std::max_element(log_b.row(t), log_b.row(t) + M);
        for (std::size_t j = 0; j < M; ++j) b(t, j) = std::exp(log_b(t, j) - shift[t]);
    }
    std::vector<double> scale(T);
    for (std::size_t t = 0; t < T; ++t) {
        double s = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            double a = 0.0;
            if (t == 0) {
                a = m.initial[j];
            } else {
                for (std::size_t k = 0; k < M; ++k) a += lat.alpha(t - 1, k) * m.transition(k, j);
            }
            lat.alpha(t, j) = a * b(t, j);
            s += lat.alpha(t, j);
        }
        if (!(s > 0.0)) throw std::runtime_error("fit_ar_hmm: zero-probability step");
        for (std::size_t j = 0; j < M; ++j) lat.alpha(t, j) /= s;
        scale[t] = s;
        lat.log_likelihood += std::log(s) + shift[t];
    }
    if (!with_counts) return lat;

    Matrix beta(T, M);
    lat.gamma = Matrix(T, M);
    lat.xi_sum = Matrix(M, M);
    for (std::size_t j = 0; j < M; ++j) beta(T - 1, j) = 1.0;
    for (std::size_t t = T - 1; t-- > 0;) {
        for (std::size_t j = 0; j < M; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < M; ++k)
                s += m.transition(j, k) * b(t + 1, k) * beta(t + 1, k);
            beta(t, j) = s / scale[t + 1];
        }
    }
    for (std::size_t t = 0; t < T; ++t) {
        double s = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            lat.gamma(t, j) = lat.alpha(t, j) * beta(t, j);
            s += lat.gamma(t, j);
        }
        for (std::size_t j = 0; j < M; ++j) lat.gamma(t, j) /= s;
    }
    for (std::size_t t = 0; t + 1 < T; ++t)
        for (std::size_t j = 0; j < M; ++j)
            for (std::size_t k = 0; k < M; ++k)
                lat.xi_sum(j, k) += lat.alpha(t, j) * m.transition(j, k) * b(t + 1, k) *
                                    beta(t + 1, k) / scale[t + 1];
    return lat;
}

ArHmmModel initial_model(const std::vector<double>& x, const ArHmmFitConfig& cfg, Rng& rng,
                         bool jitter) {
    const std::size_t M = cfg.num_states;
    ArHmmModel m;
    m.lag = cfg.lag;
    m.transition = Matrix(M, M);
    m.initial.assign(M, 1.0 / static_cast<double>(M));
    m.coef = Matrix(M, cfg.lag);
    m.intercept.resize(M);
    m.noise_var.resize(M);
    for (std::size_t j = 0; j < M; ++j)
        for (std::size_t k = 0; k < M; ++k)
            m.transition(j, k) = (j == k) ? 0.8 : 0.2 / std::max<std::size_t>(1, M - 1);
    if (M == 1) m.transition(0, 0) = 1.0;

    std::vector<double> sorted(x);
    std::sort(sorted.begin(), sorted.end());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var = std::max(kVarFloor, var / static_cast<double>(x.size()));
    const double sd = std::sqrt(var);
    for (std::size_t j = 0; j < M; ++j) {
        const double q = (2.0 * static_cast<double>(j) + 1.0) / (2.0 * static_cast<double>(M));
        m.intercept[j] = sorted[static_cast<std::size_t>(q * static_cast<double>(sorted.size()))];
        if (jitter) m.intercept[j] += 0.1 * sd * rng.normal();
        m.noise_var[j] = var;
    }
    return m;
}

void m_step(ArHmmModel& m, const std::vector<double>& x, const Lattice& lat) {
    const std::size_t M = m.num_states(), L = m.lag, D = L + 1;
    for (std::size_t j = 0; j < M; ++j) {
        double row = 0.0;
        for (std::size_t k = 0; k < M; ++k) row += lat.xi_sum(j, k);
        if (row > 0.0)
            for (std::size_t k = 0; k < M; ++k) m.transition(j, k) = lat.xi_sum(j, k) / row;
        m.initial[j] = lat.gamma(0, j);
    }
    for (std::size_t j = 0; j < M; ++j) {
        Matrix xtx(D, D);
        std::vector<double> xty(D, 0.0), design(D);
        for (std::size_t t = L; t < x.size(); ++t) {
            const double w = lat.gamma(t - L, j);
            design[0] = 1.0;
            for (std::size_t i = 0; i < L; ++i) design[1 + i] = x[t - 1 - i];
            for (std::size_t a = 0; a < D; ++a) {
                xty[a] += w * design[a] * x[t];
                for (std::size_t b = 0; b < D; ++b) xtx(a, b) += w * design[a] * design[b];
            }
        }
        for (std::size_t a = 0; a < D; ++a) xtx(a, a) += kRidge;
        const auto beta = solve_linear(xtx, xty);
        m.intercept[j] = beta[0];
        for (std::size_t i = 0; i < L; ++i) m.coef(j, i) = beta[1 + i];
        double wsum = 0.0, rss = 0.0;
        for (std::size_t t = L; t < x.size(); ++t) {
            const double w = lat.gamma(t - L, j);
            const double r = x[t] - ar_mean(m, j, x, t);
            wsum += w;
            rss += w * r * r;
        }
        m.noise_var[j] = std::max(kVarFloor, wsum > 0.0 ? rss / wsum : m.noise_var[j]);
    }
}

}  // namespace

void ArHmmModel::validate() const {
    const std::size_t M = num_states();
    if (M == 0 || lag == 0) throw std::invalid_argument("ArHmmModel: empty model");
    if (transition.rows() != M || transition.cols() != M || initial.size() != M ||
        coef.rows() != M || coef.cols() != lag || noise_var.size() != M)
        throw std::invalid_argument("ArHmmModel: shape mismatch");
    double pi_sum = 0.0;
    for (double p : initial) pi_sum += p;
    if (std::abs(pi_sum - 1.0) > 1e-6)
        throw std::invalid_argument("ArHmmModel: initial distribution not normalized");
    for (std::size_t j = 0; j < M; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < M; ++k) s += transition(j, k);
        if (std::abs(s - 1.0) > 1e-6)
            throw std::invalid_argument("ArHmmModel: transition row not normalized");
        if (!(noise_var[j] > 0.0)) throw std::invalid_argument("ArHmmModel: noise variance <= 0");
    }
}

ArHmmFitResult fit_ar_hmm(const std::vector<double>& series, const ArHmmFitConfig& cfg) {
    if (cfg.num_states == 0 || cfg.lag == 0)
        throw std::invalid_argument("fit_ar_hmm: states and lag must be positive");
    if (series.size() <= cfg.lag * cfg.num_states + cfg.lag)
        throw std::invalid_argument("fit_ar_hmm: series too short for the requested order");
    Rng rng(cfg.seed, "hmm-init");

    ArHmmFitResult best;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t restart = 0; restart < std::max<std::size_t>(1, cfg.restarts); ++restart) {
        ArHmmModel m = initial_model(series, cfg, rng, restart > 0);
        std::vector<double> trace;
        double prev = -std::numeric_limits<double>::infinity();
        for (std::size_t it = 0; it < cfg.max_iters; ++it) {
            auto lat = forward_backward(m, emission_table(m, series), true);
            trace.push_back(lat.log_likelihood);
            m_step(m, series, lat);
            if (std::isfinite(prev) &&
                lat.log_likelihood - prev <=
                    cfg.tol * (std::abs(prev) + 1.0))
                break;
            prev = lat.log_likelihood;
        }
        const double ll = forward_backward(m, emission_table(m, series), false).log_likelihood;
        trace.push_back(ll);
        if (ll > best_ll) {
            best_ll = ll;
            best.model = std::move(m);
            best.log_likelihood_trace = std::move(trace);
        }
    }
    best.model.validate();
    return best;
}

Matrix ar_hmm_filter(const ArHmmModel& model, const std::vector<double>& series) {
    model.validate();
    if (series.size() <= model.lag)
        throw std::invalid_argument("ar_hmm_filter: history shorter than the lag order");
    return forward_backward(model, emission_table(model, series), false).alpha;
}

double ar_hmm_predict(const ArHmmModel& model, const std::vector<double>& history) {
    const Matrix alpha = ar_hmm_filter(model, history);
    const std::size_t t = history.size();  // predicting x[t]
    double pred = 0.0;
    for (std::size_t j = 0; j < model.num_states(); ++j) {
        double mu = model.intercept[j];
        for (std::size_t i = 0; i < model.lag; ++i) mu += model.coef(j, i) * history[t - 1 - i];
        pred += alpha(alpha.rows() - 1, j) * mu;
    }
    return pred;
}

std::vector<double> ar_hmm_predict_range(const ArHmmModel& model,
                                         const std::vector<double>& series, std::size_t begin,
                                         std::size_t end) {
    if (begin <= model.lag || end > series.size() || begin > end)
        throw std::invalid_argument("ar_hmm_predict_range: bad range");
    const Matrix alpha = ar_hmm_filter(model, series);
    std::vector<double> out;
    out.reserve(end - begin);
    for (std::size_t t = begin; t < end; ++t) {
        double pred = 0.0;
        for (std::size_t j = 0; j < model.num_states(); ++j) {
            double mu = model.intercept[j];
            for (std::size_t i = 0; i < model.lag; ++i) mu += model.coef(j, i) * series[t - 1 - i];
            pred += alpha(t - 1 - model.lag, j) * mu;
        }
        out.push_back(pred);
    }
    return out;
}

}  // namespace regime::forecast
