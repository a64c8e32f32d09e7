#include "regime/markov/sojourn.hpp"

#include <cmath>
#include <stdexcept>

namespace regime::markov {

std::string to_string(SojournFamily family) {
    switch (family) {
        case SojournFamily::Geometric: return "geometric";
        case SojournFamily::Logarithmic: return "logarithmic";
        case SojournFamily::Gamma: return "gamma";
        case SojournFamily::Weibull: return "weibull";
    }
    throw std::logic_error("unknown sojourn family");
}

SojournFamily sojourn_family_from_string(const std::string& name) {
    if (name == "geometric") return SojournFamily::Geometric;
    if (name == "logarithmic") return SojournFamily::Logarithmic;
    if (name == "gamma") return SojournFamily::Gamma;
    if (name == "weibull") return SojournFamily::Weibull;
    throw std::invalid_argument("unknown sojourn family: " + name);
}

void SojournDensity::validate() const {
    if (u_max < 1) throw std::invalid_argument("SojournDensity: u_max < 1");
    if (p1.empty()) throw std::invalid_argument("SojournDensity: no states");
    const std::size_t m = p1.size();
    switch (family) {
        case SojournFamily::Geometric:
        case SojournFamily::Logarithmic:
            for (double v : p1)
                if (!(v > 0.0 && v < 1.0))
                    throw std::invalid_argument("SojournDensity: parameter outside (0,1)");
            break;
        case SojournFamily::Gamma:
        case SojournFamily::Weibull:
            if (p2.size() != m)
                throw std::invalid_argument("SojournDensity: missing scale parameters");
            for (std::size_t j = 0; j < m; ++j)
                if (!(p1[j] > 0.0) || !(p2[j] > 0.0))
                    throw std::invalid_argument("SojournDensity: non-positive shape/scale");
            break;
    }
    if (family == SojournFamily::Logarithmic) {
        if (shift.size() != m)
            throw std::invalid_argument("SojournDensity: missing shift parameters");
        for (int s : shift)
            if (s < 1) throw std::invalid_argument("SojournDensity: shift < 1");
    }
}

// Lanczos-free ln Gamma via std::lgamma; series / continued fraction for the
// regularized incomplete gamma, standard split at x < a+1.
double gamma_cdf_regularized(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int n = 0; n < 500; ++n) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Continued fraction for Q(a,x), modified Lentz.
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

namespace {

double weibull_cdf(double shape, double scale, double x) {
    if (x <= 0.0) return 0.0;
    return 1.0 - std::exp(-std::pow(x / scale, shape));
}

}  // namespace

double SojournDensity::raw_pmf(std::size_t state, int u) const {
    if (state >= num_states()) throw std::out_of_range("SojournDensity: state index");
    if (u < 1) throw std::out_of_range("SojournDensity: duration < 1");
    switch (family) {
        case SojournFamily::Geometric: {
            // d(u) = a^{u-1} (1-a) on u >= 1.
            const double a = p1[state];
            return std::pow(a, u - 1) * (1.0 - a);
        }
        case SojournFamily::Logarithmic: {
            const double p = p1[state];
            const int v = u - shift[state] + 1;
            if (v < 1) return 0.0;
            return -std::pow(p, v) / (static_cast<double>(v) * std::log1p(-p));
        }
        case SojournFamily::Gamma: {
            const double a = p1[state], s = p2[state];
            return gamma_cdf_regularized(a, u / s) - gamma_cdf_regularized(a, (u - 1) / s);
        }
        case SojournFamily::Weibull: {
            const double a = p1[state], s = p2[state];
            return weibull_cdf(a, s, u) - weibull_cdf(a, s, u - 1.0);
        }
    }
    throw std::logic_error("unknown sojourn family");
}

std::vector<double> SojournDensity::pmf_table(std::size_t state) const {
    std::vector<double> table(static_cast<std::size_t>(u_max));
    double total = 0.0;
    for (int u = 1; u <= u_max; ++u) {
        table[u - 1] = raw_pmf(state, u);
        total += table[u - 1];
    }
    if (total <= 0.0)
        throw std::runtime_error("SojournDensity: zero mass on {1..u_max}");
    for (double& v : table) v /= total;
    return table;
}

double SojournDensity::pmf(std::size_t state, int u) const {
    if (u < 1 || u > u_max) throw std::out_of_range("SojournDensity: duration outside {1..u_max}");
    return pmf_table(state)[u - 1];
}

double SojournDensity::survival(std::size_t state, int u) const {
    if (u < 1 || u > u_max) throw std::out_of_range("SojournDensity: duration outside {1..u_max}");
    if (u == 1) return 1.0;
    const auto table = pmf_table(state);
    double tail = 0.0;
    for (int v = u; v <= u_max; ++v) tail += table[v - 1];
    return tail;
}

double SojournDensity::mean_duration(std::size_t state) const {
    const auto table = pmf_table(state);
    double mean = 0.0;
    for (int u = 1; u <= u_max; ++u) mean += u * table[u - 1];
    return mean;
}

}  // namespace regime::markov
