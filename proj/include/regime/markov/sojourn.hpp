#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace regime::markov {

enum class SojournFamily { Geometric, Logarithmic, Gamma, Weibull };

std::string to_string(SojournFamily family);
SojournFamily sojourn_family_from_string(const std::string& name);

// Per-state sojourn duration distribution, discretized on {1, ..., u_max}
// and renormalized. Parameter layout by family:
//   Geometric:    p1 = self-stay probability a_jj in (0,1)
//   Logarithmic:  p1 = series parameter p in (0,1), shift = integer s >= 1
//   Gamma:        p1 = shape > 0, p2 = scale > 0
//   Weibull:      p1 = shape > 0, p2 = scale > 0
struct SojournDensity {
    SojournFamily family = SojournFamily::Geometric;
    int u_max = 288;
    std::vector<double> p1;
    std::vector<double> p2;
    std::vector<int> shift;

    std::size_t num_states() const { return p1.size(); }
    void validate() const;

    // Family pmf before truncation/renormalization. For the continuous
    // families this is already the discretized mass F(u) - F(u-1).
    double raw_pmf(std::size_t state, int u) const;

    // Renormalized pmf d_j(u) on {1..u_max}.
    double pmf(std::size_t state, int u) const;

    // Survival D_j(u) = sum_{v>=u} d_j(v); D_j(1) = 1 exactly.
    double survival(std::size_t state, int u) const;

    // Full table, index u-1; sums to 1.
    std::vector<double> pmf_table(std::size_t state) const;

    double mean_duration(std::size_t state) const;
};

// Regularized lower incomplete gamma P(a, x); used by the gamma family and
// exposed for tests.
double gamma_cdf_regularized(double a, double x);

}  // namespace regime::markov
