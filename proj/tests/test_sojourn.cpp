#include <doctest.h>

#include <cmath>

#include "regime/core/rng.hpp"
#include "regime/markov/sojourn.hpp"

using regime::Rng;
using regime::markov::SojournDensity;
using regime::markov::SojournFamily;

namespace {

SojournDensity make(SojournFamily family, double p1, double p2 = 0.0, int shift = 1,
                    int u_max = 288) {
    SojournDensity d;
    d.family = family;
    d.u_max = u_max;
    d.p1 = {p1};
    if (family == SojournFamily::Gamma || family == SojournFamily::Weibull) d.p2 = {p2};
    if (family == SojournFamily::Logarithmic) d.shift = {shift};
    return d;
}

}  // namespace

TEST_CASE("geometric pmf uses the u-1 convention") {
    auto d = make(SojournFamily::Geometric, 0.5);
    CHECK(d.raw_pmf(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.raw_pmf(0, 2) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("log-series pmf at the shift origin") {
    auto d = make(SojournFamily::Logarithmic, 0.5);
    CHECK(d.raw_pmf(0, 1) == doctest::Approx(0.5 / std::log(2.0)).epsilon(1e-12));
    // below the shifted support the mass is zero
    auto shifted = make(SojournFamily::Logarithmic, 0.5, 0.0, 3);
    CHECK(shifted.raw_pmf(0, 1) == 0.0);
    CHECK(shifted.raw_pmf(0, 2) == 0.0);
    CHECK(shifted.raw_pmf(0, 3) == doctest::Approx(0.5 / std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("geometric survival tail") {
    auto d = make(SojournFamily::Geometric, 0.5);
    CHECK(d.survival(0, 1) == 1.0);
    CHECK(d.survival(0, 2) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(d.survival(0, d.u_max) == doctest::Approx(d.pmf(0, d.u_max)).epsilon(1e-12));
}

TEST_CASE("every family normalizes and has monotone survival") {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        SojournDensity d;
        const int which = static_cast<int>(rng.index(4));
        const int u_max = 2 + static_cast<int>(rng.index(40));
        switch (which) {
            case 0: d = make(SojournFamily::Geometric, rng.uniform(0.05, 0.95), 0, 1, u_max); break;
            case 1:
                d = make(SojournFamily::Logarithmic, rng.uniform(0.05, 0.95), 0,
                         1 + static_cast<int>(rng.index(3)), u_max);
                break;
            case 2:
                d = make(SojournFamily::Gamma, rng.uniform(0.3, 5.0), rng.uniform(0.3, 5.0), 1,
                         u_max);
                break;
            default:
                d = make(SojournFamily::Weibull, rng.uniform(0.3, 5.0), rng.uniform(0.3, 5.0), 1,
                         u_max);
                break;
        }
        if (d.family == SojournFamily::Logarithmic && d.shift[0] > d.u_max) continue;
        auto table = d.pmf_table(0);
        double sum = 0.0;
        for (double v : table) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(d.survival(0, 1) == 1.0);
        double prev = 1.0 + 1e-12;
        for (int u = 1; u <= d.u_max; ++u) {
            const double s = d.survival(0, u);
            CHECK(s <= prev + 1e-12);
            prev = s;
        }
    }
}

TEST_CASE("gamma discretization matches the continuous cdf") {
    auto d = make(SojournFamily::Gamma, 1.0, 2.0);  // exponential, scale 2
    const double f1 = 1.0 - std::exp(-0.5);
    CHECK(d.raw_pmf(0, 1) == doctest::Approx(f1).epsilon(1e-10));
}

TEST_CASE("duration bounds are enforced") {
    auto d = make(SojournFamily::Geometric, 0.5, 0.0, 1, 10);
    CHECK_THROWS(d.pmf(0, 0));
    CHECK_THROWS(d.pmf(0, 11));
    CHECK_THROWS(d.survival(0, 0));
    CHECK_THROWS(d.raw_pmf(1, 1));
}
