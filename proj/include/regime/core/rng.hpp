#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace regime {

// All randomness in a run flows from one seed. Components draw from named
// substreams so that, e.g., re-running only the network training with the
// same seed reproduces it bit for bit regardless of what else ran before.
std::uint64_t substream_seed(std::uint64_t run_seed, std::string_view name);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t run_seed, std::string_view substream)
        : engine_(substream_seed(run_seed, substream)) {}

    std::mt19937_64& engine() { return engine_; }

    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    double normal(double mean = 0.0, double stddev = 1.0) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }
    // Draw from a discrete distribution given (unnormalized) weights.
    std::size_t categorical(const double* weights, std::size_t n);

private:
    std::mt19937_64 engine_;
};

}  // namespace regime
