#pragma once

#include <cstdint>
#include <string>

#include "regime/neural/network.hpp"

namespace regime::forecast {

enum class ArchKind { Baseline, SHybrid, CHybrid };

std::string to_string(ArchKind kind);
ArchKind arch_from_string(const std::string& name);

// Baseline and S-Hybrid share one recurrent stack of 20/20/10 units and a
// 10/10/6/2 dense head whose two terminal units are averaged to the scalar
// prediction; they differ only in the first-layer input width (1 vs M).
// C-Hybrid runs two 20/10 branches (fluctuations and state probabilities),
// concatenates the final hidden states, and feeds a 10/6/6/1 head.
struct ArchitectureSpec {
    ArchKind kind = ArchKind::Baseline;
    std::size_t num_states = 0;  // M of the regime model; 0 for Baseline
    std::size_t window = 12;

    void validate() const;
};

neural::NetworkGraph build(const ArchitectureSpec& spec, std::uint64_t run_seed);

// Same layer plan at half the units (for fast tests).
neural::NetworkGraph build_reduced(const ArchitectureSpec& spec, std::uint64_t run_seed);

}  // namespace regime::forecast
