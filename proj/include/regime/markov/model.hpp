#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "regime/core/matrix.hpp"
#include "regime/markov/emission.hpp"
#include "regime/markov/sojourn.hpp"

namespace regime::markov {

// PlainHmm: geometric sojourns carried implicitly by the diagonal of A.
// SemiMarkov: explicit sojourn density, structurally zero diagonal.
enum class ModelKind { PlainHmm, SemiMarkov };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct HsmmModel {
    ModelKind kind = ModelKind::PlainHmm;
    Matrix transition;              // M x M, row-stochastic
    std::vector<double> initial;    // length M
    GmmEmission emission;
    SojournDensity sojourn;

    std::size_t num_states() const { return initial.size(); }

    // Checks all structural invariants (simplex rows within 1e-9, zero
    // diagonal for SemiMarkov, consistent shapes across members).
    void validate() const;

    // Relabels states by perm: new state i is old state perm[i].
    HsmmModel permuted(const std::vector<std::size_t>& perm) const;

    std::size_t num_free_parameters() const;
};

struct InformationCriteria {
    double aic = 0.0;
    double bic = 0.0;
};

InformationCriteria information_criteria(const HsmmModel& model, double log_likelihood,
                                         std::size_t num_observations);

}  // namespace regime::markov
