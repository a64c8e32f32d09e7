#include "regime/markov/model.hpp"

#include <cmath>
#include <stdexcept>

namespace regime::markov {

std::string to_string(ModelKind kind) {
    return kind == ModelKind::PlainHmm ? "hmm" : "hsmm";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "hmm") return ModelKind::PlainHmm;
    if (name == "hsmm") return ModelKind::SemiMarkov;
    throw std::invalid_argument("unknown model kind: " + name);
}

void HsmmModel::validate() const {
    const std::size_t m = num_states();
    if (m < 1) throw std::invalid_argument("HsmmModel: no states");
    if (transition.rows() != m || transition.cols() != m)
        throw std::invalid_argument("HsmmModel: transition matrix shape mismatch");
    double pi_sum = 0.0;
    for (double p : initial) {
        if (p < 0.0) throw std::invalid_argument("HsmmModel: negative initial probability");
        pi_sum += p;
    }
    if (std::abs(pi_sum - 1.0) > 1e-9)
        throw std::invalid_argument("HsmmModel: initial distribution does not sum to 1");
    for (std::size_t i = 0; i < m; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (transition(i, j) < 0.0)
                throw std::invalid_argument("HsmmModel: negative transition probability");
            row_sum += transition(i, j);
        }
        // A 1-state semi-Markov chain has an empty transition row.
        if (m > 1 && std::abs(row_sum - 1.0) > 1e-9)
            throw std::invalid_argument("HsmmModel: transition row does not sum to 1");
        if (kind == ModelKind::SemiMarkov && m > 1 && transition(i, i) != 0.0)
            throw std::invalid_argument("HsmmModel: semi-Markov diagonal must be zero");
    }
    emission.validate();
    if (emission.num_states() != m)
        throw std::invalid_argument("HsmmModel: emission state count mismatch");
    if (kind == ModelKind::SemiMarkov) {
        sojourn.validate();
        if (sojourn.num_states() != m)
            throw std::invalid_argument("HsmmModel: sojourn state count mismatch");
    }
}

HsmmModel HsmmModel::permuted(const std::vector<std::size_t>& perm) const {
    const std::size_t m = num_states();
    if (perm.size() != m) throw std::invalid_argument("permuted: bad permutation length");
    HsmmModel out = *this;
    for (std::size_t i = 0; i < m; ++i) {
        out.initial[i] = initial[perm[i]];
        for (std::size_t j = 0; j < m; ++j)
            out.transition(i, j) = transition(perm[i], perm[j]);
        for (std::size_t l = 0; l < emission.num_components(); ++l) {
            out.emission.weights(i, l) = emission.weights(perm[i], l);
            out.emission.means(i, l) = emission.means(perm[i], l);
            out.emission.variances(i, l) = emission.variances(perm[i], l);
        }
        if (!sojourn.p1.empty()) out.sojourn.p1[i] = sojourn.p1[perm[i]];
        if (!sojourn.p2.empty()) out.sojourn.p2[i] = sojourn.p2[perm[i]];
        if (!sojourn.shift.empty()) out.sojourn.shift[i] = sojourn.shift[perm[i]];
    }
    return out;
}

std::size_t HsmmModel::num_free_parameters() const {
    const std::size_t m = num_states();
    const std::size_t k = emission.num_components();
    std::size_t n = m - 1;  // initial distribution
    n += (kind == ModelKind::SemiMarkov) ? m * (m >= 2 ? m - 2 : 0) : m * (m - 1);
    n += m * (k - 1);  // mixture weights
    n += 2 * m * k;    // means and variances
    if (kind == ModelKind::SemiMarkov) {
        switch (sojourn.family) {
            case SojournFamily::Geometric: n += m; break;
            case SojournFamily::Logarithmic:
            case SojournFamily::Gamma:
            case SojournFamily::Weibull: n += 2 * m; break;
        }
    }
    return n;
}

InformationCriteria information_criteria(const HsmmModel& model, double log_likelihood,
                                         std::size_t num_observations) {
    const double n_params = static_cast<double>(model.num_free_parameters());
    InformationCriteria out;
    out.aic = -2.0 * log_likelihood + 2.0 * n_params;
    out.bic = -2.0 * log_likelihood + n_params * std::log(static_cast<double>(num_observations));
    return out;
}

}  // namespace regime::markov
