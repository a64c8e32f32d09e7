#include "regime/markov/emission.hpp"

#include <cmath>
#include <stdexcept>

#include "regime/core/numeric.hpp"

namespace regime::markov {

void GmmEmission::validate() const {
    if (!weights.same_shape(means) || !weights.same_shape(variances))
        throw std::invalid_argument("GmmEmission: parameter tables disagree in shape");
    if (num_states() == 0 || num_components() == 0)
        throw std::invalid_argument("GmmEmission: empty parameter tables");
    for (std::size_t j = 0; j < num_states(); ++j) {
        double sum = 0.0;
        for (std::size_t l = 0; l < num_components(); ++l) {
            const double w = weights(j, l);
            if (w < 0.0) throw std::invalid_argument("GmmEmission: negative mixture weight");
            if (variances(j, l) <= 0.0)
                throw std::invalid_argument("GmmEmission: non-positive variance");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("GmmEmission: weight row does not sum to 1");
    }
}

std::vector<double> GmmEmission::component_log_joint(std::size_t state, double x) const {
    if (state >= num_states()) throw std::out_of_range("GmmEmission: state index");
    std::vector<double> out(num_components());
    for (std::size_t l = 0; l < num_components(); ++l) {
        const double w = weights(state, l);
        out[l] = (w > 0.0 ? std::log(w) + log_normal_pdf(x, means(state, l), variances(state, l))
                          : kNegInf);
    }
    return out;
}

double GmmEmission::log_density(std::size_t state, double x) const {
    return log_sum_exp(component_log_joint(state, x));
}

double GmmEmission::density(std::size_t state, double x) const {
    return std::exp(log_density(state, x));
}

}  // namespace regime::markov
