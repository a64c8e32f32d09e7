#include "regime/neural/adadelta.hpp"

#include <cmath>
#include <stdexcept>

namespace regime::neural {

void adadelta_update(double& param, double grad, double& eg2, double& edx2,
                     const AdadeltaConfig& cfg) {
    eg2 = cfg.rho * eg2 + (1.0 - cfg.rho) * grad * grad;
    const double dx = -std::sqrt(edx2 + cfg.epsilon) / std::sqrt(eg2 + cfg.epsilon) * grad;
    edx2 = cfg.rho * edx2 + (1.0 - cfg.rho) * dx * dx;
    param += cfg.learning_rate * dx;
}

void adadelta_step(AdadeltaState& state, NetworkGraph& net, const NetworkGraph& grads) {
    auto p = parameter_spans(net);
    auto g = parameter_spans(grads);
    auto e1 = parameter_spans(state.eg2);
    auto e2 = parameter_spans(state.edx2);
    if (p.size() != g.size() || p.size() != e1.size() || p.size() != e2.size())
        throw std::invalid_argument("adadelta_step: topology mismatch");
    for (std::size_t s = 0; s < p.size(); ++s) {
        if (p[s]->size() != g[s]->size())
            throw std::invalid_argument("adadelta_step: span size mismatch");
        for (std::size_t j = 0; j < p[s]->size(); ++j)
            adadelta_update((*p[s])[j], (*g[s])[j], (*e1[s])[j], (*e2[s])[j], state.cfg);
    }
}

}  // namespace regime::neural
