#pragma once

#include <string>

#include "regime/markov/model.hpp"

namespace regime::markov {

// Versioned JSON model document. Doubles are emitted with shortest
// round-trip representation, so save/load is bit-faithful.
std::string to_json(const HsmmModel& model);
HsmmModel model_from_json(const std::string& text);

void save_model(const HsmmModel& model, const std::string& path);
HsmmModel load_model(const std::string& path);

}  // namespace regime::markov
