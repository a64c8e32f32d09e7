#pragma once

#include <string>

#include "regime/forecast/ar_hmm.hpp"
#include "regime/forecast/arch.hpp"
#include "regime/forecast/train.hpp"

namespace regime::forecast {

// A trained network with the architecture that built it and its training record.
struct Checkpoint {
    ArchitectureSpec spec;
    neural::NetworkGraph net;
    TrainRun run;
};

std::string to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

std::string to_json(const ArHmmModel& model);
ArHmmModel ar_hmm_from_json(const std::string& text);

void save_ar_hmm(const ArHmmModel& model, const std::string& path);
ArHmmModel load_ar_hmm(const std::string& path);

}  // namespace regime::forecast
