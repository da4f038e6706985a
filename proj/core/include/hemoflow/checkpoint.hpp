#pragma once

#include <filesystem>

#include "hemoflow/train.hpp"

namespace hemoflow {

/// Versioned JSON checkpoint: layer sizes, parameters, inverse parameters,
/// Adam state, epoch counter, and the characteristic scales. Doubles are
/// stored with 17 significant digits, so reload is bit-exact.
void save_checkpoint(const TrainResult &state,
                     const std::filesystem::path &path);

TrainResult load_checkpoint(const std::filesystem::path &path);

} // namespace hemoflow
