#pragma once

#include <filesystem>
#include <vector>

#include "sg2caps/tensor.hpp"

namespace sg2caps::nn {

// Checkpoint = <stem>.json manifest (names, shapes, byte offsets, format
// version) + <stem>.bin, one flat blob of little-endian 64-bit reals.
// Round-trips are bit-exact.
void save_checkpoint(const std::filesystem::path& stem,
                     const std::vector<const Parameter*>& params);
void save_checkpoint(const std::filesystem::path& stem,
                     const std::vector<Parameter*>& params);

// Loads into the given parameters; names and shapes must match exactly.
void load_checkpoint(const std::filesystem::path& stem,
                     const std::vector<Parameter*>& params);

}  // namespace sg2caps::nn
