#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fastfix/gradcore/model.hpp"

namespace fastfix {

inline constexpr char kCheckpointMagic[4] = {'F', 'F', 'M', 'L'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

using NamedTensors = std::vector<std::pair<std::string, Tensor>>;

/// Layout: "FFML", u32 version, then until EOF one record per tensor:
/// u32 name length, name bytes, u32 rank, rank x u32 dims, f32 values.
/// All integers and floats little-endian. EMA shadows are stored under
/// "<name>.ema"; normalization running statistics under their buffer names.
void write_checkpoint(const std::filesystem::path& path, const NamedTensors& tensors);
NamedTensors read_checkpoint(const std::filesystem::path& path);

NamedTensors model_state(const Model& model);
/// Every tensor of the model must be present with a matching shape.
void load_model_state(Model& model, const NamedTensors& state);

void save_checkpoint(const std::filesystem::path& path, const Model& model);
void load_checkpoint(const std::filesystem::path& path, Model& model);

}  // namespace fastfix
