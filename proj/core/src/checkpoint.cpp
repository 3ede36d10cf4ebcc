#include "fastfix/gradcore/checkpoint.hpp"

#include <fstream>
#include <map>

#include "fastfix/error.hpp"
#include "fastfix/util/binary_io.hpp"

namespace fastfix {

void write_checkpoint(const std::filesystem::path& path, const NamedTensors& tensors) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out.write(kCheckpointMagic, 4);
  binary::put_u32(out, kCheckpointVersion);
  for (const auto& [name, t] : tensors) {
    binary::put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    binary::put_u32(out, static_cast<std::uint32_t>(t.rank()));
    for (const auto d : t.shape()) binary::put_u32(out, static_cast<std::uint32_t>(d));
    for (const float v : t.data()) binary::put_f32(out, v);
  }
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

NamedTensors read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint '" + path.string() + "'");
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw DataError("'" + path.string() + "' is not a checkpoint (bad magic)");
  }
  const auto version = binary::get_u32(in);
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  NamedTensors out;
  std::uint32_t name_len = 0;
  while (binary::try_get_u32(in, name_len)) {
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (static_cast<std::uint32_t>(in.gcount()) != name_len) throw DataError("truncated name");
    const auto rank = binary::get_u32(in);
    Shape shape(rank);
    for (auto& d : shape) d = binary::get_u32(in);
    std::vector<float> data(shape_numel(shape));
    for (auto& v : data) v = binary::get_f32(in);
    out.emplace_back(std::move(name), Tensor(std::move(shape), std::move(data)));
  }
  return out;
}

NamedTensors model_state(const Model& model) {
  NamedTensors out;
  for (const auto& p : model.parameters()) out.emplace_back(p.name, p.value);
  for (const auto& p : model.parameters()) out.emplace_back(p.name + ".ema", p.ema);
  for (const auto& b : model.buffers()) out.emplace_back(b.name, b.value);
  return out;
}

void load_model_state(Model& model, const NamedTensors& state) {
  std::map<std::string, const Tensor*> by_name;
  for (const auto& [name, t] : state) by_name[name] = &t;
  auto take = [&](const std::string& name, Tensor& dst) {
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw DataError("checkpoint lacks tensor '" + name + "'");
    if (it->second->shape() != dst.shape()) {
      throw ShapeError(name, "checkpoint shape " + shape_str(it->second->shape()) +
                                 " vs model " + shape_str(dst.shape()));
    }
    dst = *it->second;
  };
  for (auto& p : model.parameters()) {
    take(p.name, p.value);
    take(p.name + ".ema", p.ema);
  }
  for (auto& b : model.buffers()) take(b.name, b.value);
}

void save_checkpoint(const std::filesystem::path& path, const Model& model) {
  write_checkpoint(path, model_state(model));
}

void load_checkpoint(const std::filesystem::path& path, Model& model) {
  load_model_state(model, read_checkpoint(path));
}

}  // namespace fastfix
