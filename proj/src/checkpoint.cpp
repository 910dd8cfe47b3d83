#include "sg2caps/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "json.hpp"
#include "sg2caps/util.hpp"

namespace sg2caps::nn {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

void append_le_double(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

double read_le_double(const std::string& blob, std::size_t offset) {
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b)
    bits = (bits << 8) | static_cast<unsigned char>(blob[offset + static_cast<std::size_t>(b)]);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& stem,
                     const std::vector<const Parameter*>& params) {
  const std::filesystem::path manifest_path = stem.string() + ".json";
  const std::filesystem::path blob_path = stem.string() + ".bin";

  json manifest;
  manifest["format_version"] = kFormatVersion;
  manifest["blob"] = blob_path.filename().string();
  manifest["tensors"] = json::array();

  std::string blob;
  std::size_t offset = 0;
  for (const Parameter* p : params) {
    json entry;
    entry["name"] = p->name;
    entry["shape"] = p->value.shape;
    entry["offset"] = offset;
    entry["count"] = p->value.numel();
    manifest["tensors"].push_back(std::move(entry));
    for (double v : p->value.data) append_le_double(blob, v);
    offset += 8 * p->value.numel();
  }
  atomic_write_file(blob_path, blob);
  atomic_write_file(manifest_path, manifest.dump(2) + "\n");
}

void save_checkpoint(const std::filesystem::path& stem,
                     const std::vector<Parameter*>& params) {
  std::vector<const Parameter*> view(params.begin(), params.end());
  save_checkpoint(stem, view);
}

void load_checkpoint(const std::filesystem::path& stem,
                     const std::vector<Parameter*>& params) {
  const std::filesystem::path manifest_path = stem.string() + ".json";
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::parse_error& e) {
    throw NumericError("checkpoint manifest " + manifest_path.string() + ": " + e.what());
  }
  if (manifest.at("format_version").get<int>() != kFormatVersion)
    throw NumericError("unsupported checkpoint format version in " + manifest_path.string());

  const std::filesystem::path blob_path =
      manifest_path.parent_path() / manifest.at("blob").get<std::string>();
  const std::string blob = read_file(blob_path);

  const auto& tensors = manifest.at("tensors");
  if (tensors.size() != params.size())
    throw NumericError("checkpoint has " + std::to_string(tensors.size()) +
                       " tensors, model has " + std::to_string(params.size()));
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& entry = tensors[k];
    Parameter& p = *params[k];
    if (entry.at("name").get<std::string>() != p.name)
      throw NumericError("checkpoint tensor '" + entry.at("name").get<std::string>() +
                         "' does not match parameter '" + p.name + "'");
    const auto shape = entry.at("shape").get<std::vector<std::size_t>>();
    if (shape != p.value.shape)
      throw NumericError("checkpoint shape mismatch for parameter '" + p.name + "'");
    const std::size_t offset = entry.at("offset").get<std::size_t>();
    const std::size_t count = entry.at("count").get<std::size_t>();
    if (count != p.value.numel() || offset + 8 * count > blob.size())
      throw NumericError("checkpoint blob out of range for parameter '" + p.name + "'");
    for (std::size_t i = 0; i < count; ++i)
      p.value.data[i] = read_le_double(blob, offset + 8 * i);
    p.zero_grad();
  }
}

}  // namespace sg2caps::nn
