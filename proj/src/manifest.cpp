#include <fstream>
#include <string>

#include <json.hpp>

#include "spectral/errors.hpp"
#include "spectral/serialize.hpp"
#include "spectral/tensorio.hpp"

namespace spectral {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ManifestItem parse_item(const json& j, std::size_t index, const fs::path& root) {
  const std::string where = "manifest item " + std::to_string(index);
  if (!j.is_object()) throw ManifestError(where + " is not an object");

  ManifestItem item;
  if (!j.contains("path") || !j["path"].is_string()) throw ManifestError(where + ": missing string 'path'");
  item.path = j["path"].get<std::string>();
  if (item.path.is_absolute()) throw ManifestError(where + ": path must be relative: " + item.path.string());

  const std::string kind = j.value("kind", std::string{});
  if (kind == "image") {
    item.kind = ItemKind::Image;
  } else if (kind == "activation") {
    item.kind = ItemKind::Activation;
  } else {
    throw ManifestError(where + ": kind must be \"image\" or \"activation\"");
  }

  if (j.contains("layer") && !j["layer"].is_null()) {
    if (!j["layer"].is_number_unsigned()) throw ManifestError(where + ": layer must be a non-negative integer");
    item.layer = j["layer"].get<std::uint32_t>();
  }
  if (item.layer.has_value() != (item.kind == ItemKind::Activation)) {
    throw ManifestError(where + ": layer must be present exactly for activation items");
  }

  if (!j.contains("shape") || !j["shape"].is_array()) throw ManifestError(where + ": missing 'shape' list");
  for (const auto& d : j["shape"]) {
    if (!d.is_number_unsigned() || d.get<std::size_t>() == 0) {
      throw ManifestError(where + ": shape entries must be positive integers");
    }
    item.shape.push_back(d.get<std::size_t>());
  }

  if (!fs::exists(root / item.path)) {
    throw ManifestError(where + ": file not found: " + item.path.string());
  }
  return item;
}

}  // namespace

DatasetManifest load_manifest(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ManifestError(path.string() + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ManifestError(path.string() + ": manifest must be a JSON object");
  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    throw ManifestError(path.string() + ": missing integer 'version'");
  }

  DatasetManifest m;
  m.version = doc["version"].get<int>();
  if (m.version != 1) throw VersionError("unsupported manifest version " + std::to_string(m.version));
  m.root = path.parent_path();

  const json items = doc.value("items", json::array());
  if (!items.is_array()) throw ManifestError(path.string() + ": 'items' must be a list");
  for (std::size_t i = 0; i < items.size(); ++i) m.items.push_back(parse_item(items[i], i, m.root));
  return m;
}

void write_manifest(const fs::path& path, const DatasetManifest& m) {
  nlohmann::ordered_json doc;
  doc["version"] = m.version;
  doc["items"] = nlohmann::ordered_json::array();
  for (const auto& item : m.items) {
    nlohmann::ordered_json j;
    j["path"] = item.path.generic_string();
    j["kind"] = item.kind == ItemKind::Image ? "image" : "activation";
    if (item.layer) j["layer"] = *item.layer;
    j["shape"] = item.shape;
    doc["items"].push_back(std::move(j));
  }
  write_file_atomic(path, doc.dump(2) + "\n");
}

std::vector<Tensor> load_maps(const DatasetManifest& m, const ItemFilter& filter) {
  std::vector<Tensor> maps;
  for (const auto& item : m.items) {
    if (filter.kind && item.kind != *filter.kind) continue;
    if (filter.layer && item.layer != filter.layer) continue;
    Tensor t = read_tensor(m.resolve(item));
    if (t.shape() != item.shape) {
      throw ManifestError(item.path.string() + ": file shape does not match the manifest entry");
    }
    for (auto& map : spatial_maps(t)) maps.push_back(std::move(map));
  }
  return maps;
}

}  // namespace spectral
