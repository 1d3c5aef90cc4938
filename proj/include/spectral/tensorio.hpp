#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spectral/tensor.hpp"

namespace spectral {

// NPY v1.0 subset: little-endian <f4 / <f8, C order, rank 2..4.

Tensor read_tensor(const std::filesystem::path& path);
void write_tensor(const std::filesystem::path& path, const Tensor& t);

/// Parses an in-memory NPY image; read_tensor is a thin wrapper around it.
Tensor parse_npy(const std::string& bytes);
std::string encode_npy(const Tensor& t);

enum class ItemKind { Image, Activation };

struct ManifestItem {
  std::filesystem::path path;  // relative, as written in the manifest
  ItemKind kind = ItemKind::Image;
  std::optional<std::uint32_t> layer;
  std::vector<std::size_t> shape;
};

struct DatasetManifest {
  int version = 1;
  std::filesystem::path root;  // directory containing the manifest
  std::vector<ManifestItem> items;

  std::filesystem::path resolve(const ManifestItem& item) const { return root / item.path; }
};

DatasetManifest load_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& m);

struct ItemFilter {
  std::optional<ItemKind> kind;
  std::optional<std::uint32_t> layer;
};

/// Loads every matching manifest item and flattens it into 2D maps. Each
/// item's on-disk shape must match the manifest entry.
std::vector<Tensor> load_maps(const DatasetManifest& m, const ItemFilter& filter = {});

}  // namespace spectral
