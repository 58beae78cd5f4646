// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace ord {

enum class LabelSpace : std::uint8_t { Semantic = 0, Cost = 1 };

/// The ten semantic categories plus a mask sentinel. `Void` doubles as the
/// empty label c0 of semantic grids; `Unknown` marks voxels outside the
/// evaluation mask (e.g. outside the camera field of view) and is excluded
/// from all metrics.
enum class SemanticLabel : std::uint8_t {
  Void = 0,
  Grass = 1,
  Tree = 2,
  HardSurface = 3,
  Object = 4,
  Bush = 5,
  Water = 6,
  Person = 7,
  Mud = 8,
  Rubble = 9,
  Unknown = 10,
};

/// Traversability cost levels, ordered by severity: Empty < Free < LowCost
/// < MediumCost < Lethal. `Unknown` is the mask sentinel, outside the order.
enum class CostLabel : std::uint8_t {
  Empty = 0,
  Free = 1,
  LowCost = 2,
  MediumCost = 3,
  Lethal = 4,
  Unknown = 5,
};

inline constexpr int kSemanticClassCount = 11;  // ids 0..10, Unknown included
inline constexpr int kCostClassCount = 6;       // ids 0..5, Unknown included

int class_count(LabelSpace space);
std::uint8_t unknown_id(LabelSpace space);
std::uint8_t empty_id(LabelSpace space);  // c0 of the space (void / empty)
const char* label_name(LabelSpace space, std::uint8_t id);
std::optional<std::uint8_t> label_id(LabelSpace space, std::string_view name);

/// A set of semantic classes, e.g. the ground classes used for elevation
/// mapping.
struct SemanticLabelSet {
  std::array<bool, kSemanticClassCount> member{};

  bool contains(std::uint8_t id) const {
    return id < kSemanticClassCount && member[id];
  }
  bool contains(SemanticLabel l) const {
    return contains(static_cast<std::uint8_t>(l));
  }
  void insert(SemanticLabel l) { member[static_cast<std::uint8_t>(l)] = true; }
};

/// Geometry of the dense voxel lattice. World extents are half-open
/// per axis: [origin, origin + dims * voxel_size).
///
/// Origin and voxel size are stored in single precision so that a grid
/// written to disk reads back field-identical. Index math runs in double
/// with a small boundary snap (kIndexSnap, in cell units) so that points
/// on nominal cell boundaries land in the cell they bound.
struct GridConfig {
  std::array<float, 3> origin{0.0f, -25.6f, -2.0f};
  std::array<int, 3> dims{192, 256, 40};
  float voxel_size = 0.2f;

  static constexpr double kIndexSnap = 1e-5;

  /// Throws ConfigError unless voxel_size > 0 and every dim >= 1.
  void validate() const;

  std::size_t num_voxels() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }

  // x-major, then y, then z
  std::size_t linear_index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * dims[1] + iy) * dims[2] + iz;
  }

  bool in_bounds(int ix, int iy, int iz) const {
    return ix >= 0 && ix < dims[0] && iy >= 0 && iy < dims[1] && iz >= 0 &&
           iz < dims[2];
  }

  /// Floor((p - origin) / voxel_size) per axis; absent when the point lies
  /// outside the half-open world box.
  std::optional<std::array<int, 3>> world_to_index(double px, double py,
                                                   double pz) const;

  /// Center of cell i: origin + (i + 0.5) * voxel_size. Throws
  /// std::out_of_range for indices outside dims.
  std::array<double, 3> index_to_center(int ix, int iy, int iz) const;

  bool operator==(const GridConfig&) const = default;
};

/// Dense grid of per-voxel label ids over a GridConfig lattice.
/// Immutable after construction for all readers; construction and mutation
/// are single-writer.
struct VoxelGrid {
  GridConfig config;
  LabelSpace space = LabelSpace::Semantic;
  std::vector<std::uint8_t> labels;  // length = config.num_voxels()

  VoxelGrid() = default;
  VoxelGrid(const GridConfig& cfg, LabelSpace sp, std::uint8_t fill = 0);

  std::uint8_t at(int ix, int iy, int iz) const {
    return labels[config.linear_index(ix, iy, iz)];
  }
  std::uint8_t& at(int ix, int iy, int iz) {
    return labels[config.linear_index(ix, iy, iz)];
  }

  bool operator==(const VoxelGrid&) const = default;
};

}  // namespace ord
