// SPDX-License-Identifier: Apache-2.0
#include "ord/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "ord/errors.hpp"

namespace ord {

namespace {

constexpr const char* kSemanticNames[kSemanticClassCount] = {
    "void", "grass",  "tree",   "hard-surface", "object", "bush",
    "water", "person", "mud", "rubble", "unknown"};

constexpr const char* kCostNames[kCostClassCount] = {
    "empty", "free", "low_cost", "medium_cost", "lethal", "unknown"};

}  // namespace

int class_count(LabelSpace space) {
  return space == LabelSpace::Semantic ? kSemanticClassCount : kCostClassCount;
}

std::uint8_t unknown_id(LabelSpace space) {
  return space == LabelSpace::Semantic
             ? static_cast<std::uint8_t>(SemanticLabel::Unknown)
             : static_cast<std::uint8_t>(CostLabel::Unknown);
}

std::uint8_t empty_id(LabelSpace) { return 0; }

const char* label_name(LabelSpace space, std::uint8_t id) {
  if (id >= class_count(space)) return "invalid";
  return space == LabelSpace::Semantic ? kSemanticNames[id] : kCostNames[id];
}

std::optional<std::uint8_t> label_id(LabelSpace space, std::string_view name) {
  const int n = class_count(space);
  for (int i = 0; i < n; ++i) {
    if (name == label_name(space, static_cast<std::uint8_t>(i))) {
      return static_cast<std::uint8_t>(i);
    }
  }
  return std::nullopt;
}

void GridConfig::validate() const {
  if (!(voxel_size > 0.0f) || !std::isfinite(voxel_size)) {
    throw ConfigError("grid voxel_size must be positive and finite");
  }
  for (int a = 0; a < 3; ++a) {
    if (dims[a] < 1) throw ConfigError("grid dims must all be >= 1");
    if (!std::isfinite(origin[a])) throw ConfigError("grid origin must be finite");
  }
}

std::optional<std::array<int, 3>> GridConfig::world_to_index(double px,
                                                             double py,
                                                             double pz) const {
  const double p[3] = {px, py, pz};
  std::array<int, 3> idx{};
  for (int a = 0; a < 3; ++a) {
    const double q =
        (p[a] - static_cast<double>(origin[a])) / static_cast<double>(voxel_size);
    const int i = static_cast<int>(std::floor(q + kIndexSnap));
    if (i < 0 || i >= dims[a]) return std::nullopt;
    idx[a] = i;
  }
  return idx;
}

std::array<double, 3> GridConfig::index_to_center(int ix, int iy,
                                                  int iz) const {
  if (!in_bounds(ix, iy, iz)) {
    throw std::out_of_range("grid index outside dims");
  }
  const double h = static_cast<double>(voxel_size);
  return {static_cast<double>(origin[0]) + (ix + 0.5) * h,
          static_cast<double>(origin[1]) + (iy + 0.5) * h,
          static_cast<double>(origin[2]) + (iz + 0.5) * h};
}

VoxelGrid::VoxelGrid(const GridConfig& cfg, LabelSpace sp, std::uint8_t fill)
    : config(cfg), space(sp) {
  cfg.validate();
  if (fill >= class_count(sp)) throw ConfigError("fill label outside label space");
  labels.assign(cfg.num_voxels(), fill);
}

}  // namespace ord
