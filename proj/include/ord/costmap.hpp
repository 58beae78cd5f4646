// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include <nlohmann/json_fwd.hpp>

#include "ord/elevation.hpp"
#include "ord/grid.hpp"
#include "ord/mobility.hpp"

namespace ord {

/// Total semantic -> cost mapping. void -> empty and unknown -> unknown are
/// fixed; every other class must have exactly one entry.
class CostMappingTable {
 public:
  /// hard-surface free; grass low; bush/mud/rubble medium; tree, object,
  /// person, water lethal.
  static CostMappingTable defaults();

  /// Parses { "grass": "low_cost", ... }. Throws ConfigError unless every
  /// mappable class is covered exactly once; void/unknown keys are rejected.
  static CostMappingTable from_json(const nlohmann::json& j);

  CostLabel map(SemanticLabel label) const {
    return table_[static_cast<std::uint8_t>(label)];
  }
  CostLabel map(std::uint8_t id) const { return table_[id]; }

  nlohmann::json to_json() const;

 private:
  std::array<CostLabel, kSemanticClassCount> table_{};
};

/// Pointwise table lookup; empty and unknown preserved.
VoxelGrid map_semantics_to_cost(const VoxelGrid& semantic, const CostMappingTable& t);

/// In every masked column, occupied voxels within the ground band — from
/// one voxel below the ground elevation up to `ground_band_m` above it —
/// become lethal. Everything else is unchanged.
VoxelGrid apply_step_mask(const VoxelGrid& cost, const StepMask& mask,
                          const ElevationMap& map, double ground_band_m = 1.0);

}  // namespace ord
