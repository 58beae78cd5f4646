// SPDX-License-Identifier: Apache-2.0
#include "ord/costmap.hpp"

#include <nlohmann/json.hpp>

#include "ord/errors.hpp"

namespace ord {

CostMappingTable CostMappingTable::defaults() {
  CostMappingTable t;
  t.table_[static_cast<int>(SemanticLabel::Void)] = CostLabel::Empty;
  t.table_[static_cast<int>(SemanticLabel::Grass)] = CostLabel::LowCost;
  t.table_[static_cast<int>(SemanticLabel::Tree)] = CostLabel::Lethal;
  t.table_[static_cast<int>(SemanticLabel::HardSurface)] = CostLabel::Free;
  t.table_[static_cast<int>(SemanticLabel::Object)] = CostLabel::Lethal;
  t.table_[static_cast<int>(SemanticLabel::Bush)] = CostLabel::MediumCost;
  t.table_[static_cast<int>(SemanticLabel::Water)] = CostLabel::Lethal;
  t.table_[static_cast<int>(SemanticLabel::Person)] = CostLabel::Lethal;
  t.table_[static_cast<int>(SemanticLabel::Mud)] = CostLabel::MediumCost;
  t.table_[static_cast<int>(SemanticLabel::Rubble)] = CostLabel::MediumCost;
  t.table_[static_cast<int>(SemanticLabel::Unknown)] = CostLabel::Unknown;
  return t;
}

CostMappingTable CostMappingTable::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("cost table must be a JSON object");
  CostMappingTable t;
  t.table_[static_cast<int>(SemanticLabel::Void)] = CostLabel::Empty;
  t.table_[static_cast<int>(SemanticLabel::Unknown)] = CostLabel::Unknown;

  std::array<bool, kSemanticClassCount> seen{};
  for (const auto& [key, value] : j.items()) {
    const auto sem = label_id(LabelSpace::Semantic, key);
    if (!sem) throw ConfigError("cost table: unknown semantic class '" + key + "'");
    if (*sem == static_cast<std::uint8_t>(SemanticLabel::Void) ||
        *sem == static_cast<std::uint8_t>(SemanticLabel::Unknown)) {
      throw ConfigError("cost table: '" + key + "' mapping is fixed and cannot be set");
    }
    if (!value.is_string()) {
      throw ConfigError("cost table: value for '" + key + "' must be a string");
    }
    const auto cost = label_id(LabelSpace::Cost, value.get<std::string>());
    if (!cost || *cost == static_cast<std::uint8_t>(CostLabel::Unknown) ||
        *cost == static_cast<std::uint8_t>(CostLabel::Empty)) {
      throw ConfigError("cost table: invalid cost level for '" + key + "'");
    }
    if (seen[*sem]) throw ConfigError("cost table: duplicate entry for '" + key + "'");
    seen[*sem] = true;
    t.table_[*sem] = static_cast<CostLabel>(*cost);
  }
  for (int id = 1; id < kSemanticClassCount - 1; ++id) {
    if (!seen[id]) {
      throw ConfigError(std::string("cost table: missing entry for '") +
                        label_name(LabelSpace::Semantic, static_cast<std::uint8_t>(id)) +
                        "'");
    }
  }
  return t;
}

nlohmann::json CostMappingTable::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (int id = 1; id < kSemanticClassCount - 1; ++id) {
    j[label_name(LabelSpace::Semantic, static_cast<std::uint8_t>(id))] =
        label_name(LabelSpace::Cost, static_cast<std::uint8_t>(table_[id]));
  }
  return j;
}

VoxelGrid map_semantics_to_cost(const VoxelGrid& semantic, const CostMappingTable& t) {
  if (semantic.space != LabelSpace::Semantic) {
    throw InputError("cost mapping needs a semantic grid");
  }
  VoxelGrid out(semantic.config, LabelSpace::Cost);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(semantic.labels.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out.labels[i] = static_cast<std::uint8_t>(t.map(semantic.labels[i]));
  }
  return out;
}

VoxelGrid apply_step_mask(const VoxelGrid& cost, const StepMask& mask,
                          const ElevationMap& map, double ground_band_m) {
  if (cost.space != LabelSpace::Cost) throw InputError("step mask applies to cost grids");
  const GridConfig& cfg = cost.config;
  if (mask.nx != cfg.dims[0] || mask.ny != cfg.dims[1] || map.nx != cfg.dims[0] ||
      map.ny != cfg.dims[1]) {
    throw InputError("step mask does not match the grid x/y lattice");
  }
  VoxelGrid out = cost;
  const double h = static_cast<double>(cfg.voxel_size);
  constexpr auto kEmpty = static_cast<std::uint8_t>(CostLabel::Empty);
  constexpr auto kUnknown = static_cast<std::uint8_t>(CostLabel::Unknown);
  constexpr auto kLethal = static_cast<std::uint8_t>(CostLabel::Lethal);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ixl = 0; ixl < cfg.dims[0]; ++ixl) {
    const int ix = static_cast<int>(ixl);
    for (int iy = 0; iy < cfg.dims[1]; ++iy) {
      if (!mask.is_masked(ix, iy) || !map.valid(ix, iy)) continue;
      const double ground = map.elevation[map.cell_index(ix, iy)];
      const double lo = ground - h;
      const double hi = ground + ground_band_m;
      for (int iz = 0; iz < cfg.dims[2]; ++iz) {
        const double zc = cfg.index_to_center(ix, iy, iz)[2];
        if (zc < lo || zc > hi) continue;
        std::uint8_t& label = out.at(ix, iy, iz);
        if (label != kEmpty && label != kUnknown) label = kLethal;
      }
    }
  }
  return out;
}

}  // namespace ord
