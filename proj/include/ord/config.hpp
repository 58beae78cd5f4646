// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include <nlohmann/json_fwd.hpp>

#include "ord/bki.hpp"
#include "ord/costmap.hpp"
#include "ord/geomfeat.hpp"
#include "ord/ingest.hpp"
#include "ord/mobility.hpp"

namespace ord {

/// Everything the pipeline commands need, loadable from one JSON file.
/// Loading is atomic: any invalid field raises ConfigError and nothing is
/// partially applied.
struct PipelineConfig {
  GridConfig grid;
  NeighborhoodSpec neighborhood;
  VehicleParams vehicle;
  CostMappingTable cost_table = CostMappingTable::defaults();
  BkiConfig bki;
  IngestOptions ingest = IngestOptions::identity();
  SemanticLabelSet ground_classes;  // default: grass, hard-surface, mud, rubble
  int frame_window = 30;            // frames around the key frame
  bool invert_poses = false;
  double ground_band_m = 1.0;

  PipelineConfig();

  void validate() const;

  /// Fully resolved echo for manifests and reproducibility.
  nlohmann::json to_json() const;
};

PipelineConfig load_pipeline_config(const std::filesystem::path& path);
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);

}  // namespace ord
