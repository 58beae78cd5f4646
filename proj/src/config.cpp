// SPDX-License-Identifier: Apache-2.0
#include "ord/config.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ord/errors.hpp"

namespace ord {

namespace {

constexpr double kDegToRad = 0.017453292519943295;

double get_num(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    throw ConfigError(std::string("config field '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

CompletionMode parse_mode(const std::string& s) {
  if (s == "kernel-argmax") return CompletionMode::KernelArgmax;
  if (s == "kernel-occupancy-then-nn") return CompletionMode::KernelOccupancyThenNn;
  throw ConfigError("bki mode must be 'kernel-argmax' or 'kernel-occupancy-then-nn'");
}

const char* mode_name(CompletionMode m) {
  return m == CompletionMode::KernelArgmax ? "kernel-argmax"
                                           : "kernel-occupancy-then-nn";
}

GridConfig parse_grid(const nlohmann::json& j, GridConfig base) {
  if (j.contains("origin")) {
    const auto o = j.at("origin").get<std::vector<double>>();
    if (o.size() != 3) throw ConfigError("grid origin needs 3 entries");
    for (int a = 0; a < 3; ++a) base.origin[a] = static_cast<float>(o[a]);
  }
  if (j.contains("dims")) {
    const auto d = j.at("dims").get<std::vector<int>>();
    if (d.size() != 3) throw ConfigError("grid dims needs 3 entries");
    for (int a = 0; a < 3; ++a) base.dims[a] = d[a];
  }
  base.voxel_size = static_cast<float>(get_num(j, "voxel_size", base.voxel_size));
  return base;
}

VehicleParams parse_vehicle(const nlohmann::json& j, VehicleParams base) {
  base.wheel_radius = get_num(j, "wheel_radius_m", base.wheel_radius);
  base.wheelbase = get_num(j, "wheelbase_m", base.wheelbase);
  base.cg_front_dist = get_num(j, "cg_front_dist_m", base.cg_front_dist);
  base.friction = get_num(j, "friction", base.friction);
  base.lidar_height = get_num(j, "lidar_height_m", base.lidar_height);
  if (j.contains("max_climb_deg")) {
    base.max_climb = get_num(j, "max_climb_deg", 0.0) * kDegToRad;
  }
  return base;
}

BkiConfig parse_bki(const nlohmann::json& j, BkiConfig base) {
  if (j.contains("S")) {
    const auto rows = j.at("S");
    if (!rows.is_array() || rows.size() != 3) {
      throw ConfigError("bki S must be a 3x3 matrix");
    }
    for (int r = 0; r < 3; ++r) {
      const auto row = rows.at(r).get<std::vector<double>>();
      if (row.size() != 3) throw ConfigError("bki S must be a 3x3 matrix");
      for (int c = 0; c < 3; ++c) base.metric(r, c) = row[c];
    }
  }
  base.prior_alpha = get_num(j, "prior_alpha", base.prior_alpha);
  base.support_radius = get_num(j, "support_radius_m", base.support_radius);
  if (j.contains("k")) {
    if (!j.at("k").is_number_integer()) throw ConfigError("bki k must be an integer");
    base.neighbor_cap = j.at("k").get<int>();
  }
  base.occupancy_threshold = get_num(j, "occupancy_threshold", base.occupancy_threshold);
  if (j.contains("mode")) base.mode = parse_mode(j.at("mode").get<std::string>());
  return base;
}

}  // namespace

PipelineConfig::PipelineConfig() {
  ground_classes.insert(SemanticLabel::Grass);
  ground_classes.insert(SemanticLabel::HardSurface);
  ground_classes.insert(SemanticLabel::Mud);
  ground_classes.insert(SemanticLabel::Rubble);
}

void PipelineConfig::validate() const {
  grid.validate();
  neighborhood.validate(grid.voxel_size);
  vehicle.validate();
  bki.validate();
  if (frame_window < 1) throw ConfigError("frame_window must be >= 1");
  if (!(ground_band_m > 0.0)) throw ConfigError("ground_band_m must be positive");
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json j;
  j["grid"] = {{"origin", {grid.origin[0], grid.origin[1], grid.origin[2]}},
               {"dims", {grid.dims[0], grid.dims[1], grid.dims[2]}},
               {"voxel_size", grid.voxel_size}};
  j["neighborhood"] = {{"radius_m", neighborhood.radius},
                       {"min_valid_cells", neighborhood.min_valid_cells}};
  j["vehicle"] = {{"wheel_radius_m", vehicle.wheel_radius},
                  {"wheelbase_m", vehicle.wheelbase},
                  {"cg_front_dist_m", vehicle.cg_front_dist},
                  {"friction", vehicle.friction},
                  {"lidar_height_m", vehicle.lidar_height},
                  {"max_climb_deg", vehicle.max_climb / kDegToRad}};
  j["cost_table"] = cost_table.to_json();
  nlohmann::json s = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    s.push_back({bki.metric(r, 0), bki.metric(r, 1), bki.metric(r, 2)});
  }
  j["bki"] = {{"S", s},
              {"prior_alpha", bki.prior_alpha},
              {"support_radius_m", bki.support_radius},
              {"k", bki.neighbor_cap},
              {"occupancy_threshold", bki.occupancy_threshold},
              {"mode", mode_name(bki.mode)}};
  nlohmann::json ground = nlohmann::json::array();
  for (int id = 0; id < kSemanticClassCount; ++id) {
    if (ground_classes.contains(static_cast<std::uint8_t>(id))) {
      ground.push_back(label_name(LabelSpace::Semantic, static_cast<std::uint8_t>(id)));
    }
  }
  j["ingest"] = {{"frame_window", frame_window},
                 {"invert_poses", invert_poses},
                 {"ground_classes", ground},
                 {"strict_labels", ingest.strict_labels}};
  j["ground_band_m"] = ground_band_m;
  return j;
}

PipelineConfig pipeline_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  PipelineConfig cfg;
  try {
    if (j.contains("grid")) cfg.grid = parse_grid(j.at("grid"), cfg.grid);
    if (j.contains("neighborhood")) {
      const auto& n = j.at("neighborhood");
      cfg.neighborhood.radius = get_num(n, "radius_m", cfg.neighborhood.radius);
      if (n.contains("min_valid_cells")) {
        cfg.neighborhood.min_valid_cells = n.at("min_valid_cells").get<int>();
      }
    }
    if (j.contains("vehicle")) cfg.vehicle = parse_vehicle(j.at("vehicle"), cfg.vehicle);
    if (j.contains("cost_table")) {
      cfg.cost_table = CostMappingTable::from_json(j.at("cost_table"));
    }
    if (j.contains("bki")) cfg.bki = parse_bki(j.at("bki"), cfg.bki);
    if (j.contains("ingest")) {
      const auto& in = j.at("ingest");
      if (in.contains("frame_window")) cfg.frame_window = in.at("frame_window").get<int>();
      if (in.contains("invert_poses")) cfg.invert_poses = in.at("invert_poses").get<bool>();
      if (in.contains("strict_labels")) {
        cfg.ingest.strict_labels = in.at("strict_labels").get<bool>();
      }
      if (in.contains("ground_classes")) {
        SemanticLabelSet set;
        for (const auto& name : in.at("ground_classes")) {
          const auto id = label_id(LabelSpace::Semantic, name.get<std::string>());
          if (!id) {
            throw ConfigError("unknown ground class '" + name.get<std::string>() + "'");
          }
          set.member[*id] = true;
        }
        cfg.ground_classes = set;
      }
      if (in.contains("label_map")) {
        std::unordered_map<std::uint16_t, SemanticLabel> map;
        for (const auto& [raw, name] : in.at("label_map").items()) {
          const auto id = label_id(LabelSpace::Semantic, name.get<std::string>());
          if (!id || *id >= 10) {
            throw ConfigError("label_map target must be a storable semantic class");
          }
          map.emplace(static_cast<std::uint16_t>(std::stoul(raw)),
                      static_cast<SemanticLabel>(*id));
        }
        cfg.ingest.label_map = std::move(map);
      }
    }
    cfg.ground_band_m = get_num(j, "ground_band_m", cfg.ground_band_m);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config JSON parse error: " + std::string(e.what()));
  }
  return pipeline_config_from_json(j);
}

}  // namespace ord
