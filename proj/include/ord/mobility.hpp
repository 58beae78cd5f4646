// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "ord/geomfeat.hpp"
#include "ord/grid.hpp"

namespace ord {

/// Vehicle geometry and capability. The wheel diameter is derived, never
/// stored, so D = 2r holds exactly.
struct VehicleParams {
  double wheel_radius = 0.4;    // r, m
  double wheelbase = 2.0;       // l, m
  double cg_front_dist = 1.0;   // a, horizontal front axle -> CG, m
  double friction = 0.6;        // mu
  double lidar_height = 2.0;    // sensor height above ground, m
  double max_climb = 0.5235987755982988;  // theta_max, rad (30 deg)

  double wheel_diameter() const { return 2.0 * wheel_radius; }
  void validate() const;  // throws ConfigError
};

/// Tallest vertical step the front wheels can climb, in meters.
/// Throws UndefinedConditionError when friction is zero and
/// InfeasibleGeometryError when the radicand goes negative.
double max_step_height(const VehicleParams& v);

/// Widest crossable trench for a given step-height ratio h/D, in meters.
/// Throws std::domain_error for h_over_d outside [0, 1].
double max_trench_width(double h_over_d, double wheel_diameter);

/// True when the clearance under an overhanging obstacle admits the
/// vehicle: h_obj > h_pc + lidar_height, strict.
bool overhang_passable(double h_obj, double h_pc, const VehicleParams& v);

/// True when the terrain slope is within the climbing limit, strict.
bool slope_passable(double alpha, const VehicleParams& v);

/// 2D boolean field over the elevation lattice; true marks a
/// geometric-passability failure.
struct StepMask {
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> masked;

  std::size_t cell_index(int ix, int iy) const {
    return static_cast<std::size_t>(ix) * ny + iy;
  }
  bool is_masked(int ix, int iy) const { return masked[cell_index(ix, iy)] != 0; }
};

struct StepMaskStats {
  std::size_t cells_with_features = 0;
  std::size_t masked_step = 0;
  std::size_t masked_slope = 0;
  std::size_t masked_trench = 0;
  std::size_t masked_overhang = 0;
  std::size_t masked_total = 0;
};

/// Evaluates the four obstacle-crossing failure conditions per cell:
/// step height, slope, trench crossing, and overhead clearance. Cells
/// without valid features stay unmasked. The semantic grid feeds the
/// overhead-clearance scan; pass nullptr to skip that condition.
StepMask compute_step_mask(const GeomFeatures& features, const ElevationMap& map,
                           const VehicleParams& v,
                           const VoxelGrid* semantic = nullptr,
                           const SemanticLabelSet& ground_classes = {},
                           StepMaskStats* stats = nullptr);

}  // namespace ord
