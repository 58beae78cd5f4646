// SPDX-License-Identifier: Apache-2.0
#include "ord/mobility.hpp"

#include <cmath>
#include <stdexcept>

#include "ord/errors.hpp"

namespace ord {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

/// Walks from (ix, iy) along (sx, sy) looking for a valid cell at least
/// `rim_height` above `zc`. Invalid cells count as part of the gap.
/// Returns the step count to the rim cell and its elevation, or steps = -1
/// when the row ends without a rim.
struct RimHit {
  int steps = -1;
  double elevation = 0.0;
};

RimHit find_rim(const ElevationMap& map, int ix, int iy, int sx, int sy,
                double zc, double rim_height) {
  int steps = 0;
  int jx = ix + sx;
  int jy = iy + sy;
  while (map.in_bounds(jx, jy)) {
    ++steps;
    if (map.valid(jx, jy)) {
      const double zj = map.elevation[map.cell_index(jx, jy)];
      if (zj - zc > rim_height) return {steps, zj};
    }
    jx += sx;
    jy += sy;
  }
  return {};
}

}  // namespace

void VehicleParams::validate() const {
  if (!(wheel_radius > 0.0)) throw ConfigError("wheel radius must be positive");
  if (!(wheelbase > 0.0)) throw ConfigError("wheelbase must be positive");
  if (!(cg_front_dist > 0.0) || !(cg_front_dist < wheelbase)) {
    throw ConfigError("front-axle-to-CG distance must lie in (0, wheelbase)");
  }
  if (!(friction > 0.0)) throw ConfigError("friction must be positive");
  if (!(lidar_height > 0.0)) throw ConfigError("sensor height must be positive");
  if (!(max_climb > 0.0) || !(max_climb < kHalfPi)) {
    throw ConfigError("max climbing angle must lie in (0, pi/2)");
  }
}

double max_step_height(const VehicleParams& v) {
  if (!(v.friction > 0.0)) {
    throw UndefinedConditionError("step-height condition undefined for zero friction");
  }
  const double mu = v.friction;
  const double rl = v.wheel_radius / v.wheelbase;
  const double al = v.cg_front_dist / v.wheelbase;
  const double eta = (1.0 - mu * rl - (1.0 + mu * mu) * al) / mu;
  const double radicand = 1.0 - 2.0 * mu * rl + eta * eta;
  if (radicand < 0.0) {
    throw InfeasibleGeometryError("step-height radicand negative for this geometry");
  }
  const double h_over_r = (1.0 - mu * rl + eta * eta - eta * std::sqrt(radicand)) /
                          ((1.0 + mu * rl) * (1.0 + mu * rl) + eta * eta);
  return v.wheel_radius * h_over_r;
}

double max_trench_width(double h_over_d, double wheel_diameter) {
  if (!(h_over_d >= 0.0) || !(h_over_d <= 1.0)) {
    throw std::domain_error("h/D must lie in [0, 1]");
  }
  return wheel_diameter * 2.0 * std::sqrt(h_over_d - h_over_d * h_over_d);
}

bool overhang_passable(double h_obj, double h_pc, const VehicleParams& v) {
  return h_obj > h_pc + v.lidar_height;
}

bool slope_passable(double alpha, const VehicleParams& v) {
  return v.max_climb > alpha;
}

StepMask compute_step_mask(const GeomFeatures& features, const ElevationMap& map,
                           const VehicleParams& v, const VoxelGrid* semantic,
                           const SemanticLabelSet& ground_classes,
                           StepMaskStats* stats) {
  if (features.nx != map.nx || features.ny != map.ny) {
    throw InputError("feature grid does not match elevation map dims");
  }
  if (semantic &&
      (semantic->config.dims[0] != map.nx || semantic->config.dims[1] != map.ny)) {
    throw InputError("semantic grid does not match elevation map lattice");
  }
  v.validate();
  const double h_max = max_step_height(v);
  const double diameter = v.wheel_diameter();
  const double cell = static_cast<double>(map.cell_size);

  StepMask mask;
  mask.nx = map.nx;
  mask.ny = map.ny;
  mask.masked.assign(static_cast<std::size_t>(map.nx) * map.ny, 0);

  std::size_t n_feat = 0, n_step = 0, n_slope = 0, n_trench = 0, n_over = 0,
              n_masked = 0;

#pragma omp parallel for schedule(dynamic, 8) \
    reduction(+ : n_feat, n_step, n_slope, n_trench, n_over, n_masked)
  for (std::ptrdiff_t ixl = 0; ixl < map.nx; ++ixl) {
    const int ix = static_cast<int>(ixl);
    for (int iy = 0; iy < map.ny; ++iy) {
      const std::size_t ci = map.cell_index(ix, iy);
      if (!features.valid[ci]) continue;
      ++n_feat;
      const double zc = map.elevation[ci];
      bool fail = false;

      if (features.step[ci] > h_max) {
        ++n_step;
        fail = true;
      }
      if (!slope_passable(features.slope[ci], v)) {
        ++n_slope;
        fail = true;
      }

      // Trench: a depressed cell with rims on both ends of an axis whose
      // gap is wider than the wheel can span for that depth.
      {
        double min_extent = -1.0;
        double depth = 0.0;
        const int axes[2][2] = {{1, 0}, {0, 1}};
        for (const auto& axis : axes) {
          const RimHit lo = find_rim(map, ix, iy, -axis[0], -axis[1], zc, h_max);
          if (lo.steps < 0) continue;
          const RimHit hi = find_rim(map, ix, iy, axis[0], axis[1], zc, h_max);
          if (hi.steps < 0) continue;
          // non-rim cells between the two rims, in meters
          const double extent = (lo.steps + hi.steps - 1) * cell;
          if (min_extent < 0.0 || extent < min_extent) {
            min_extent = extent;
            depth = std::min(lo.elevation, hi.elevation) - zc;
          }
        }
        if (min_extent >= 0.0) {
          const double ratio = std::clamp(depth / diameter, 0.0, 1.0);
          if (min_extent > max_trench_width(ratio, diameter)) {
            ++n_trench;
            fail = true;
          }
        }
      }

      // Overhead clearance: the lowest occupied non-ground voxel above the
      // ground elevation must clear the sensor height (h_pc = 0).
      if (semantic) {
        const GridConfig& cfg = semantic->config;
        double h_obj = -1.0;
        for (int iz = 0; iz < cfg.dims[2]; ++iz) {
          const std::uint8_t id = semantic->at(ix, iy, iz);
          if (id == empty_id(semantic->space) || id == unknown_id(semantic->space)) {
            continue;
          }
          if (ground_classes.contains(id)) continue;
          const double z_center = cfg.index_to_center(ix, iy, iz)[2];
          if (z_center <= zc) continue;
          h_obj = z_center - zc;
          break;
        }
        if (h_obj >= 0.0 && !overhang_passable(h_obj, 0.0, v)) {
          ++n_over;
          fail = true;
        }
      }

      if (fail) {
        mask.masked[ci] = 1;
        ++n_masked;
      }
    }
  }

  if (stats) {
    stats->cells_with_features = n_feat;
    stats->masked_step = n_step;
    stats->masked_slope = n_slope;
    stats->masked_trench = n_trench;
    stats->masked_overhang = n_over;
    stats->masked_total = n_masked;
  }
  return mask;
}

}  // namespace ord
