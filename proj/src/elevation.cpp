// SPDX-License-Identifier: Apache-2.0
#include "ord/elevation.hpp"

#include <cmath>

#include "ord/errors.hpp"

namespace ord {

ElevationMap build_elevation_map(const PointCloudFrame& cloud, const GridConfig& cfg,
                                 const SemanticLabelSet& ground_classes) {
  if (!cloud.has_labels()) throw InputError("elevation map needs a labeled cloud");
  cfg.validate();

  ElevationMap map;
  map.nx = cfg.dims[0];
  map.ny = cfg.dims[1];
  map.origin_x = cfg.origin[0];
  map.origin_y = cfg.origin[1];
  map.cell_size = cfg.voxel_size;
  const std::size_t n_cells = static_cast<std::size_t>(map.nx) * map.ny;
  map.elevation.assign(n_cells, 0.0);
  map.point_count.assign(n_cells, 0);
  map.bucket.assign(n_cells, {});

  // Bucket fill stays serial: it is a single cheap pass and fixes the
  // per-cell sample order, which keeps the mean deterministic.
  const double inv_h = 1.0 / static_cast<double>(cfg.voxel_size);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!ground_classes.contains(cloud.labels[i])) continue;
    const Point& p = cloud.points[i];
    const double qx = (p.x - static_cast<double>(map.origin_x)) * inv_h;
    const double qy = (p.y - static_cast<double>(map.origin_y)) * inv_h;
    const int ix = static_cast<int>(std::floor(qx + GridConfig::kIndexSnap));
    const int iy = static_cast<int>(std::floor(qy + GridConfig::kIndexSnap));
    if (!map.in_bounds(ix, iy)) continue;
    map.bucket[map.cell_index(ix, iy)].push_back(p.z);
  }

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_cells); ++c) {
    const auto& zs = map.bucket[static_cast<std::size_t>(c)];
    if (zs.empty()) continue;
    double sum = 0.0;
    for (const float z : zs) sum += z;
    map.elevation[static_cast<std::size_t>(c)] = sum / static_cast<double>(zs.size());
    map.point_count[static_cast<std::size_t>(c)] = static_cast<std::uint32_t>(zs.size());
  }
  return map;
}

}  // namespace ord
