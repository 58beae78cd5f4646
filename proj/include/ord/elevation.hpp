// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "ord/cloud.hpp"
#include "ord/grid.hpp"

namespace ord {

/// 2.5D ground map over the grid's x/y lattice. A cell is valid iff at
/// least one ground-class point fell into it; its elevation is the mean of
/// the bucketed point heights. Buckets stay around until features are
/// computed, then can be released.
struct ElevationMap {
  int nx = 0;
  int ny = 0;
  float origin_x = 0.0f;
  float origin_y = 0.0f;
  float cell_size = 0.0f;

  std::vector<double> elevation;           // per cell, meaningful iff valid
  std::vector<std::uint32_t> point_count;  // per cell
  std::vector<std::vector<float>> bucket;  // per-cell ground z samples

  std::size_t cell_index(int ix, int iy) const {
    return static_cast<std::size_t>(ix) * ny + iy;
  }
  bool in_bounds(int ix, int iy) const {
    return ix >= 0 && ix < nx && iy >= 0 && iy < ny;
  }
  bool valid(int ix, int iy) const { return point_count[cell_index(ix, iy)] >= 1; }
  double cell_center_x(int ix) const {
    return static_cast<double>(origin_x) + (ix + 0.5) * static_cast<double>(cell_size);
  }
  double cell_center_y(int iy) const {
    return static_cast<double>(origin_y) + (iy + 0.5) * static_cast<double>(cell_size);
  }

  void release_buckets() {
    bucket.clear();
    bucket.shrink_to_fit();
  }
};

/// Buckets ground-class points by (x, y) cell and takes per-cell mean
/// heights. Points outside the x/y lattice are ignored; z is unrestricted.
ElevationMap build_elevation_map(const PointCloudFrame& cloud, const GridConfig& cfg,
                                 const SemanticLabelSet& ground_classes);

}  // namespace ord
