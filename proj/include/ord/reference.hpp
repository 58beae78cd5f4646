// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "ord/bki.hpp"
#include "ord/eval.hpp"
#include "ord/geomfeat.hpp"
#include "ord/ingest.hpp"

namespace ord::ref {

// Straightforward single-threaded implementations of the parallel kernels.
// They share contracts with the primary versions and exist so tests and the
// benchmark can cross-check and time them; keep them free of tuning.

VoxelGrid voxelize_semantic(const PointCloudFrame& cloud, const GridConfig& cfg);

GeomFeatures compute_features(const ElevationMap& map, const NeighborhoodSpec& nb);

/// Plain double loop over (voxel, observation) pairs, no spatial index.
DirichletGrid bki_update(const PointCloudFrame& obs, const GridConfig& cfg,
                         const BkiConfig& bk);

/// All-pairs nearest-neighbor scan.
std::vector<std::uint8_t> nn_assign(std::span<const std::size_t> occupied,
                                    const PointCloudFrame& obs, const GridConfig& cfg);

ConfusionMatrix confusion(const VoxelGrid& pred, const VoxelGrid& gt);

}  // namespace ord::ref
