// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <limits>
#include <span>
#include <vector>

#include "ord/cloud.hpp"
#include "ord/grid.hpp"

namespace ord {

enum class CompletionMode { KernelArgmax, KernelOccupancyThenNn };

/// Disables the per-voxel nearest-observation cap.
inline constexpr int kNoNeighborCap = std::numeric_limits<int>::max();

/// Kernel-inference parameters. `metric` is the covariance S of the
/// anisotropic kernel; it must be symmetric positive definite.
struct BkiConfig {
  Eigen::Matrix3d metric =
      (Eigen::Vector3d(0.09, 0.09, 0.04)).asDiagonal();  // m^2, tighter vertically
  double prior_alpha = 0.001;
  double support_radius = 1.0;  // m, Euclidean truncation of the kernel
  int neighbor_cap = 8;         // at most this many nearest observations per voxel
  double occupancy_threshold = 0.1;  // kernel-mass units
  CompletionMode mode = CompletionMode::KernelOccupancyThenNn;

  /// Throws ConfigError when the metric is not SPD or a scalar is out of
  /// range. Call at load; kernel evaluation never re-validates.
  void validate() const;
};

/// exp(-d_M^2 / 2) with d_M the Mahalanobis distance under S. Symmetric,
/// K(x, x) = 1, and 0 < K <= 1 for finite inputs.
double kernel(const Eigen::Vector3d& x, const Eigen::Vector3d& x2,
              const Eigen::Matrix3d& S);

/// Per-voxel Dirichlet concentrations over the ten storable semantic
/// classes (void..rubble). Stored as accumulated kernel mass; alpha is
/// prior + mass.
class DirichletGrid {
 public:
  static constexpr int kNumClasses = 10;

  DirichletGrid() = default;
  DirichletGrid(const GridConfig& cfg, double prior_alpha);

  const GridConfig& config() const { return config_; }
  double prior() const { return prior_; }

  double mass(std::size_t voxel, int cls) const {
    return mass_[voxel * kNumClasses + cls];
  }
  double& mass(std::size_t voxel, int cls) {
    return mass_[voxel * kNumClasses + cls];
  }
  double alpha(std::size_t voxel, int cls) const { return prior_ + mass(voxel, cls); }

  /// Total accumulated kernel mass, i.e. sum_c alpha_c - C * prior.
  double total_mass(std::size_t voxel) const;

  /// Occupied class of largest mass, ties to the smallest id; -1 when the
  /// voxel holds no mass at all.
  int argmax_class(std::size_t voxel) const;

 private:
  GridConfig config_;
  double prior_ = 0.0;
  std::vector<double> mass_;
};

/// Fresh posterior from one observation batch:
/// alpha_c(x*) = prior + sum of K(x*, x_i) over observations of class c
/// within the support radius (at most neighbor_cap nearest ones).
/// Deterministic for any thread count.
DirichletGrid bki_update(const PointCloudFrame& obs, const GridConfig& cfg,
                         const BkiConfig& bk);

/// Adds a batch into an existing posterior; bki_update is accumulate onto a
/// prior-only grid.
void bki_accumulate(DirichletGrid& grid, const PointCloudFrame& obs,
                    const BkiConfig& bk);

/// Voxels whose total mass exceeds the threshold take their argmax class;
/// the rest stay void.
VoxelGrid classify(const DirichletGrid& grid, double occupancy_threshold);

/// Voxel indices (into the linearized grid) whose total mass exceeds the
/// threshold.
std::vector<std::size_t> occupied_voxels(const DirichletGrid& grid,
                                         double occupancy_threshold);

/// Labels each listed voxel with the class of the observation nearest to
/// its center; distance ties go to the smallest input ordinal. Throws
/// InputError on an empty observation set.
std::vector<std::uint8_t> nn_assign(std::span<const std::size_t> occupied,
                                    const PointCloudFrame& obs,
                                    const GridConfig& cfg);

/// Full densification pipeline in the configured mode.
VoxelGrid complete_scene(const PointCloudFrame& obs, const GridConfig& cfg,
                         const BkiConfig& bk);

}  // namespace ord
