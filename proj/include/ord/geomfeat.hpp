// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "ord/elevation.hpp"

namespace ord {

/// Circular cell neighborhood: all cells whose center lies within `radius`
/// of the query cell's center (the query cell included).
struct NeighborhoodSpec {
  double radius = 0.6;      // m
  int min_valid_cells = 3;  // below this a plane fit is under-determined

  /// Throws ConfigError unless radius covers at least one cell width and
  /// min_valid_cells >= 3.
  void validate(double cell_size) const;
};

/// Plane z = a0*x + a1*y + c with unit normal (n_z >= 0) and the vertical
/// mean-square residual over the fitted cells.
struct PlaneFit {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double a0 = 0.0;
  double a1 = 0.0;
  double c = 0.0;
  double residual_mse = 0.0;
};

/// Per-cell terrain features. Values are meaningful only where valid.
struct GeomFeatures {
  int nx = 0;
  int ny = 0;
  std::vector<double> step;        // m
  std::vector<double> slope;       // rad, in [0, pi/2]
  std::vector<double> unevenness;  // log m^2
  std::vector<std::uint8_t> valid;

  std::size_t cell_index(int ix, int iy) const {
    return static_cast<std::size_t>(ix) * ny + iy;
  }
};

/// Residual floor inside the unevenness log; keeps perfect planes finite.
inline constexpr double kUnevennessFloor = 1e-6;

/// Integer (dx, dy) offsets of the circular neighborhood, (0, 0) included.
std::vector<std::pair<int, int>> neighborhood_offsets(double radius, double cell_size);

/// Largest absolute elevation difference to any valid neighbor; absent when
/// the center is invalid or no valid neighbor exists.
std::optional<double> step_height(const ElevationMap& map, int ix, int iy,
                                  const NeighborhoodSpec& nb);

/// Total-least-squares plane over the valid cells of the neighborhood:
/// normal is the covariance eigenvector with the smallest eigenvalue,
/// flipped upward. Absent when fewer than min_valid_cells are valid, the
/// two smallest eigenvalues coincide (rank-deficient), or the plane is
/// vertical and has no z(x, y) form.
std::optional<PlaneFit> fit_plane(const ElevationMap& map, int ix, int iy,
                                  const NeighborhoodSpec& nb);

/// Angle between the fitted plane normal and +Z.
std::optional<double> slope(const ElevationMap& map, int ix, int iy,
                            const NeighborhoodSpec& nb);

/// Natural log of the plane-fit residual MSE, floored at kUnevennessFloor.
std::optional<double> unevenness(const ElevationMap& map, int ix, int iy,
                                 const NeighborhoodSpec& nb);

/// All three features over every cell; parallel over cells.
GeomFeatures compute_features(const ElevationMap& map, const NeighborhoodSpec& nb);

/// Debug CSV: x_index, y_index, elevation, step, slope, unevenness, valid.
void write_features_csv(const GeomFeatures& features, const ElevationMap& map,
                        std::ostream& out);

}  // namespace ord
