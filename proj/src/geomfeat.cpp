// SPDX-License-Identifier: Apache-2.0
#include "ord/geomfeat.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <ostream>

#include "ord/errors.hpp"

namespace ord {

namespace {

constexpr double kEigenTie = 1e-12;
constexpr double kVerticalNz = 1e-12;

struct CellSample {
  double x, y, z;
};

std::vector<CellSample> gather_valid(const ElevationMap& map, int ix, int iy,
                                     const std::vector<std::pair<int, int>>& offsets) {
  std::vector<CellSample> cells;
  cells.reserve(offsets.size());
  for (const auto& [dx, dy] : offsets) {
    const int jx = ix + dx;
    const int jy = iy + dy;
    if (!map.in_bounds(jx, jy) || !map.valid(jx, jy)) continue;
    cells.push_back({map.cell_center_x(jx), map.cell_center_y(jy),
                     map.elevation[map.cell_index(jx, jy)]});
  }
  return cells;
}

std::optional<PlaneFit> fit_cells(const std::vector<CellSample>& cells,
                                  int min_valid_cells) {
  const int m = static_cast<int>(cells.size());
  if (m < min_valid_cells) return std::nullopt;

  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& c : cells) mean += Eigen::Vector3d(c.x, c.y, c.z);
  mean /= m;

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& c : cells) {
    const Eigen::Vector3d d = Eigen::Vector3d(c.x, c.y, c.z) - mean;
    cov += d * d.transpose();
  }
  cov /= m;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  if (eig.info() != Eigen::Success) return std::nullopt;
  const Eigen::Vector3d& vals = eig.eigenvalues();  // ascending
  if (vals(1) - vals(0) <= kEigenTie) return std::nullopt;  // rank-deficient

  Eigen::Vector3d n = eig.eigenvectors().col(0);
  if (n.z() < 0.0) n = -n;
  if (n.z() < kVerticalNz) return std::nullopt;  // no z(x, y) form

  PlaneFit fit;
  fit.normal = n;
  fit.a0 = -n.x() / n.z();
  fit.a1 = -n.y() / n.z();
  fit.c = mean.z() + (n.x() * mean.x() + n.y() * mean.y()) / n.z();

  double sq = 0.0;
  for (const auto& c : cells) {
    const double r = c.z - (fit.a0 * c.x + fit.a1 * c.y + fit.c);
    sq += r * r;
  }
  fit.residual_mse = sq / m;
  return fit;
}

}  // namespace

void NeighborhoodSpec::validate(double cell_size) const {
  if (!(radius >= cell_size)) {
    throw ConfigError("neighborhood radius must cover at least one cell width");
  }
  if (min_valid_cells < 3) {
    throw ConfigError("neighborhood min_valid_cells must be >= 3");
  }
}

std::vector<std::pair<int, int>> neighborhood_offsets(double radius,
                                                      double cell_size) {
  const double ratio = radius / cell_size;
  const double r2 = ratio * ratio * (1.0 + 1e-9) + 1e-9;
  const int reach = static_cast<int>(std::floor(ratio + 1e-6));
  std::vector<std::pair<int, int>> offsets;
  for (int dx = -reach; dx <= reach; ++dx) {
    for (int dy = -reach; dy <= reach; ++dy) {
      if (dx * dx + dy * dy <= r2) offsets.emplace_back(dx, dy);
    }
  }
  return offsets;
}

std::optional<double> step_height(const ElevationMap& map, int ix, int iy,
                                  const NeighborhoodSpec& nb) {
  if (!map.in_bounds(ix, iy) || !map.valid(ix, iy)) return std::nullopt;
  const auto offsets = neighborhood_offsets(nb.radius, map.cell_size);
  const double zc = map.elevation[map.cell_index(ix, iy)];
  double best = -1.0;
  for (const auto& [dx, dy] : offsets) {
    if (dx == 0 && dy == 0) continue;
    const int jx = ix + dx;
    const int jy = iy + dy;
    if (!map.in_bounds(jx, jy) || !map.valid(jx, jy)) continue;
    best = std::max(best, std::abs(zc - map.elevation[map.cell_index(jx, jy)]));
  }
  if (best < 0.0) return std::nullopt;  // no valid neighbor
  return best;
}

std::optional<PlaneFit> fit_plane(const ElevationMap& map, int ix, int iy,
                                  const NeighborhoodSpec& nb) {
  if (!map.in_bounds(ix, iy)) return std::nullopt;
  const auto offsets = neighborhood_offsets(nb.radius, map.cell_size);
  return fit_cells(gather_valid(map, ix, iy, offsets), nb.min_valid_cells);
}

std::optional<double> slope(const ElevationMap& map, int ix, int iy,
                            const NeighborhoodSpec& nb) {
  const auto fit = fit_plane(map, ix, iy, nb);
  if (!fit) return std::nullopt;
  const double nz = std::clamp(fit->normal.z(), -1.0, 1.0);
  return std::acos(nz);
}

std::optional<double> unevenness(const ElevationMap& map, int ix, int iy,
                                 const NeighborhoodSpec& nb) {
  const auto fit = fit_plane(map, ix, iy, nb);
  if (!fit) return std::nullopt;
  return std::log(fit->residual_mse + kUnevennessFloor);
}

GeomFeatures compute_features(const ElevationMap& map, const NeighborhoodSpec& nb) {
  nb.validate(map.cell_size);
  const auto offsets = neighborhood_offsets(nb.radius, map.cell_size);

  GeomFeatures out;
  out.nx = map.nx;
  out.ny = map.ny;
  const std::size_t n = static_cast<std::size_t>(map.nx) * map.ny;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.step.assign(n, nan);
  out.slope.assign(n, nan);
  out.unevenness.assign(n, nan);
  out.valid.assign(n, 0);

#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t ix = 0; ix < map.nx; ++ix) {
    for (int iy = 0; iy < map.ny; ++iy) {
      const std::size_t ci = map.cell_index(static_cast<int>(ix), iy);
      if (!map.valid(static_cast<int>(ix), iy)) continue;

      const double zc = map.elevation[ci];
      double step = -1.0;
      const auto cells = gather_valid(map, static_cast<int>(ix), iy, offsets);
      for (const auto& cell : cells) {
        step = std::max(step, std::abs(zc - cell.z));
      }
      // cells includes the center, so a lone cell has only |zc - zc| = 0;
      // require a real neighbor
      if (cells.size() < 2) continue;

      const auto fit = fit_cells(cells, nb.min_valid_cells);
      if (!fit) continue;

      out.step[ci] = step;
      out.slope[ci] = std::acos(std::clamp(fit->normal.z(), -1.0, 1.0));
      out.unevenness[ci] = std::log(fit->residual_mse + kUnevennessFloor);
      out.valid[ci] = 1;
    }
  }
  return out;
}

void write_features_csv(const GeomFeatures& features, const ElevationMap& map,
                        std::ostream& out) {
  out << "x_index,y_index,elevation,step_m,slope_rad,unevenness_log,valid\n";
  for (int ix = 0; ix < features.nx; ++ix) {
    for (int iy = 0; iy < features.ny; ++iy) {
      const std::size_t ci = features.cell_index(ix, iy);
      out << ix << ',' << iy << ',';
      if (map.valid(ix, iy)) {
        out << map.elevation[ci];
      } else {
        out << "nan";
      }
      out << ',' << features.step[ci] << ',' << features.slope[ci] << ','
          << features.unevenness[ci] << ',' << static_cast<int>(features.valid[ci])
          << '\n';
    }
  }
}

}  // namespace ord
