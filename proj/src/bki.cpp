// SPDX-License-Identifier: Apache-2.0
#include "ord/bki.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ord/errors.hpp"

namespace ord {

namespace {

// Uniform spatial hash over observation indices. Bucket contents stay in
// input (ordinal) order.
class SpatialHash {
 public:
  SpatialHash(const PointCloudFrame& obs, double cell) : cell_(cell) {
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const std::int64_t cx = coord(obs.points[i].x);
      const std::int64_t cy = coord(obs.points[i].y);
      const std::int64_t cz = coord(obs.points[i].z);
      if (i == 0) {
        min_cell_ = {cx, cy, cz};
        max_cell_ = {cx, cy, cz};
      } else {
        min_cell_ = {std::min(min_cell_[0], cx), std::min(min_cell_[1], cy),
                     std::min(min_cell_[2], cz)};
        max_cell_ = {std::max(max_cell_[0], cx), std::max(max_cell_[1], cy),
                     std::max(max_cell_[2], cz)};
      }
      buckets_[pack(cx, cy, cz)].push_back(i);
    }
  }

  /// Chebyshev ring radius that is guaranteed to reach every bucket from
  /// the given cell.
  std::int64_t max_ring_from(std::int64_t cx, std::int64_t cy, std::int64_t cz) const {
    std::int64_t r = 0;
    const std::int64_t c[3] = {cx, cy, cz};
    for (int a = 0; a < 3; ++a) {
      r = std::max({r, std::llabs(c[a] - min_cell_[a]), std::llabs(c[a] - max_cell_[a])});
    }
    return r;
  }

  template <typename Fn>
  void for_each_in_neighborhood(double px, double py, double pz, Fn&& fn) const {
    const std::int64_t cx = coord(px), cy = coord(py), cz = coord(pz);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          const auto it = buckets_.find(pack(cx + dx, cy + dy, cz + dz));
          if (it == buckets_.end()) continue;
          for (const std::size_t i : it->second) fn(i);
        }
      }
    }
  }

  /// Visits every bucket on the Chebyshev shell of radius r around a cell.
  template <typename Fn>
  void for_each_in_ring(std::int64_t cx, std::int64_t cy, std::int64_t cz,
                        std::int64_t r, Fn&& fn) const {
    const auto visit = [&](std::int64_t x, std::int64_t y, std::int64_t z) {
      const auto it = buckets_.find(pack(x, y, z));
      if (it == buckets_.end()) return;
      for (const std::size_t i : it->second) fn(i);
    };
    if (r == 0) {
      visit(cx, cy, cz);
      return;
    }
    for (std::int64_t dx = -r; dx <= r; ++dx) {
      for (std::int64_t dy = -r; dy <= r; ++dy) {
        if (std::max(std::llabs(dx), std::llabs(dy)) == r) {
          for (std::int64_t dz = -r; dz <= r; ++dz) visit(cx + dx, cy + dy, cz + dz);
        } else {
          visit(cx + dx, cy + dy, cz - r);
          visit(cx + dx, cy + dy, cz + r);
        }
      }
    }
  }

  std::int64_t coord(double v) const {
    const double q = std::floor(v / cell_);
    // clamp so packing stays valid for absurd coordinates
    return static_cast<std::int64_t>(std::clamp(q, -1048575.0, 1048575.0));
  }

 private:
  static std::uint64_t pack(std::int64_t x, std::int64_t y, std::int64_t z) {
    constexpr std::int64_t kBias = 1 << 20;
    return (static_cast<std::uint64_t>(x + kBias) << 42) |
           (static_cast<std::uint64_t>(y + kBias) << 21) |
           static_cast<std::uint64_t>(z + kBias);
  }

  double cell_;
  std::array<std::int64_t, 3> min_cell_{};
  std::array<std::int64_t, 3> max_cell_{};
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

struct Candidate {
  std::size_t ordinal;
  double dist2;
};

}  // namespace

void BkiConfig::validate() const {
  if ((metric - metric.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("kernel metric S must be symmetric");
  }
  Eigen::LLT<Eigen::Matrix3d> llt(metric);
  if (llt.info() != Eigen::Success) {
    throw ConfigError("kernel metric S must be positive definite");
  }
  if (!(prior_alpha > 0.0)) throw ConfigError("prior_alpha must be positive");
  if (!(support_radius > 0.0)) throw ConfigError("support_radius must be positive");
  if (neighbor_cap < 1) throw ConfigError("neighbor cap k must be >= 1");
  if (!(occupancy_threshold >= 0.0)) {
    throw ConfigError("occupancy threshold must be non-negative");
  }
}

double kernel(const Eigen::Vector3d& x, const Eigen::Vector3d& x2,
              const Eigen::Matrix3d& S) {
  const Eigen::Vector3d d = x - x2;
  const double d2 = d.dot(Eigen::LLT<Eigen::Matrix3d>(S).solve(d));
  return std::exp(-0.5 * d2);
}

DirichletGrid::DirichletGrid(const GridConfig& cfg, double prior_alpha)
    : config_(cfg), prior_(prior_alpha) {
  cfg.validate();
  mass_.assign(cfg.num_voxels() * kNumClasses, 0.0);
}

double DirichletGrid::total_mass(std::size_t voxel) const {
  double sum = 0.0;
  for (int c = 0; c < kNumClasses; ++c) sum += mass(voxel, c);
  return sum;
}

int DirichletGrid::argmax_class(std::size_t voxel) const {
  int best = -1;
  double best_mass = 0.0;
  for (int c = 0; c < kNumClasses; ++c) {
    const double m = mass(voxel, c);
    if (m > best_mass) {
      best_mass = m;
      best = c;
    }
  }
  return best;
}

void bki_accumulate(DirichletGrid& grid, const PointCloudFrame& obs,
                    const BkiConfig& bk) {
  bk.validate();
  if (!obs.has_labels() || obs.labels.size() != obs.points.size()) {
    throw InputError("BKI observations need one label per point");
  }
  for (const std::uint8_t l : obs.labels) {
    if (l == 0 || l >= DirichletGrid::kNumClasses) {
      throw InputError("BKI observations must carry non-void semantic labels");
    }
  }
  if (obs.points.empty()) return;

  const GridConfig& cfg = grid.config();
  const Eigen::Matrix3d s_inv = bk.metric.inverse();
  const double radius2 = bk.support_radius * bk.support_radius;
  const SpatialHash hash(obs, bk.support_radius);

#pragma omp parallel
  {
    std::vector<Candidate> cand;
#pragma omp for schedule(dynamic, 256) collapse(2)
    for (int ix = 0; ix < cfg.dims[0]; ++ix) {
      for (int iy = 0; iy < cfg.dims[1]; ++iy) {
        for (int iz = 0; iz < cfg.dims[2]; ++iz) {
          const auto center = cfg.index_to_center(ix, iy, iz);
          const Eigen::Vector3d x(center[0], center[1], center[2]);

          cand.clear();
          hash.for_each_in_neighborhood(x.x(), x.y(), x.z(), [&](std::size_t i) {
            const Point& p = obs.points[i];
            const double dx = p.x - x.x(), dy = p.y - x.y(), dz = p.z - x.z();
            const double d2 = dx * dx + dy * dy + dz * dz;
            if (d2 <= radius2) cand.push_back({i, d2});
          });
          if (cand.empty()) continue;

          if (bk.neighbor_cap != kNoNeighborCap &&
              cand.size() > static_cast<std::size_t>(bk.neighbor_cap)) {
            const auto nearer = [](const Candidate& a, const Candidate& b) {
              return a.dist2 != b.dist2 ? a.dist2 < b.dist2 : a.ordinal < b.ordinal;
            };
            std::nth_element(cand.begin(), cand.begin() + bk.neighbor_cap - 1,
                             cand.end(), nearer);
            cand.resize(static_cast<std::size_t>(bk.neighbor_cap));
          }
          // accumulate in ordinal order so the fold is schedule-independent
          std::sort(cand.begin(), cand.end(),
                    [](const Candidate& a, const Candidate& b) {
                      return a.ordinal < b.ordinal;
                    });

          const std::size_t voxel = cfg.linear_index(ix, iy, iz);
          for (const Candidate& c : cand) {
            const Point& p = obs.points[c.ordinal];
            const Eigen::Vector3d d(p.x - x.x(), p.y - x.y(), p.z - x.z());
            const double dm2 = d.dot(s_inv * d);
            grid.mass(voxel, obs.labels[c.ordinal]) += std::exp(-0.5 * dm2);
          }
        }
      }
    }
  }
}

DirichletGrid bki_update(const PointCloudFrame& obs, const GridConfig& cfg,
                         const BkiConfig& bk) {
  DirichletGrid grid(cfg, bk.prior_alpha);
  bki_accumulate(grid, obs, bk);
  return grid;
}

VoxelGrid classify(const DirichletGrid& grid, double occupancy_threshold) {
  VoxelGrid out(grid.config(), LabelSpace::Semantic,
                static_cast<std::uint8_t>(SemanticLabel::Void));
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(grid.config().num_voxels());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t v = 0; v < n; ++v) {
    if (grid.total_mass(static_cast<std::size_t>(v)) > occupancy_threshold) {
      const int cls = grid.argmax_class(static_cast<std::size_t>(v));
      if (cls > 0) out.labels[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(cls);
    }
  }
  return out;
}

std::vector<std::size_t> occupied_voxels(const DirichletGrid& grid,
                                         double occupancy_threshold) {
  std::vector<std::size_t> out;
  const std::size_t n = grid.config().num_voxels();
  for (std::size_t v = 0; v < n; ++v) {
    if (grid.total_mass(v) > occupancy_threshold) out.push_back(v);
  }
  return out;
}

std::vector<std::uint8_t> nn_assign(std::span<const std::size_t> occupied,
                                    const PointCloudFrame& obs, const GridConfig& cfg) {
  if (obs.points.empty()) throw InputError("nearest-neighbor assignment needs observations");
  if (!obs.has_labels() || obs.labels.size() != obs.points.size()) {
    throw InputError("nearest-neighbor assignment needs one label per point");
  }
  cfg.validate();

  const double cell = 2.0 * static_cast<double>(cfg.voxel_size);
  const SpatialHash hash(obs, cell);

  std::vector<std::uint8_t> labels(occupied.size(), 0);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(occupied.size());

#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t oi = 0; oi < n; ++oi) {
    const std::size_t v = occupied[oi];
    const int nz = cfg.dims[2], ny = cfg.dims[1];
    const int iz = static_cast<int>(v % nz);
    const int iy = static_cast<int>((v / nz) % ny);
    const int ix = static_cast<int>(v / (static_cast<std::size_t>(ny) * nz));
    const auto center = cfg.index_to_center(ix, iy, iz);

    const std::int64_t cx = hash.coord(center[0]);
    const std::int64_t cy = hash.coord(center[1]);
    const std::int64_t cz = hash.coord(center[2]);

    double best_d2 = -1.0;
    std::size_t best_ord = 0;
    const auto consider = [&](std::size_t i) {
      const Point& p = obs.points[i];
      const double dx = p.x - center[0], dy = p.y - center[1], dz = p.z - center[2];
      const double d2 = dx * dx + dy * dy + dz * dz;
      if (best_d2 < 0.0 || d2 < best_d2 || (d2 == best_d2 && i < best_ord)) {
        best_d2 = d2;
        best_ord = i;
      }
    };

    const std::int64_t max_ring = hash.max_ring_from(cx, cy, cz);
    for (std::int64_t r = 0; r <= max_ring; ++r) {
      // a point in a cell at Chebyshev ring r is at least (r-1)*cell away,
      // so once that bound passes the best hit no farther ring can win or tie
      if (best_d2 >= 0.0) {
        const double bound = (static_cast<double>(r) - 1.0) * cell;
        if (bound > 0.0 && bound * bound > best_d2) break;
      }
      hash.for_each_in_ring(cx, cy, cz, r, consider);
    }
    labels[oi] = obs.labels[best_ord];
  }
  return labels;
}

VoxelGrid complete_scene(const PointCloudFrame& obs, const GridConfig& cfg,
                         const BkiConfig& bk) {
  if (obs.points.empty()) {
    return VoxelGrid(cfg, LabelSpace::Semantic,
                     static_cast<std::uint8_t>(SemanticLabel::Void));
  }
  const DirichletGrid grid = bki_update(obs, cfg, bk);
  if (bk.mode == CompletionMode::KernelArgmax) {
    return classify(grid, bk.occupancy_threshold);
  }
  const std::vector<std::size_t> occ = occupied_voxels(grid, bk.occupancy_threshold);
  const std::vector<std::uint8_t> labels = nn_assign(occ, obs, cfg);
  VoxelGrid out(cfg, LabelSpace::Semantic,
                static_cast<std::uint8_t>(SemanticLabel::Void));
  for (std::size_t i = 0; i < occ.size(); ++i) out.labels[occ[i]] = labels[i];
  return out;
}

}  // namespace ord
