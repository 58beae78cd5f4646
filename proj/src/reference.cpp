// SPDX-License-Identifier: Apache-2.0
#include "ord/reference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ord/errors.hpp"

namespace ord::ref {

VoxelGrid voxelize_semantic(const PointCloudFrame& cloud, const GridConfig& cfg) {
  if (!cloud.has_labels()) throw InputError("voxelization needs a labeled cloud");
  cfg.validate();
  constexpr int kVoteClasses = 10;
  std::vector<std::uint32_t> votes(cfg.num_voxels() * kVoteClasses, 0);

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point& p = cloud.points[i];
    const auto idx = cfg.world_to_index(p.x, p.y, p.z);
    if (!idx) continue;
    std::uint8_t label = cloud.labels[i];
    if (label >= kVoteClasses) label = 0;
    ++votes[cfg.linear_index((*idx)[0], (*idx)[1], (*idx)[2]) * kVoteClasses + label];
  }

  VoxelGrid grid(cfg, LabelSpace::Semantic,
                 static_cast<std::uint8_t>(SemanticLabel::Void));
  for (std::size_t v = 0; v < cfg.num_voxels(); ++v) {
    const std::uint32_t* row = votes.data() + v * kVoteClasses;
    std::uint32_t best = 0;
    std::uint8_t best_id = 0;
    for (int c = 1; c < kVoteClasses; ++c) {
      if (row[c] > best) {
        best = row[c];
        best_id = static_cast<std::uint8_t>(c);
      }
    }
    if (best > 0) grid.labels[v] = best_id;
  }
  return grid;
}

GeomFeatures compute_features(const ElevationMap& map, const NeighborhoodSpec& nb) {
  nb.validate(map.cell_size);
  GeomFeatures out;
  out.nx = map.nx;
  out.ny = map.ny;
  const std::size_t n = static_cast<std::size_t>(map.nx) * map.ny;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.step.assign(n, nan);
  out.slope.assign(n, nan);
  out.unevenness.assign(n, nan);
  out.valid.assign(n, 0);

  for (int ix = 0; ix < map.nx; ++ix) {
    for (int iy = 0; iy < map.ny; ++iy) {
      if (!map.valid(ix, iy)) continue;
      const auto h = step_height(map, ix, iy, nb);
      const auto fit = fit_plane(map, ix, iy, nb);
      if (!h || !fit) continue;
      const std::size_t ci = map.cell_index(ix, iy);
      out.step[ci] = *h;
      out.slope[ci] = std::acos(std::clamp(fit->normal.z(), -1.0, 1.0));
      out.unevenness[ci] = std::log(fit->residual_mse + kUnevennessFloor);
      out.valid[ci] = 1;
    }
  }
  return out;
}

DirichletGrid bki_update(const PointCloudFrame& obs, const GridConfig& cfg,
                         const BkiConfig& bk) {
  bk.validate();
  if (!obs.has_labels() || obs.labels.size() != obs.points.size()) {
    throw InputError("BKI observations need one label per point");
  }
  DirichletGrid grid(cfg, bk.prior_alpha);
  const Eigen::Matrix3d s_inv = bk.metric.inverse();
  const double radius2 = bk.support_radius * bk.support_radius;

  struct Candidate {
    std::size_t ordinal;
    double dist2;
  };
  std::vector<Candidate> cand;

  for (int ix = 0; ix < cfg.dims[0]; ++ix) {
    for (int iy = 0; iy < cfg.dims[1]; ++iy) {
      for (int iz = 0; iz < cfg.dims[2]; ++iz) {
        const auto center = cfg.index_to_center(ix, iy, iz);
        cand.clear();
        for (std::size_t i = 0; i < obs.size(); ++i) {
          const Point& p = obs.points[i];
          const double dx = p.x - center[0], dy = p.y - center[1], dz = p.z - center[2];
          const double d2 = dx * dx + dy * dy + dz * dz;
          if (d2 <= radius2) cand.push_back({i, d2});
        }
        if (bk.neighbor_cap != kNoNeighborCap &&
            cand.size() > static_cast<std::size_t>(bk.neighbor_cap)) {
          std::nth_element(cand.begin(), cand.begin() + bk.neighbor_cap - 1, cand.end(),
                           [](const Candidate& a, const Candidate& b) {
                             return a.dist2 != b.dist2 ? a.dist2 < b.dist2
                                                       : a.ordinal < b.ordinal;
                           });
          cand.resize(static_cast<std::size_t>(bk.neighbor_cap));
          std::sort(cand.begin(), cand.end(),
                    [](const Candidate& a, const Candidate& b) {
                      return a.ordinal < b.ordinal;
                    });
        }
        const std::size_t voxel = cfg.linear_index(ix, iy, iz);
        for (const Candidate& c : cand) {
          const Point& p = obs.points[c.ordinal];
          const Eigen::Vector3d d(p.x - center[0], p.y - center[1], p.z - center[2]);
          const double dm2 = d.dot(s_inv * d);
          grid.mass(voxel, obs.labels[c.ordinal]) += std::exp(-0.5 * dm2);
        }
      }
    }
  }
  return grid;
}

std::vector<std::uint8_t> nn_assign(std::span<const std::size_t> occupied,
                                    const PointCloudFrame& obs, const GridConfig& cfg) {
  if (obs.points.empty()) throw InputError("nearest-neighbor assignment needs observations");
  std::vector<std::uint8_t> labels(occupied.size(), 0);
  for (std::size_t oi = 0; oi < occupied.size(); ++oi) {
    const std::size_t v = occupied[oi];
    const int nz = cfg.dims[2], ny = cfg.dims[1];
    const int iz = static_cast<int>(v % nz);
    const int iy = static_cast<int>((v / nz) % ny);
    const int ix = static_cast<int>(v / (static_cast<std::size_t>(ny) * nz));
    const auto center = cfg.index_to_center(ix, iy, iz);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_ord = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const Point& p = obs.points[i];
      const double dx = p.x - center[0], dy = p.y - center[1], dz = p.z - center[2];
      const double d2 = dx * dx + dy * dy + dz * dz;
      if (d2 < best) {
        best = d2;
        best_ord = i;
      }
    }
    labels[oi] = obs.labels[best_ord];
  }
  return labels;
}

ConfusionMatrix confusion(const VoxelGrid& pred, const VoxelGrid& gt) {
  if (pred.space != gt.space || !(pred.config == gt.config)) {
    throw InputError("grids differ");
  }
  const int classes = class_count(gt.space) - 1;
  const std::uint8_t unk = unknown_id(gt.space);
  ConfusionMatrix cm;
  cm.space = gt.space;
  cm.num_classes = classes;
  cm.counts.assign(static_cast<std::size_t>(classes) * classes, 0);
  for (std::size_t i = 0; i < gt.labels.size(); ++i) {
    const std::uint8_t g = gt.labels[i];
    if (g == unk) continue;
    std::uint8_t p = pred.labels[i];
    if (p == unk) p = 0;
    ++cm.at(g, p);
  }
  return cm;
}

}  // namespace ord::ref
