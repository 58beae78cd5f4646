// SPDX-License-Identifier: Apache-2.0
#include "ord/ingest.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ord/errors.hpp"

namespace ord {

IngestOptions IngestOptions::identity() {
  IngestOptions opts;
  for (std::uint16_t id = 0; id <= 9; ++id) {
    opts.label_map.emplace(id, static_cast<SemanticLabel>(id));
  }
  return opts;
}

PointCloudFrame load_frame(std::istream& cloud, std::istream* labels,
                           const IngestOptions& opts, std::size_t* unknown_raw) {
  PointCloudFrame frame;
  if (unknown_raw) *unknown_raw = 0;

  std::vector<char> raw((std::istreambuf_iterator<char>(cloud)),
                        std::istreambuf_iterator<char>());
  if (raw.size() % 16 != 0) {
    throw InputError("cloud stream length is not a multiple of 16 bytes");
  }
  const std::size_t n = raw.size() / 16;
  frame.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::memcpy(&frame.points[i], raw.data() + 16 * i, 16);
    const Point& p = frame.points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw InputError("cloud contains a non-finite coordinate");
    }
  }

  if (labels) {
    std::vector<char> lraw((std::istreambuf_iterator<char>(*labels)),
                           std::istreambuf_iterator<char>());
    if (lraw.size() != n * 4) {
      throw InputError("label stream length does not match point count");
    }
    frame.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t word;
      std::memcpy(&word, lraw.data() + 4 * i, 4);
      const std::uint16_t raw_id = static_cast<std::uint16_t>(word & 0xffff);
      const auto it = opts.label_map.find(raw_id);
      if (it == opts.label_map.end()) {
        if (opts.strict_labels) {
          throw InputError("unmapped raw label id " + std::to_string(raw_id));
        }
        if (unknown_raw) ++*unknown_raw;
        frame.labels[i] = static_cast<std::uint8_t>(SemanticLabel::Void);
      } else {
        frame.labels[i] = static_cast<std::uint8_t>(it->second);
      }
    }
  }
  return frame;
}

PointCloudFrame load_frame_file(const std::filesystem::path& cloud,
                                const std::optional<std::filesystem::path>& labels,
                                const IngestOptions& opts,
                                std::size_t* unknown_raw) {
  std::ifstream cin(cloud, std::ios::binary);
  if (!cin) throw InputError("cannot open cloud file: " + cloud.string());
  if (labels) {
    std::ifstream lin(*labels, std::ios::binary);
    if (!lin) throw InputError("cannot open label file: " + labels->string());
    return load_frame(cin, &lin, opts, unknown_raw);
  }
  return load_frame(cin, nullptr, opts, unknown_raw);
}

std::vector<Pose> load_poses(const std::filesystem::path& path, bool invert) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open poses file: " + path.string());
  std::vector<Pose> poses;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream ss(line);
    double v[12];
    for (int i = 0; i < 12; ++i) {
      if (!(ss >> v[i])) {
        throw InputError("poses file " + path.string() + " line " +
                         std::to_string(line_no) + ": expected 12 floats");
      }
    }
    Pose pose;
    pose.rotation << v[0], v[1], v[2], v[4], v[5], v[6], v[8], v[9], v[10];
    pose.translation << v[3], v[7], v[11];
    pose.validate();
    poses.push_back(invert ? pose.inverse() : pose);
  }
  return poses;
}

CameraModel load_camera(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open calibration file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("calibration JSON parse error: " + std::string(e.what()));
  }
  CameraModel cam;
  try {
    cam.fx = j.at("fx").get<double>();
    cam.fy = j.at("fy").get<double>();
    cam.cx = j.at("cx").get<double>();
    cam.cy = j.at("cy").get<double>();
    cam.width = j.at("width").get<int>();
    cam.height = j.at("height").get<int>();
    const auto ext = j.at("extrinsic").get<std::vector<double>>();
    if (ext.size() != 16) {
      throw InputError("calibration extrinsic must have 16 entries");
    }
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) cam.extrinsic.rotation(r, c) = ext[4 * r + c];
      cam.extrinsic.translation(r) = ext[4 * r + 3];
    }
    const double last[4] = {ext[12], ext[13], ext[14], ext[15]};
    if (last[0] != 0.0 || last[1] != 0.0 || last[2] != 0.0 || last[3] != 1.0) {
      throw InputError("calibration extrinsic last row must be 0 0 0 1");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("calibration JSON missing field: " + std::string(e.what()));
  }
  cam.validate();
  return cam;
}

PointCloudFrame aggregate_frames(std::span<const PointCloudFrame> frames,
                                 std::span<const Pose> poses, int reference) {
  if (frames.size() != poses.size()) {
    throw InputError("pose count does not match frame count");
  }
  if (reference < 0 || static_cast<std::size_t>(reference) >= frames.size()) {
    throw InputError("reference frame index out of range");
  }
  const bool labeled = !frames.empty() && frames[0].has_labels();
  for (const auto& f : frames) {
    if (f.has_labels() != labeled) {
      throw InputError("frames mix labeled and unlabeled clouds");
    }
    if (f.has_labels() && f.labels.size() != f.points.size()) {
      throw InputError("frame labels do not match point count");
    }
  }

  std::vector<std::size_t> offset(frames.size() + 1, 0);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    offset[i + 1] = offset[i] + frames[i].size();
  }

  PointCloudFrame out;
  out.frame_index = frames[static_cast<std::size_t>(reference)].frame_index;
  out.points.resize(offset.back());
  if (labeled) out.labels.resize(offset.back());

  const Pose ref_inv = poses[static_cast<std::size_t>(reference)].inverse();

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t fi = 0; fi < static_cast<std::ptrdiff_t>(frames.size()); ++fi) {
    const Pose rel = ref_inv.compose(poses[fi]);
    const PointCloudFrame& f = frames[fi];
    const std::size_t base = offset[fi];
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Eigen::Vector3d p(f.points[i].x, f.points[i].y, f.points[i].z);
      const Eigen::Vector3d q = rel.apply(p);
      out.points[base + i] = {static_cast<float>(q.x()), static_cast<float>(q.y()),
                              static_cast<float>(q.z()), f.points[i].intensity};
      if (labeled) out.labels[base + i] = f.labels[i];
    }
  }
  return out;
}

VoxelGrid voxelize_semantic(const PointCloudFrame& cloud, const GridConfig& cfg) {
  if (!cloud.has_labels()) throw InputError("voxelization needs a labeled cloud");
  if (cloud.labels.size() != cloud.points.size()) {
    throw InputError("cloud labels do not match point count");
  }
  cfg.validate();

  // One vote counter per (voxel, class), ids 0..9; integer adds commute, so
  // the result is identical for any thread schedule.
  constexpr int kVoteClasses = 10;
  const std::size_t n_vox = cfg.num_voxels();
  std::vector<std::uint32_t> votes(n_vox * kVoteClasses, 0);

  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(cloud.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Point& p = cloud.points[i];
    const auto idx = cfg.world_to_index(p.x, p.y, p.z);
    if (!idx) continue;
    std::uint8_t label = cloud.labels[i];
    if (label >= kVoteClasses) label = 0;  // mask sentinel votes as void
    const std::size_t slot =
        cfg.linear_index((*idx)[0], (*idx)[1], (*idx)[2]) * kVoteClasses + label;
#pragma omp atomic
    ++votes[slot];
  }

  VoxelGrid grid(cfg, LabelSpace::Semantic,
                 static_cast<std::uint8_t>(SemanticLabel::Void));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t v = 0; v < static_cast<std::ptrdiff_t>(n_vox); ++v) {
    const std::uint32_t* row = votes.data() + static_cast<std::size_t>(v) * kVoteClasses;
    std::uint32_t best = 0;
    std::uint8_t best_id = 0;
    for (int c = 1; c < kVoteClasses; ++c) {  // majority among non-void votes
      if (row[c] > best) {
        best = row[c];
        best_id = static_cast<std::uint8_t>(c);
      }
    }
    if (best > 0) grid.labels[static_cast<std::size_t>(v)] = best_id;
  }
  return grid;
}

VoxelGrid fov_mask(const VoxelGrid& grid, const CameraModel& cam) {
  cam.validate();
  VoxelGrid out = grid;
  const GridConfig& cfg = grid.config;
  const std::uint8_t unk = unknown_id(grid.space);

#pragma omp parallel for schedule(static) collapse(2)
  for (int ix = 0; ix < cfg.dims[0]; ++ix) {
    for (int iy = 0; iy < cfg.dims[1]; ++iy) {
      for (int iz = 0; iz < cfg.dims[2]; ++iz) {
        const auto c = cfg.index_to_center(ix, iy, iz);
        const Eigen::Vector3d pc =
            cam.extrinsic.apply(Eigen::Vector3d(c[0], c[1], c[2]));
        bool keep = false;
        if (pc.z() > 0.0) {
          const double u = cam.fx * pc.x() / pc.z() + cam.cx;
          const double v = cam.fy * pc.y() / pc.z() + cam.cy;
          keep = u >= 0.0 && u < cam.width && v >= 0.0 && v < cam.height;
        }
        if (!keep) out.at(ix, iy, iz) = unk;
      }
    }
  }
  return out;
}

}  // namespace ord
