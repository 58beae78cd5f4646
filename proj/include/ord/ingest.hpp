// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>

#include "ord/cloud.hpp"
#include "ord/grid.hpp"

namespace ord {

/// Frame-loading options: how raw label words map to semantic classes and
/// whether unmapped ids are fatal.
struct IngestOptions {
  // raw id (low 16 bits of the label word) -> semantic class
  std::unordered_map<std::uint16_t, SemanticLabel> label_map;
  bool strict_labels = false;

  /// Identity table: raw ids 0..9 are taken as semantic ids directly.
  static IngestOptions identity();
};

/// Reads a binary cloud (little-endian, 16 bytes per point: f32 x, y, z,
/// intensity) and optionally a label stream (one u32 per point; semantic id
/// in the low 16 bits, instance bits discarded).
///
/// Unmapped raw ids map to void and are counted in *unknown_raw, unless
/// strict_labels is set, in which case they raise InputError.
PointCloudFrame load_frame(std::istream& cloud, std::istream* labels,
                           const IngestOptions& opts = IngestOptions::identity(),
                           std::size_t* unknown_raw = nullptr);
PointCloudFrame load_frame_file(const std::filesystem::path& cloud,
                                const std::optional<std::filesystem::path>& labels,
                                const IngestOptions& opts = IngestOptions::identity(),
                                std::size_t* unknown_raw = nullptr);

/// Poses file: one line per frame, 12 whitespace-separated floats forming a
/// row-major 3x4 [R | t]. With `invert`, each pose is inverted after load.
std::vector<Pose> load_poses(const std::filesystem::path& path, bool invert = false);

/// Calibration JSON: fx, fy, cx, cy, width, height plus a 4x4 row-major
/// "extrinsic" (flat array of 16) mapping ego to camera coordinates.
CameraModel load_camera(const std::filesystem::path& path);

/// Transforms every frame into the reference frame's coordinates
/// (pose_ref^-1 * pose_i) and concatenates, labels carried through.
/// Dynamic objects are aggregated as-is.
PointCloudFrame aggregate_frames(std::span<const PointCloudFrame> frames,
                                 std::span<const Pose> poses, int reference);

/// Majority-vote voxelization of a labeled cloud. Every in-range point votes
/// its label into its voxel; the voxel takes the majority among non-void
/// votes, ties to the smallest class id; voxels with no points stay void.
/// Deterministic for any thread count.
VoxelGrid voxelize_semantic(const PointCloudFrame& cloud, const GridConfig& cfg);

/// Keeps voxels whose center projects with positive depth inside the image;
/// all others become unknown.
VoxelGrid fov_mask(const VoxelGrid& grid, const CameraModel& cam);

}  // namespace ord
