// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace ord {

struct Point {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float intensity = 0.0f;
};

/// One LiDAR sweep, optionally with one semantic label id per point.
struct PointCloudFrame {
  std::vector<Point> points;
  std::vector<std::uint8_t> labels;  // empty, or exactly one per point
  int frame_index = 0;

  bool has_labels() const { return !labels.empty(); }
  std::size_t size() const { return points.size(); }
};

/// Rigid transform. Rotation must be orthonormal with determinant +1.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  /// Throws InputError when the rotation is not a proper rotation matrix
  /// (tolerance on R^T R - I and det - 1).
  void validate(double tol = 1e-6) const;

  Pose inverse() const {
    Pose inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(rotation.transpose() * translation);
    return inv;
  }

  /// Composition: (*this) after `other`, i.e. apply `other` first.
  Pose compose(const Pose& other) const {
    Pose out;
    out.rotation = rotation * other.rotation;
    out.translation = rotation * other.translation + translation;
    return out;
  }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }
};

/// Pin-hole camera, no lens distortion. `extrinsic` maps ego/LiDAR
/// coordinates into the camera frame (z forward, x right, y down).
struct CameraModel {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;
  Pose extrinsic;

  void validate() const;  // throws ConfigError
};

}  // namespace ord
