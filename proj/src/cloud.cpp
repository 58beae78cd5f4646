// SPDX-License-Identifier: Apache-2.0
#include "ord/cloud.hpp"

#include "ord/errors.hpp"

namespace ord {

void Pose::validate(double tol) const {
  const Eigen::Matrix3d err =
      rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  if (err.cwiseAbs().maxCoeff() > tol) {
    throw InputError("pose rotation is not orthonormal");
  }
  if (std::abs(rotation.determinant() - 1.0) > tol) {
    throw InputError("pose rotation determinant is not +1");
  }
  if (!translation.allFinite()) {
    throw InputError("pose translation is not finite");
  }
}

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw ConfigError("camera focal lengths must be positive");
  }
  if (width < 1 || height < 1) {
    throw ConfigError("camera image size must be at least 1x1");
  }
  extrinsic.validate();
}

}  // namespace ord
