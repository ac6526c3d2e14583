// Copyright 2026 The LIMMS Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Rigid transforms and the small amount of SO(3) machinery the kinematics
// and IK need: axis-angle exponential, log map and polar re-orthonormalization.

#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace limms {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Rotation of `angle` radians about the unit vector `axis`.
inline Mat3 axis_angle(const Vec3& axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  const double x = axis.x(), y = axis.y(), z = axis.z();
  Mat3 r;
  r << t * x * x + c, t * x * y - s * z, t * x * z + s * y,
       t * x * y + s * z, t * y * y + c, t * y * z - s * x,
       t * x * z - s * y, t * y * z + s * x, t * z * z + c;
  return r;
}

inline Mat3 rot_x(double angle) { return axis_angle(Vec3::UnitX(), angle); }
inline Mat3 rot_y(double angle) { return axis_angle(Vec3::UnitY(), angle); }
inline Mat3 rot_z(double angle) { return axis_angle(Vec3::UnitZ(), angle); }

// Exponential map from a rotation vector.
inline Mat3 exp_so3(const Vec3& w) {
  const double angle = w.norm();
  if (angle < 1e-12) {
    Mat3 skew;
    skew << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
    return Mat3::Identity() + skew;
  }
  return axis_angle(w / angle, angle);
}

// Log map: rotation vector of `r`, with angle in [0, pi].
inline Vec3 log_so3(const Mat3& r) {
  const double cos_angle = std::clamp((r.trace() - 1.0) * 0.5, -1.0, 1.0);
  const double angle = std::acos(cos_angle);
  const Vec3 vee(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  if (angle < 1e-6) {
    // First-order expansion; error O(angle^3).
    return 0.5 * vee;
  }
  if (M_PI - angle > 1e-6) {
    return vee * (angle / (2.0 * std::sin(angle)));
  }
  // Near pi the antisymmetric part vanishes; recover the axis from the
  // symmetric part and fix its sign with whatever antisymmetric residue is left.
  const Mat3 b = 0.5 * (r + Mat3::Identity());
  int k = 0;
  b.diagonal().maxCoeff(&k);
  Vec3 axis = b.col(k) / std::sqrt(std::max(b(k, k), 1e-300));
  axis.normalize();
  if (axis.dot(vee) < 0.0) axis = -axis;
  return axis * angle;
}

inline double orthonormality_residual(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
}

// Closest rotation in the Frobenius sense (polar factor).
inline Mat3 polar_orthonormalize(const Mat3& r) {
  Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) = -u.col(2);
  return u * v.transpose();
}

// Rigid transform: x -> rotation * x + translation.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose identity() { return {}; }
  static Pose from_translation(const Vec3& t) { return {Mat3::Identity(), t}; }
  static Pose from_rotation(const Mat3& r) { return {r, Vec3::Zero()}; }

  Pose inverse() const {
    Pose out;
    out.rotation = rotation.transpose();
    out.translation = -(out.rotation * translation);
    return out;
  }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  Pose operator*(const Pose& rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
  }

  // Re-project the rotation onto SO(3) once drift exceeds 1e-12.
  void reorthonormalize() {
    if (orthonormality_residual(rotation) > 1e-12) {
      rotation = polar_orthonormalize(rotation);
    }
  }

  bool is_valid_rotation(double tol = 1e-9) const {
    return orthonormality_residual(rotation) <= tol &&
           std::abs(rotation.determinant() - 1.0) <= tol;
  }
};

// Largest absolute entry difference between two poses, over the 3x3
// rotation and the translation.
inline double pose_distance(const Pose& a, const Pose& b) {
  return std::max((a.rotation - b.rotation).cwiseAbs().maxCoeff(),
                  (a.translation - b.translation).cwiseAbs().maxCoeff());
}

}  // namespace limms
