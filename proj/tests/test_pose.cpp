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

#include "limms/pose.hpp"

#include <random>

#include <gtest/gtest.h>

namespace limms {
namespace {

TEST(PoseTest, AxisAngleIsOrthonormal) {
  const Mat3 r = axis_angle(Vec3(1.0, 2.0, -0.5).normalized(), 0.7);
  EXPECT_LT(orthonormality_residual(r), 1e-14);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-14);
}

TEST(PoseTest, RotZQuarterTurnMapsXToY) {
  const Vec3 v = rot_z(M_PI / 2.0) * Vec3::UnitX();
  EXPECT_NEAR(v.x(), 0.0, 1e-15);
  EXPECT_NEAR(v.y(), 1.0, 1e-15);
}

TEST(PoseTest, ExpLogRoundTrip) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Vec3 w(n(rng), n(rng), n(rng));
    // Keep the angle below pi so the rotation vector is unique.
    if (w.norm() > 3.0) w *= 3.0 / w.norm();
    const Vec3 back = log_so3(exp_so3(w));
    EXPECT_LT((back - w).norm(), 1e-10) << "w = " << w.transpose();
  }
}

TEST(PoseTest, LogNearHalfTurnRecoversAxis) {
  const Vec3 axis = Vec3(1.0, -2.0, 0.5).normalized();
  for (double angle : {M_PI, M_PI - 1e-7, M_PI - 1e-3}) {
    const Vec3 w = log_so3(axis_angle(axis, angle));
    EXPECT_NEAR(w.norm(), angle, 1e-7);
    EXPECT_NEAR(std::abs(w.normalized().dot(axis)), 1.0, 1e-7);
  }
}

TEST(PoseTest, LogOfIdentityIsZero) {
  EXPECT_EQ(log_so3(Mat3::Identity()).norm(), 0.0);
}

TEST(PoseTest, InverseComposesToIdentity) {
  Pose a;
  a.rotation = axis_angle(Vec3(0.3, 0.1, 1.0).normalized(), 1.1);
  a.translation = Vec3(0.2, -0.4, 0.9);
  EXPECT_LT(pose_distance(a * a.inverse(), Pose::identity()), 1e-15);
  EXPECT_LT(pose_distance(a.inverse() * a, Pose::identity()), 1e-15);
}

TEST(PoseTest, ApplyMatchesHomogeneousProduct) {
  Pose a;
  a.rotation = rot_x(0.4) * rot_y(-1.2);
  a.translation = Vec3(1.0, 2.0, 3.0);
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = a.rotation;
  m.topRightCorner<3, 1>() = a.translation;
  const Vec3 p(0.5, -0.25, 2.0);
  const Eigen::Vector4d expect = m * Eigen::Vector4d(p.x(), p.y(), p.z(), 1.0);
  EXPECT_LT((a.apply(p) - expect.head<3>()).norm(), 1e-15);
}

TEST(PoseTest, ReorthonormalizeRepairsDrift) {
  Pose a;
  a.rotation = rot_z(0.3);
  a.rotation(0, 1) += 1e-6;
  EXPECT_FALSE(a.is_valid_rotation(1e-9));
  a.reorthonormalize();
  EXPECT_TRUE(a.is_valid_rotation(1e-12));
}

}  // namespace
}  // namespace limms
