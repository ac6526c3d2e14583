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

#include "limms/ik.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace limms {
namespace {

using testing::random_configs;

TEST(IkTest, RecoversPosesOfRandomConfigurations) {
  const ModuleParams p = nominal_params();
  IkSettings s;
  s.seed = 5;
  int solved = 0;
  const auto qs = random_configs(p, 40, 31);
  for (const JointVector& q : qs) {
    const Pose target = fk(p, q, BaseEnd::kEndA);
    const IkResult r = solve_ik(p, target, BaseEnd::kEndA, s);
    if (!r.converged) continue;
    ++solved;
    const Pose got = fk(p, r.q, BaseEnd::kEndA);
    EXPECT_LT((got.translation - target.translation).norm(), 1e-4);
    EXPECT_LT(log_so3(got.rotation * target.rotation.transpose()).norm(), 1e-3);
    EXPECT_TRUE(within_limits(p, r.q));
  }
  EXPECT_GE(solved, 36);
}

TEST(IkTest, ConvergesFromNearbySeedWithoutRestarts) {
  const ModuleParams p = nominal_params();
  const JointVector q = (JointVector() << 0.3, -0.8, 1.1, 0.6, -0.9, 0.2).finished();
  IkSettings s;
  s.restarts = 1;
  const IkResult r = solve_ik(p, fk(p, q, BaseEnd::kEndA), BaseEnd::kEndA, s,
                              q + JointVector::Constant(0.05));
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.attempts, 1);
}

TEST(IkTest, SolvesFromBaseB) {
  const ModuleParams p = nominal_params();
  IkSettings s;
  for (const JointVector& q : random_configs(p, 10, 32)) {
    const Pose target = fk(p, q, BaseEnd::kEndB);
    const IkResult r = solve_ik(p, target, BaseEnd::kEndB, s);
    if (!r.converged) continue;
    EXPECT_LT(pose_distance(fk(p, r.q, BaseEnd::kEndB), target), 2e-3);
  }
}

TEST(IkTest, UnreachableTargetReportsNoConvergence) {
  const ModuleParams p = nominal_params();
  IkSettings s;
  s.restarts = 3;
  const Pose target = Pose::from_translation(Vec3(2.0, 0.0, 0.0));
  const IkResult r = solve_ik(p, target, BaseEnd::kEndA, s);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.final_pos_err, 1.0);
  EXPECT_EQ(r.attempts, 3);
}

TEST(IkTest, RejectsNonOrthonormalTarget) {
  Pose target;
  target.rotation(0, 0) = 1.1;
  EXPECT_THROW(solve_ik(nominal_params(), target, BaseEnd::kEndA, IkSettings{}),
               InvalidParams);
  IkSettings bad;
  bad.damping = 0.0;
  EXPECT_THROW(solve_ik(nominal_params(), Pose{}, BaseEnd::kEndA, bad), InvalidParams);
}

TEST(IkTest, DeterministicForFixedSeed) {
  const ModuleParams p = nominal_params();
  const Pose target = fk(p, (JointVector() << 1.0, 0.5, -1.2, 0.4, 2.0, -0.7).finished(),
                         BaseEnd::kEndA);
  IkSettings s;
  s.seed = 77;
  const IkResult a = solve_ik(p, target, BaseEnd::kEndA, s);
  const IkResult b = solve_ik(p, target, BaseEnd::kEndA, s);
  EXPECT_EQ(a.q, b.q);
  EXPECT_EQ(a.total_iters, b.total_iters);
}

// Oracle: the primal form (J^T J + lambda^2 I)^-1 J^T e equals the dual form
// used by the solver.
TEST(IkTest, DlsStepMatchesPrimalForm) {
  const ModuleParams p = nominal_params();
  for (const JointVector& q : random_configs(p, 10, 33)) {
    const Jacobian j = jacobian(p, q, BaseEnd::kEndA);
    Vec6 e;
    e << 0.01, -0.02, 0.03, 0.1, 0.0, -0.05;
    const double lambda = 0.1;
    const JointVector primal =
        (j.transpose() * j + lambda * lambda * Mat6::Identity()).inverse() * j.transpose() * e;
    EXPECT_LT((dls_step(j, e, lambda) - primal).norm(), 1e-10);
  }
}

TEST(IkTest, PoseErrorVanishesAtTarget) {
  Pose a;
  a.rotation = rot_y(0.4);
  a.translation = Vec3(0.1, 0.2, 0.3);
  EXPECT_LT(pose_error(a, a).norm(), 1e-15);
  Pose b = a;
  b.translation.x() += 0.5;
  EXPECT_NEAR(pose_error(b, a)[0], 0.5, 1e-15);
}

}  // namespace
}  // namespace limms
