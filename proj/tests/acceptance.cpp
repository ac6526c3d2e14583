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

// End-to-end acceptance run: one PASS/FAIL line per criterion, non-zero exit
// if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "limms/sim/run.hpp"
#include "limms/workspace.hpp"

using namespace limms;
using namespace limms::sim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<JointVector> random_configs(const ModuleParams& p, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<JointVector> out;
  for (int i = 0; i < n; ++i) out.push_back(random_joints(p, rng));
  return out;
}

std::string trace_csv(const SimResult& r) {
  std::ostringstream out;
  out << trace_header(r.extras) << "\n";
  for (const TraceRow& row : r.rows) out << trace_line(row, r.extras) << "\n";
  return out.str();
}

Outcome reach() {
  Outcome o;
  const auto t0 = Clock::now();
  const double r = calibrate_reach(nominal_params(), 21);
  const double wall = seconds_since(t0);
  o.require(r >= 0.7125 && r <= 0.7875, fmt("reach %.6f m in [0.7125, 0.7875]", r));
  o.require(wall < 60.0, fmt("%.2f s < 60 s", wall));
  return o;
}

Outcome ik_roundtrip() {
  Outcome o;
  const ModuleParams p = nominal_params();
  const auto t0 = Clock::now();
  int ok = 0;
  const auto qs = random_configs(p, 1000, 2026);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    IkSettings s;
    s.seed = i;
    const Pose target = fk(p, qs[i], BaseEnd::kEndA);
    const IkResult r = solve_ik(p, target, BaseEnd::kEndA, s);
    if (!r.converged) continue;
    const Pose got = fk(p, r.q, BaseEnd::kEndA);
    if ((got.translation - target.translation).norm() < 1e-4 &&
        log_so3(got.rotation * target.rotation.transpose()).norm() < 1e-3) {
      ++ok;
    }
  }
  const double wall = seconds_since(t0);
  o.require(ok >= 950, fmt("%.1f%% converged (>= 95%%)", ok / 10.0));
  o.require(wall < 120.0, fmt("%.2f s < 120 s", wall));
  return o;
}

Outcome symmetry() {
  Outcome o;
  const ModuleParams p = nominal_params();
  double inv = 0.0, mir = 0.0;
  for (const JointVector& q : random_configs(p, 100, 3)) {
    const Pose a = fk(p, q, BaseEnd::kEndA);
    inv = std::max(inv, pose_distance(a * fk(p, q, BaseEnd::kEndB), Pose::identity()));
    mir = std::max(mir, pose_distance(fk(p, mirror_joints(q), BaseEnd::kEndB), a));
  }
  o.require(inv < 1e-9, fmt("fk(A) fk(B) - I = %.2e", inv));
  o.require(mir < 1e-9, fmt("mirror deviation %.2e", mir));
  return o;
}

Outcome jacobian_check() {
  Outcome o;
  const ModuleParams p = nominal_params();
  const double h = 1e-6;
  double worst = 0.0;
  for (JointVector q : random_configs(p, 100, 4)) {
    q = q.cwiseMax(-2.9 + h).cwiseMin(2.9 - h);
    const Jacobian j = jacobian(p, q, BaseEnd::kEndA);
    for (int c = 0; c < kNumJoints; ++c) {
      JointVector qp = q, qm = q;
      qp[c] += h;
      qm[c] -= h;
      const Pose a = fk(p, qp, BaseEnd::kEndA), b = fk(p, qm, BaseEnd::kEndA);
      Vec6 col;
      col.head<3>() = (a.translation - b.translation) / (2.0 * h);
      col.tail<3>() = log_so3(a.rotation * b.rotation.transpose()) / (2.0 * h);
      worst = std::max(worst, (col - j.col(c)).cwiseAbs().maxCoeff());
    }
  }
  o.require(worst < 1e-6, fmt("max deviation %.2e < 1e-6", worst));
  return o;
}

// Center column of voxels through the base: the 2 x 2 x 32 slice of the
// reach cube that holds every center-axis voxel.
Outcome dexterity() {
  Outcome o;
  GridSpec g;
  g.origin = Vec3(-0.05, -0.05, -0.8);
  g.voxel_size = 0.05;
  g.nx = g.ny = 2;
  g.nz = 32;
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  const auto t0 = Clock::now();
  const ModuleParams limms = nominal_params();
  const ModuleParams trad = traditional_params();
  const DexterityGrid a = dexterity_map(limms, BaseEnd::kEndA, g, 72, IkSettings{}, 0, threads);
  const DexterityGrid b = dexterity_map(trad, BaseEnd::kEndA, g, 72, IkSettings{}, 0, threads);
  const double wall = seconds_since(t0);
  const double ma = region_means(a, reach_bound(limms)).center_axis;
  const double mb = region_means(b, reach_bound(trad)).center_axis;
  const double cover = mid_height_axis_coverage(a, reach_bound(limms));
  o.require(ma > mb, fmt("center-axis mean LIMMS %.4f", ma) + fmt(" > traditional %.4f", mb));
  o.require(cover >= 0.8, fmt("mid-height coverage %.3f >= 0.8", cover));
  o.require(wall < 900.0, fmt("%.1f s < 900 s", wall) + " on " + std::to_string(threads) +
                              " thread(s)");
  return o;
}

Outcome dual_lift() {
  Outcome o;
  const ScenarioConfig c = default_config(ScenarioKind::kDualLift);
  const ModuleParams p = module_params(c);
  const SimResult r = run_dual_lift(c);
  const RunReport rep = make_report(r, p);
  o.require(r.saturation_count == 0, "saturation events " + std::to_string(r.saturation_count));
  o.require(rep.peak_tau.maxCoeff() <= 31.0, fmt("peak |tau| %.3f N m <= 31", rep.peak_tau.maxCoeff()));

  const auto right = module_rows(r, 0), left = module_rows(r, 1);
  double mirror = 0.0;
  for (std::size_t i = 0; i < right.size(); ++i) {
    mirror = std::max(mirror, (left[i].q - mirror_joints(right[i].q)).cwiseAbs().maxCoeff());
  }
  o.require(right.size() == left.size() && mirror < 1e-6, fmt("mirror error %.2e rad", mirror));

  // Static hold at keyframe 2 against the moment-arm oracle for joint 1.
  ScenarioConfig hc = c;
  hc.lift.hold_keyframe = 2;
  hc.duration_s = 2.0;
  const SimResult hold = run_dual_lift(hc);
  const TraceRow row = module_rows(hold, 0).back();
  const Vec3 up = lift_scene(hc).anchors[0].rotation.transpose() * Vec3::UnitZ();
  const FrameChain f = frame_chain(p, row.q, BaseEnd::kEndA);
  double moment = 0.0;
  for (int s = 0; s < kNumSegments; ++s) {
    const double frac = p.link_coms[s] / p.link_lengths[s];
    const Vec3 com = (1.0 - frac) * f[s].translation + frac * f[s + 1].translation;
    moment += p.link_masses[s] * hc.gravity_mps2 * com.cross(up).z();
  }
  const Vec3 box = f.back().translation - 0.5 * hc.box.size_m * f.back().rotation.col(2);
  moment += 0.5 * hc.box.mass_kg * hc.gravity_mps2 * box.cross(up).z();
  const double err = std::abs(row.tau[0] - moment);
  o.require(err < 1e-6, fmt("hold tau1 %.6f N m", row.tau[0]) + fmt(" vs oracle %.6f", moment) +
                            fmt(" (err %.1e)", err));
  return o;
}

Outcome trot() {
  Outcome o;
  const ScenarioConfig c = default_config(ScenarioKind::kQuadrupedTrot);
  const GaitSchedule g = gait_schedule(c);
  // Phase boundaries sampled at 1 ms must fall every 0.5 s, alternating
  // swing and stance, with diagonal legs in step.
  bool schedule = true;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    LegPhase prev = g.phase(0.0, leg).phase;
    double last_change = -1.0;
    for (int k = 1; k <= 3000; ++k) {
      const double t = k * 1e-3;
      const LegPhase now = g.phase(t, leg).phase;
      if (now != prev) {
        const double span = last_change < 0.0 ? -1.0 : t - last_change;
        if (span >= 0.0 && std::abs(span - 0.5) > 1e-9) schedule = false;
        last_change = t;
      }
      prev = now;
      const int partner = 3 - leg;
      if (g.phase(t, partner).phase != now) schedule = false;
    }
    if (last_change < 0.0) schedule = false;
  }
  o.require(schedule, "stance 0.5 s / swing 0.5 s");

  const SimResult r = run_quadruped_trot(c);
  const double speed = r.summary["mean_body_speed_mps"].get<double>();
  o.require(std::abs(speed - 0.3) < 1e-6, fmt("mean speed %.9f m/s", speed));
  const RunReport rep = make_report(r, module_params(c));
  const double peak = rep.peak_tau.maxCoeff();
  o.require(rep.saturation_count == 0 && peak >= 15.0 && peak <= 31.0,
            fmt("peak |tau| %.3f N m in [15, 31]", peak));

  ScenarioConfig sc = c;
  sc.gait.pattern = "stand";
  sc.gait.vel_mps = 0.0;
  sc.duration_s = 0.1;
  const double fz = run_quadruped_trot(sc).summary["initial_vertical_contact_force_n"].get<double>();
  o.require(std::abs(fz - 182.1) <= 0.1, fmt("static sum fz %.4f N", fz));
  return o;
}

Outcome balance() {
  Outcome o;
  const ScenarioConfig c = default_config(ScenarioKind::kWheelBalance);
  const ModuleParams p = module_params(c);
  const LinearBalanceModel m = linearized_balance_model(p, c.gravity_mps2);
  const double open = m.A.eigenvalues().real().maxCoeff();
  o.require(open > 0.0, fmt("open-loop max Re %.3f > 0", open));
  const BalanceGains g = balance_gains(c);
  const double closed = closed_loop_velocity_block(m, g).eigenvalues().real().maxCoeff();
  o.require(closed < 0.0, fmt("closed-loop (xdot, theta, thetadot) max Re %.3f < 0", closed));
  const auto full = closed_loop(m, g).eigenvalues();
  double zero = 1e9;
  for (int i = 0; i < 4; ++i) zero = std::min(zero, std::abs(full[i]));
  o.detail += fmt("; full 4x4 loop keeps the x integrator pole (|lambda| min %.1e)", zero);

  ScenarioConfig tc = c;
  tc.balance.theta0_rad = 0.1;
  const double settle = run_wheel_balance(tc).summary["theta_settle_time_s"].get<double>();
  o.require(settle >= 0.0 && settle < 3.0, fmt("|theta| < 0.01 after %.3f s", settle));

  const BalancePlant pl = balance_plant(p, c.gravity_mps2);
  BalanceState s(0.0, 0.2, 0.3, 0.0);
  const double e0 = balance_energy(pl, s);
  double drift = 0.0;
  for (int k = 0; k < 10000; ++k) {
    s = rk4_step(pl, s, 0.0, 1e-3);
    drift = std::max(drift, std::abs(balance_energy(pl, s) - e0) / std::abs(e0));
  }
  o.require(drift < 1e-3, fmt("energy drift %.2e < 1e-3", drift));
  return o;
}

Outcome determinism() {
  Outcome o;
  for (ScenarioKind k : {ScenarioKind::kDualLift, ScenarioKind::kQuadrupedTrot,
                         ScenarioKind::kWheelBalance}) {
    ScenarioConfig c = default_config(k);
    if (k == ScenarioKind::kWheelBalance) c.balance.theta0_rad = 0.1;
    const std::string a = trace_csv(run_scenario(c));
    const std::string b = trace_csv(run_scenario(c));
    o.require(a == b, std::string(to_string(k)) + " " + std::to_string(a.size()) + " bytes");
  }
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 reach", reach},
      {"2 fk/ik roundtrip", ik_roundtrip},
      {"3 symmetry", symmetry},
      {"4 jacobian", jacobian_check},
      {"5 dexterity", dexterity},
      {"6 dual lift", dual_lift},
      {"7 quadruped trot", trot},
      {"8 balance", balance},
      {"9 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", name, seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
