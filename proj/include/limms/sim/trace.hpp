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

// Simulation traces: one row per module per timestep, CSV serialization, the
// metadata sidecar and the limit report derived from a trace.

#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "limms/config.hpp"
#include "limms/kinematics.hpp"

namespace limms::sim {

// Scenario-specific trailing columns.
enum class Extras { kNone, kBody, kBalance };

struct TraceRow {
  double t = 0.0;
  int module = 0;
  JointVector q = JointVector::Zero();
  JointVector qd = JointVector::Zero();
  JointVector tau = JointVector::Zero();
  double body_x = 0.0;
  double body_v = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;
  double wheel_tau = 0.0;
};

struct SimResult {
  ScenarioKind kind = ScenarioKind::kDualLift;
  Extras extras = Extras::kNone;
  int num_modules = 1;
  std::vector<TraceRow> rows;
  // Torque samples that hit the saturation bound.
  int saturation_count = 0;
  // Joint-limit contacts (hard stops or commands outside the limits).
  int limit_count = 0;
  std::vector<std::string> events;
  // Scenario-specific results (plan, gait and balance figures).
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();

  void log(const std::string& e) {
    constexpr std::size_t kMaxEvents = 200;
    if (events.size() < kMaxEvents) events.push_back(e);
  }
};

inline std::string trace_header(Extras extras) {
  std::string h = "t_s,module";
  for (int j = 1; j <= kNumJoints; ++j) h += ",q" + std::to_string(j) + "_rad";
  for (int j = 1; j <= kNumJoints; ++j) h += ",qd" + std::to_string(j) + "_radps";
  for (int j = 1; j <= kNumJoints; ++j) h += ",tau" + std::to_string(j) + "_nm";
  if (extras != Extras::kNone) h += ",body_x_m,body_v_mps";
  if (extras == Extras::kBalance) h += ",theta_rad,theta_dot_radps,wheel_tau_nm";
  return h;
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string trace_line(const TraceRow& r, Extras extras) {
  std::string s = format_number(r.t) + "," + std::to_string(r.module);
  for (const JointVector* v : {&r.q, &r.qd, &r.tau}) {
    for (int j = 0; j < kNumJoints; ++j) s += "," + format_number((*v)[j]);
  }
  if (extras != Extras::kNone) {
    s += "," + format_number(r.body_x) + "," + format_number(r.body_v);
  }
  if (extras == Extras::kBalance) {
    s += "," + format_number(r.theta) + "," + format_number(r.theta_dot) + "," +
         format_number(r.wheel_tau);
  }
  return s;
}

inline void write_trace_csv(const SimResult& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << trace_header(r.extras) << "\n";
  for (const TraceRow& row : r.rows) out << trace_line(row, r.extras) << "\n";
}

inline nlohmann::ordered_json trace_metadata(const ScenarioConfig& c,
                                             const SimResult& r) {
  nlohmann::ordered_json j;
  j["scenario"] = to_string(c.scenario);
  j["seed"] = c.seed;
  j["config"] = to_json(c);
  j["rows"] = r.rows.size();
  j["modules"] = r.num_modules;
  j["saturation_count"] = r.saturation_count;
  j["events"] = r.events;
  j["summary"] = r.summary;
  return j;
}

struct RunReport {
  ScenarioKind kind = ScenarioKind::kDualLift;
  double wall_time_s = 0.0;
  JointVector peak_tau = JointVector::Zero();
  JointVector peak_qd = JointVector::Zero();
  int saturation_count = 0;
  // Samples with |qd| above the velocity limit or q outside the joint limits.
  int velocity_violations = 0;
  int position_violations = 0;
  std::vector<std::string> outputs;
  bool pass = false;
};

inline RunReport make_report(const SimResult& r, const ModuleParams& p) {
  RunReport rep;
  rep.kind = r.kind;
  rep.saturation_count = r.saturation_count;
  rep.position_violations = r.limit_count;
  // Limits are checked with a relative slack far below any physical effect
  // so values sitting exactly on a bound do not count.
  const double v_lim = p.velocity_limit * (1.0 + 1e-12);
  for (const TraceRow& row : r.rows) {
    for (int j = 0; j < kNumJoints; ++j) {
      rep.peak_tau[j] = std::max(rep.peak_tau[j], std::abs(row.tau[j]));
      rep.peak_qd[j] = std::max(rep.peak_qd[j], std::abs(row.qd[j]));
      if (std::abs(row.qd[j]) > v_lim) ++rep.velocity_violations;
      const auto& lim = p.joint_limits[j];
      if (row.q[j] < lim.lo - 1e-12 || row.q[j] > lim.hi + 1e-12) {
        ++rep.position_violations;
      }
    }
  }
  rep.pass = rep.saturation_count == 0 && rep.velocity_violations == 0 &&
             rep.position_violations == 0;
  return rep;
}

inline nlohmann::ordered_json report_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["scenario"] = to_string(r.kind);
  j["wall_time_s"] = r.wall_time_s;
  j["peak_tau_nm"] = std::vector<double>(r.peak_tau.begin(), r.peak_tau.end());
  j["peak_qd_radps"] = std::vector<double>(r.peak_qd.begin(), r.peak_qd.end());
  j["saturation_count"] = r.saturation_count;
  j["velocity_violations"] = r.velocity_violations;
  j["position_violations"] = r.position_violations;
  j["outputs"] = r.outputs;
  j["pass"] = r.pass;
  return j;
}

// Rows of one module, in time order.
inline std::vector<TraceRow> module_rows(const SimResult& r, int module) {
  std::vector<TraceRow> out;
  for (const TraceRow& row : r.rows) {
    if (row.module == module) out.push_back(row);
  }
  return out;
}

}  // namespace limms::sim
