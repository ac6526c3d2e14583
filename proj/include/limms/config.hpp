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

// Scenario configuration: a JSON document with a fixed schema. Dotted field
// names map to nested objects, so `gait.stance_s` is {"gait": {"stance_s": x}}.
// Unknown fields, wrong types and out-of-range values raise ConfigError
// naming the field.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "limms/control.hpp"
#include "limms/errors.hpp"
#include "limms/model.hpp"

namespace limms {

enum class ScenarioKind { kDualLift, kQuadrupedTrot, kWheelBalance, kDexterityMap };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kDualLift: return "dual_lift";
    case ScenarioKind::kQuadrupedTrot: return "quadruped_trot";
    case ScenarioKind::kWheelBalance: return "wheel_balance";
    case ScenarioKind::kDexterityMap: return "dexterity_map";
  }
  return "?";
}

inline ScenarioKind parse_scenario(const std::string& s) {
  for (auto k : {ScenarioKind::kDualLift, ScenarioKind::kQuadrupedTrot,
                 ScenarioKind::kWheelBalance, ScenarioKind::kDexterityMap}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("scenario", "unknown scenario '" + s + "'");
}

struct ModuleConfig {
  std::string preset = "limms";
  std::array<double, kNumSegments> link_lengths_m{};
  double torque_limit_nm = 31.0;
  double velocity_limit_radps = 2.0;
  double total_mass_kg = 4.14;
  double wheel_radius_m = 0.05;
  bool operator==(const ModuleConfig&) const = default;
};

struct GaitConfig {
  std::string pattern = "trot";  // trot | stand
  double stance_s = 0.5;
  double swing_s = 0.5;
  double vel_mps = 0.3;
  double step_height_m = 0.05;
  double k_v = 0.03;
  bool operator==(const GaitConfig&) const = default;
};

// Quadruped leg placement relative to the box.
struct LegsConfig {
  // Leg posture at the neutral stance, end A latched to the box side.
  std::array<double, kNumJoints> neutral_q_rad{0.40, -1.256, 0.80, 1.354, -1.896, 0.26};
  bool operator==(const LegsConfig&) const = default;
};

struct BoxConfig {
  double mass_kg = 2.0;
  double size_m = 0.3048;
  bool operator==(const BoxConfig&) const = default;
};

struct PidConfig {
  double kp = 60.0;
  double ki = 2.0;
  double kd = 4.0;
  double integral_clamp_nm = 31.0;
  bool operator==(const PidConfig&) const = default;
};

struct BalanceConfig {
  double kp_theta = 0.0;
  double kd_theta = 0.0;
  double kp_v = 0.0;
  double theta0_rad = 0.0;
  double v_des_mps = 0.0;
  bool operator==(const BalanceConfig&) const = default;
};

// Dual-arm lift geometry. Anchors face each other across the box along x,
// related by a half turn about the vertical axis through the box centre.
struct LiftConfig {
  // Horizontal gap from a box face to the facing anchor.
  double anchor_gap_m = 0.50;
  // Anchor height above the box centre at the start pose.
  double anchor_height_m = 0.20;
  // Box centre rise at the lifted and placement keyframes.
  double lift_height_m = 0.40;
  double place_height_m = 0.3048;
  double plan_duration_s = 10.0;
  // 0 tracks the plan; 1..3 holds that keyframe statically for the run.
  int hold_keyframe = 0;
  bool operator==(const LiftConfig&) const = default;
};

struct DexterityConfig {
  std::string base = "A";
  int n_orient = 72;
  double voxel_m = 0.05;
  std::array<double, 3> origin_m{-0.8, -0.8, -0.8};
  std::array<int, 3> dims{32, 32, 32};
  bool operator==(const DexterityConfig&) const = default;
};

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::kDualLift;
  double timestep_s = 1e-3;
  double duration_s = 10.0;
  std::uint64_t seed = 0;
  double gravity_mps2 = kGravity;
  ModuleConfig module;
  GaitConfig gait;
  LegsConfig legs;
  BoxConfig box;
  PidConfig pid;
  BalanceConfig balance;
  LiftConfig lift;
  DexterityConfig dexterity;
  bool operator==(const ScenarioConfig&) const = default;
};

// Default wheel-balance gains, placed for closed-loop poles near
// {-4, -5, -6} s^-1 on the nominal module.
inline BalanceConfig default_balance_config() {
  BalanceConfig b;
  b.kp_theta = 4.83;
  b.kd_theta = 0.893;
  b.kp_v = 0.555;
  return b;
}

inline ScenarioConfig default_config(ScenarioKind kind,
                                     const std::string& preset = "limms") {
  ScenarioConfig c;
  c.scenario = kind;
  const ModuleParams p = preset_params(preset);
  c.module.preset = p.preset;
  c.module.link_lengths_m = p.link_lengths;
  c.module.torque_limit_nm = p.torque_limit;
  c.module.velocity_limit_radps = p.velocity_limit;
  c.module.total_mass_kg = p.total_mass;
  c.module.wheel_radius_m = p.wheel_radius;
  c.balance = default_balance_config();
  switch (kind) {
    case ScenarioKind::kDualLift: c.duration_s = 10.0; break;
    case ScenarioKind::kQuadrupedTrot: c.duration_s = 3.0; break;
    case ScenarioKind::kWheelBalance: c.duration_s = 10.0; break;
    case ScenarioKind::kDexterityMap: c.duration_s = 1.0; break;
  }
  return c;
}

// Module parameters resolved from the preset plus the config overrides.
inline ModuleParams module_params(const ScenarioConfig& c) {
  ModuleParams p = preset_params(c.module.preset);
  p.link_lengths = c.module.link_lengths_m;
  p.torque_limit = c.module.torque_limit_nm;
  p.velocity_limit = c.module.velocity_limit_radps;
  p.total_mass = c.module.total_mass_kg;
  p.wheel_radius = c.module.wheel_radius_m;
  distribute_mass(p);
  return p;
}

inline PidGains pid_gains(const ScenarioConfig& c) {
  return {c.pid.kp, c.pid.ki, c.pid.kd, c.pid.integral_clamp_nm};
}

inline BalanceGains balance_gains(const ScenarioConfig& c) {
  return {c.balance.kp_theta, c.balance.kd_theta, c.balance.kp_v};
}

inline GaitSchedule gait_schedule(const ScenarioConfig& c) {
  GaitSchedule g;
  g.pattern = c.gait.pattern == "stand" ? GaitPattern::kStand : GaitPattern::kTrot;
  g.stance_s = c.gait.stance_s;
  g.swing_s = c.gait.swing_s;
  g.vel_des = c.gait.vel_mps;
  g.step_height = c.gait.step_height_m;
  g.k_v = c.gait.k_v;
  return g;
}

inline BaseEnd parse_base(const std::string& s) {
  if (s == "A" || s == "a") return BaseEnd::kEndA;
  if (s == "B" || s == "b") return BaseEnd::kEndB;
  throw InvalidParams("base must be A or B, got '" + s + "'");
}

namespace detail {

inline void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError(field, why);
}

}  // namespace detail

// Range checks on every field; throws ConfigError naming the first offender.
inline void validate(const ScenarioConfig& c) {
  using detail::require;
  require(c.timestep_s > 0.0 && c.timestep_s <= 0.01, "timestep_s",
          "must lie in (0, 0.01]");
  require(c.duration_s > 0.0, "duration_s", "must be > 0");
  require(c.gravity_mps2 >= 0.0, "gravity_mps2", "must be >= 0");
  const auto names = preset_names();
  require(std::find(names.begin(), names.end(), c.module.preset) != names.end(),
          "module.preset", "unknown preset '" + c.module.preset + "'");
  for (double len : c.module.link_lengths_m) {
    require(len > 0.0, "module.link_lengths_m", "lengths must be > 0");
  }
  require(c.module.torque_limit_nm > 0.0, "module.torque_limit_nm", "must be > 0");
  require(c.module.velocity_limit_radps > 0.0, "module.velocity_limit_radps",
          "must be > 0");
  require(c.module.total_mass_kg > 1.0, "module.total_mass_kg",
          "must exceed the 1 kg of end-hub lumps");
  require(c.module.wheel_radius_m > 0.0, "module.wheel_radius_m", "must be > 0");
  require(c.gait.pattern == "trot" || c.gait.pattern == "stand", "gait.pattern",
          "must be 'trot' or 'stand'");
  require(c.gait.stance_s > 0.0, "gait.stance_s", "must be > 0");
  require(c.gait.swing_s > 0.0, "gait.swing_s", "must be > 0");
  require(c.gait.step_height_m >= 0.0, "gait.step_height_m", "must be >= 0");
  require(c.gait.k_v >= 0.0, "gait.k_v", "must be >= 0");
  for (double a : c.legs.neutral_q_rad) {
    require(std::abs(a) <= 2.9, "legs.neutral_q_rad", "angles must lie within +-2.9 rad");
  }
  require(c.box.mass_kg >= 0.0, "box.mass_kg", "must be >= 0");
  require(c.box.size_m > 0.0, "box.size_m", "must be > 0");
  require(c.pid.kp >= 0.0, "pid.kp", "must be >= 0");
  require(c.pid.ki >= 0.0, "pid.ki", "must be >= 0");
  require(c.pid.kd >= 0.0, "pid.kd", "must be >= 0");
  require(c.pid.integral_clamp_nm > 0.0, "pid.integral_clamp_nm", "must be > 0");
  require(c.balance.kp_theta >= 0.0, "balance.kp_theta", "must be >= 0");
  require(c.balance.kd_theta >= 0.0, "balance.kd_theta", "must be >= 0");
  require(c.balance.kp_v >= 0.0, "balance.kp_v", "must be >= 0");
  require(std::abs(c.balance.theta0_rad) < M_PI / 3.0, "balance.theta0_rad",
          "must be inside the fall threshold pi/3");
  require(c.lift.anchor_gap_m > 0.0, "lift.anchor_gap_m", "must be > 0");
  require(c.lift.plan_duration_s > 0.0, "lift.plan_duration_s", "must be > 0");
  require(c.lift.hold_keyframe >= 0 && c.lift.hold_keyframe <= 3,
          "lift.hold_keyframe", "must be 0..3");
  require(c.dexterity.base == "A" || c.dexterity.base == "B", "dexterity.base",
          "must be 'A' or 'B'");
  require(c.dexterity.n_orient >= 1, "dexterity.n_orient", "must be >= 1");
  require(c.dexterity.voxel_m > 0.0, "dexterity.voxel_m", "must be > 0");
  for (int d : c.dexterity.dims) {
    require(d >= 1, "dexterity.dims", "must be >= 1");
  }
}

inline nlohmann::ordered_json to_json(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  j["scenario"] = to_string(c.scenario);
  j["timestep_s"] = c.timestep_s;
  j["duration_s"] = c.duration_s;
  j["seed"] = c.seed;
  j["gravity_mps2"] = c.gravity_mps2;
  j["module"] = {{"preset", c.module.preset},
                 {"link_lengths_m", c.module.link_lengths_m},
                 {"torque_limit_nm", c.module.torque_limit_nm},
                 {"velocity_limit_radps", c.module.velocity_limit_radps},
                 {"total_mass_kg", c.module.total_mass_kg},
                 {"wheel_radius_m", c.module.wheel_radius_m}};
  j["gait"] = {{"pattern", c.gait.pattern},
               {"stance_s", c.gait.stance_s},
               {"swing_s", c.gait.swing_s},
               {"vel_mps", c.gait.vel_mps},
               {"step_height_m", c.gait.step_height_m},
               {"k_v", c.gait.k_v}};
  j["legs"] = {{"neutral_q_rad", c.legs.neutral_q_rad}};
  j["box"] = {{"mass_kg", c.box.mass_kg}, {"size_m", c.box.size_m}};
  j["pid"] = {{"kp", c.pid.kp},
              {"ki", c.pid.ki},
              {"kd", c.pid.kd},
              {"integral_clamp_nm", c.pid.integral_clamp_nm}};
  j["balance"] = {{"kp_theta", c.balance.kp_theta},
                  {"kd_theta", c.balance.kd_theta},
                  {"kp_v", c.balance.kp_v},
                  {"theta0_rad", c.balance.theta0_rad},
                  {"v_des_mps", c.balance.v_des_mps}};
  j["lift"] = {{"anchor_gap_m", c.lift.anchor_gap_m},
               {"anchor_height_m", c.lift.anchor_height_m},
               {"lift_height_m", c.lift.lift_height_m},
               {"place_height_m", c.lift.place_height_m},
               {"plan_duration_s", c.lift.plan_duration_s},
               {"hold_keyframe", c.lift.hold_keyframe}};
  j["dexterity"] = {{"base", c.dexterity.base},
                    {"n_orient", c.dexterity.n_orient},
                    {"voxel_m", c.dexterity.voxel_m},
                    {"origin_m", c.dexterity.origin_m},
                    {"dims", c.dexterity.dims}};
  return j;
}

namespace detail {

// Walks one JSON object, consuming known keys and rejecting the rest.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string prefix)
      : j_(j), prefix_(std::move(prefix)) {
    if (!j_.is_object()) {
      throw ConfigError(prefix_.empty() ? "<root>" : prefix_, "expected an object");
    }
  }

  std::string path(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

  const nlohmann::json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const auto* v = find(key)) {
      if (!v->is_number()) throw ConfigError(path(key), "expected a number");
      out = v->get<double>();
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const auto* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(path(key), "expected an integer");
      if (std::is_unsigned_v<Int> && v->get<std::int64_t>() < 0) {
        throw ConfigError(path(key), "must be >= 0");
      }
      out = v->get<Int>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const auto* v = find(key)) {
      if (!v->is_string()) throw ConfigError(path(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  template <class T, std::size_t N>
  void array(const std::string& key, std::array<T, N>& out) {
    if (const auto* v = find(key)) {
      if (!v->is_array() || v->size() != N) {
        throw ConfigError(path(key), "expected an array of " + std::to_string(N) +
                                         " numbers");
      }
      for (std::size_t i = 0; i < N; ++i) {
        const auto& e = (*v)[i];
        const bool ok = std::is_integral_v<T> ? e.is_number_integer() : e.is_number();
        if (!ok) throw ConfigError(path(key), "element " + std::to_string(i) + " has the wrong type");
        out[i] = e.get<T>();
      }
    }
  }

  template <class F>
  void object(const std::string& key, F&& read) {
    if (const auto* v = find(key)) {
      ObjectReader sub(*v, path(key));
      read(sub);
      sub.finish();
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(path(it.key()), "unknown field");
    }
  }

 private:
  const nlohmann::json& j_;
  std::string prefix_;
  std::set<std::string> seen_;
};

}  // namespace detail

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  detail::ObjectReader root(j, "");
  std::string kind;
  root.string("scenario", kind);
  if (kind.empty()) throw ConfigError("scenario", "missing required field");
  // The preset supplies defaults for every module field, so read it first.
  std::string preset = "limms";
  if (j.contains("module") && j["module"].is_object() &&
      j["module"].contains("preset") && j["module"]["preset"].is_string()) {
    preset = j["module"]["preset"].get<std::string>();
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), preset) == names.end()) {
      throw ConfigError("module.preset", "unknown preset '" + preset + "'");
    }
  }
  ScenarioConfig c = default_config(parse_scenario(kind), preset);
  root.number("timestep_s", c.timestep_s);
  root.number("duration_s", c.duration_s);
  root.integer("seed", c.seed);
  root.number("gravity_mps2", c.gravity_mps2);
  root.object("module", [&](detail::ObjectReader& r) {
    r.string("preset", c.module.preset);
    r.array("link_lengths_m", c.module.link_lengths_m);
    r.number("torque_limit_nm", c.module.torque_limit_nm);
    r.number("velocity_limit_radps", c.module.velocity_limit_radps);
    r.number("total_mass_kg", c.module.total_mass_kg);
    r.number("wheel_radius_m", c.module.wheel_radius_m);
  });
  root.object("gait", [&](detail::ObjectReader& r) {
    r.string("pattern", c.gait.pattern);
    r.number("stance_s", c.gait.stance_s);
    r.number("swing_s", c.gait.swing_s);
    r.number("vel_mps", c.gait.vel_mps);
    r.number("step_height_m", c.gait.step_height_m);
    r.number("k_v", c.gait.k_v);
  });
  root.object("legs", [&](detail::ObjectReader& r) {
    r.array("neutral_q_rad", c.legs.neutral_q_rad);
  });
  root.object("box", [&](detail::ObjectReader& r) {
    r.number("mass_kg", c.box.mass_kg);
    r.number("size_m", c.box.size_m);
  });
  root.object("pid", [&](detail::ObjectReader& r) {
    r.number("kp", c.pid.kp);
    r.number("ki", c.pid.ki);
    r.number("kd", c.pid.kd);
    r.number("integral_clamp_nm", c.pid.integral_clamp_nm);
  });
  root.object("balance", [&](detail::ObjectReader& r) {
    r.number("kp_theta", c.balance.kp_theta);
    r.number("kd_theta", c.balance.kd_theta);
    r.number("kp_v", c.balance.kp_v);
    r.number("theta0_rad", c.balance.theta0_rad);
    r.number("v_des_mps", c.balance.v_des_mps);
  });
  root.object("lift", [&](detail::ObjectReader& r) {
    r.number("anchor_gap_m", c.lift.anchor_gap_m);
    r.number("anchor_height_m", c.lift.anchor_height_m);
    r.number("lift_height_m", c.lift.lift_height_m);
    r.number("place_height_m", c.lift.place_height_m);
    r.number("plan_duration_s", c.lift.plan_duration_s);
    r.integer("hold_keyframe", c.lift.hold_keyframe);
  });
  root.object("dexterity", [&](detail::ObjectReader& r) {
    r.string("base", c.dexterity.base);
    r.integer("n_orient", c.dexterity.n_orient);
    r.number("voxel_m", c.dexterity.voxel_m);
    r.array("origin_m", c.dexterity.origin_m);
    r.array("dims", c.dexterity.dims);
  });
  root.finish();
  validate(c);
  return c;
}

inline ScenarioConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  return config_from_json(j);
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

inline void save_config(const ScenarioConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << to_json(c).dump(2) << "\n";
}

}  // namespace limms
