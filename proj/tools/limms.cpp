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

// limms: command-line front end.
//
//   limms fk --preset nominal --q 0,0,0,0,0,0 --base A
//   limms ik --preset nominal --target x,y,z,rx,ry,rz --base A
//   limms dexterity --preset limms --n-orient 72 --out out/
//   limms run --config configs/dual_lift.json --out out/
//   limms presets
//
// Exit codes: 0 ok, 1 IK found no solution, 2 bad arguments or config,
// 3 joints outside limits, 4 run violated actuator limits, 5 simulation
// aborted.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "limms/config.hpp"
#include "limms/ik.hpp"
#include "limms/kinematics.hpp"
#include "limms/plot.hpp"
#include "limms/sim/run.hpp"
#include "limms/workspace.hpp"

namespace {

using namespace limms;

constexpr int kExitNoSolution = 1;
constexpr int kExitUsage = 2;
constexpr int kExitLimits = 3;
constexpr int kExitViolation = 4;
constexpr int kExitAbort = 5;

// Thrown for malformed flag values; carries the flag name.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag,
                               std::size_t expected) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != expected) {
    throw UsageError(fmt::format("{}: expected {} comma-separated values, got {}",
                                 flag, expected, out.size()));
  }
  return out;
}

JointVector parse_joints(const std::string& text) {
  const auto v = parse_list(text, "--q", kNumJoints);
  return Eigen::Map<const JointVector>(v.data());
}

ModuleParams params_from(const std::string& preset, const std::string& config) {
  if (!config.empty()) return module_params(load_config(config));
  return preset_params(preset);
}

int thread_budget() {
  int n = 0;
  if (const char* env = std::getenv("LIMMS_SIM_THREADS")) n = std::atoi(env);
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}

void print_pose(const Pose& pose) {
  std::cout << "rotation:\n";
  for (int r = 0; r < 3; ++r) {
    std::cout << fmt::format("  {:.9g} {:.9g} {:.9g}\n", pose.rotation(r, 0),
                             pose.rotation(r, 1), pose.rotation(r, 2));
  }
  std::cout << fmt::format("translation: {:.9g} {:.9g} {:.9g}\n", pose.translation.x(),
                           pose.translation.y(), pose.translation.z());
}

int cmd_fk(const std::string& preset, const std::string& config,
           const std::string& q_text, const std::string& base_text) {
  const ModuleParams p = params_from(preset, config);
  const JointVector q = parse_joints(q_text);
  print_pose(fk(p, q, parse_base(base_text)));
  return 0;
}

int cmd_ik(const std::string& preset, const std::string& config,
           const std::string& target_text, const std::string& base_text,
           const std::string& q0_text, std::uint64_t seed) {
  const ModuleParams p = params_from(preset, config);
  const auto v = parse_list(target_text, "--target", 6);
  Pose target;
  target.translation = Vec3(v[0], v[1], v[2]);
  target.rotation = exp_so3(Vec3(v[3], v[4], v[5]));
  IkSettings s;
  s.seed = seed;
  std::optional<JointVector> q0;
  if (!q0_text.empty()) q0 = parse_joints(q0_text);
  const IkResult r = solve_ik(p, target, parse_base(base_text), s, q0);
  std::cout << fmt::format("q: {:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n", r.q[0],
                           r.q[1], r.q[2], r.q[3], r.q[4], r.q[5]);
  std::cout << fmt::format("converged: {}\nposition_error_m: {:.3g}\n"
                           "rotation_error_rad: {:.3g}\nattempts: {}\n",
                           r.converged, r.final_pos_err, r.final_rot_err, r.attempts);
  return r.converged ? 0 : kExitNoSolution;
}

struct DexterityArgs {
  std::string preset = "limms";
  std::string config;
  std::string base = "A";
  int n_orient = 72;
  double voxel = 0.05;
  std::string origin;
  std::string dims;
  std::uint64_t seed = 0;
  std::string out = ".";
};

DexterityGrid run_dexterity(const ModuleParams& p, const DexterityConfig& d,
                            std::uint64_t seed) {
  GridSpec spec;
  spec.voxel_size = d.voxel_m;
  spec.origin = Vec3(d.origin_m[0], d.origin_m[1], d.origin_m[2]);
  spec.nx = d.dims[0];
  spec.ny = d.dims[1];
  spec.nz = d.dims[2];
  return dexterity_map(p, parse_base(d.base), spec, d.n_orient, IkSettings{}, seed,
                       thread_budget());
}

nlohmann::ordered_json dexterity_summary(const DexterityGrid& g, const ModuleParams& p) {
  const RegionMeans m = region_means(g, reach_bound(p));
  auto j = grid_metadata(g);
  j["center_axis_mean"] = m.center_axis;
  j["outer_shell_mean"] = m.outer_shell;
  j["bulk_mean"] = m.bulk;
  j["center_axis_voxels"] = m.center_axis_count;
  j["outer_shell_voxels"] = m.outer_shell_count;
  j["bulk_voxels"] = m.bulk_count;
  return j;
}

int write_dexterity(const DexterityGrid& g, const ModuleParams& p,
                    const std::string& out_dir, double wall) {
  std::filesystem::create_directories(out_dir);
  const auto csv = (std::filesystem::path(out_dir) / "dexterity.csv").string();
  const auto meta = (std::filesystem::path(out_dir) / "dexterity_summary.json").string();
  write_grid_csv(g, csv);
  auto j = dexterity_summary(g, p);
  std::ofstream(meta) << j.dump(2) << "\n";
  j["wall_time_s"] = wall;
  j["outputs"] = {csv, meta};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_dexterity(const DexterityArgs& a) {
  ScenarioConfig c = default_config(ScenarioKind::kDexterityMap, a.preset);
  if (!a.config.empty()) c = load_config(a.config);
  c.dexterity.base = a.base;
  c.dexterity.n_orient = a.n_orient;
  c.dexterity.voxel_m = a.voxel;
  c.seed = a.seed;
  if (!(a.voxel > 0.0 && a.voxel <= 0.5)) throw UsageError("--voxel: must lie in (0, 0.5] m");
  if (a.n_orient < 1) throw UsageError("--n-orient: must be >= 1");
  if (!a.origin.empty()) {
    const auto o = parse_list(a.origin, "--origin", 3);
    std::copy(o.begin(), o.end(), c.dexterity.origin_m.begin());
  } else {
    // Cube just covering the reach sphere.
    const double reach = reach_bound(module_params(c));
    const int n = static_cast<int>(std::ceil(reach / a.voxel)) * 2;
    c.dexterity.dims = {n, n, n};
    c.dexterity.origin_m.fill(-0.5 * n * a.voxel);
  }
  if (!a.dims.empty()) {
    const auto d = parse_list(a.dims, "--dims", 3);
    for (int i = 0; i < 3; ++i) {
      if (d[i] < 1 || d[i] != std::floor(d[i])) throw UsageError("--dims: must be positive integers");
      c.dexterity.dims[i] = static_cast<int>(d[i]);
    }
  }
  validate(c);
  const ModuleParams p = module_params(c);
  const auto t0 = std::chrono::steady_clock::now();
  const DexterityGrid g = run_dexterity(p, c.dexterity, c.seed);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return write_dexterity(g, p, a.out, wall);
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const ScenarioConfig c = load_config(config_path);
  const ModuleParams p = module_params(c);
  const auto t0 = std::chrono::steady_clock::now();
  if (c.scenario == ScenarioKind::kDexterityMap) {
    const DexterityGrid g = run_dexterity(p, c.dexterity, c.seed);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return write_dexterity(g, p, out_dir, wall);
  }
  const sim::SimResult r = sim::run_scenario(c);
  sim::RunReport rep = sim::make_report(r, p);
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string stem = to_string(c.scenario);
  const auto path = [&](const std::string& name) {
    return (fs::path(out_dir) / (stem + name)).string();
  };
  sim::write_trace_csv(r, path("_trace.csv"));
  std::ofstream(path("_trace.json")) << sim::trace_metadata(c, r).dump(2) << "\n";
  write_joint_plot(r, PlotQuantity::kTorque, path("_torque.svg"));
  write_joint_plot(r, PlotQuantity::kVelocity, path("_velocity.svg"));
  rep.outputs = {path("_trace.csv"), path("_trace.json"), path("_torque.svg"),
                 path("_velocity.svg")};
  auto j = sim::report_json(rep);
  j["summary"] = r.summary;
  if (!rep.pass) {
    std::vector<std::string> why;
    if (rep.saturation_count) why.push_back(fmt::format("{} torque saturation events", rep.saturation_count));
    if (rep.velocity_violations) why.push_back(fmt::format("{} samples above the velocity limit", rep.velocity_violations));
    if (rep.position_violations) why.push_back(fmt::format("{} joint-limit contacts", rep.position_violations));
    j["failures"] = why;
  }
  std::cout << j.dump(2) << "\n";
  return rep.pass ? 0 : kExitViolation;
}

int cmd_presets() {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& name : preset_names()) {
    const ModuleParams p = preset_params(name);
    j.push_back({{"name", name},
                 {"topology", p.topology == Topology::kSymmetric ? "symmetric" : "traditional"},
                 {"link_lengths_m", p.link_lengths},
                 {"link_masses_kg", p.link_masses},
                 {"reach_bound_m", reach_bound(p)},
                 {"torque_limit_nm", p.torque_limit},
                 {"velocity_limit_radps", p.velocity_limit},
                 {"total_mass_kg", p.total_mass}});
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LIMMS kinematics, control and task simulation toolkit"};
  app.require_subcommand(1);

  std::string preset = "nominal", config, base = "A", q_text, target, q0_text, out = ".";
  std::uint64_t seed = 0;

  auto* fk_cmd = app.add_subcommand("fk", "Forward kinematics of the free-end latch");
  fk_cmd->add_option("--preset", preset, "Parameter preset");
  fk_cmd->add_option("--config", config, "Take module parameters from a config file");
  fk_cmd->add_option("--q", q_text, "Six joint angles, rad, comma separated")->required();
  fk_cmd->add_option("--base", base, "Anchored end: A or B");

  auto* ik_cmd = app.add_subcommand("ik", "Inverse kinematics for a latch pose");
  ik_cmd->add_option("--preset", preset, "Parameter preset");
  ik_cmd->add_option("--config", config, "Take module parameters from a config file");
  ik_cmd->add_option("--target", target, "x,y,z (m) and rotation vector rx,ry,rz (rad)")
      ->required();
  ik_cmd->add_option("--base", base, "Anchored end: A or B");
  ik_cmd->add_option("--q0", q0_text, "Initial guess, six angles");
  ik_cmd->add_option("--seed", seed, "Restart seed");

  DexterityArgs dex;
  auto* dex_cmd = app.add_subcommand("dexterity", "Dexterity index over a voxel grid");
  dex_cmd->add_option("--preset", dex.preset, "Parameter preset");
  dex_cmd->add_option("--config", dex.config, "dexterity_map config file");
  dex_cmd->add_option("--base", dex.base, "Anchored end: A or B");
  dex_cmd->add_option("--n-orient", dex.n_orient, "Orientation samples per voxel");
  dex_cmd->add_option("--voxel", dex.voxel, "Voxel edge, m");
  dex_cmd->add_option("--origin", dex.origin, "Grid min corner x,y,z (default: reach cube)");
  dex_cmd->add_option("--dims", dex.dims, "Voxel counts nx,ny,nz");
  dex_cmd->add_option("--seed", dex.seed, "IK restart seed");
  dex_cmd->add_option("--out", dex.out, "Output directory");

  auto* run_cmd = app.add_subcommand("run", "Run a scenario config");
  run_cmd->add_option("--config", config, "Scenario config file")->required();
  run_cmd->add_option("--out", out, "Output directory");

  auto* presets_cmd = app.add_subcommand("presets", "List parameter presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*fk_cmd) return cmd_fk(preset, config, q_text, base);
    if (*ik_cmd) return cmd_ik(preset, config, target, base, q0_text, seed);
    if (*dex_cmd) return cmd_dexterity(dex);
    if (*run_cmd) return cmd_run(config, out);
    if (*presets_cmd) return cmd_presets();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const JointLimitError& e) {
    std::cerr << "out of limits: " << e.what() << "\n";
    return kExitLimits;
  } catch (const PlanError& e) {
    std::cerr << "plan failed: " << e.what() << "\n";
    return kExitAbort;
  } catch (const SimAbort& e) {
    std::cerr << "simulation aborted: " << e.what() << "\n";
    return kExitAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAbort;
  }
  return kExitUsage;
}
