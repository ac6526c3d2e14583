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

#include "limms/config.hpp"

#include <cstdio>
#include <filesystem>

#include <gtest/gtest.h>

namespace limms {
namespace {

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ConfigError for " << text;
  return ConfigError("", "");
}

TEST(ConfigTest, TrotDefaultsSplitPeriodEvenly) {
  const ScenarioConfig c = parse_config(R"({"scenario": "quadruped_trot"})");
  EXPECT_EQ(c.gait.stance_s, 0.5);
  EXPECT_EQ(c.gait.swing_s, 0.5);
  EXPECT_EQ(c.gait.pattern, "trot");
  EXPECT_EQ(c.timestep_s, 1e-3);
  EXPECT_EQ(c.module.torque_limit_nm, 31.0);
  EXPECT_EQ(c.box.mass_kg, 2.0);
}

TEST(ConfigTest, ZeroTimestepNamesField) {
  const ConfigError e = config_error(R"({"scenario": "dual_lift", "timestep_s": 0})");
  EXPECT_EQ(e.field(), "timestep_s");
  EXPECT_EQ(config_error(R"({"scenario": "dual_lift", "timestep_s": 0.02})").field(),
            "timestep_s");
}

TEST(ConfigTest, NestedFieldErrorsCarryDottedPath) {
  EXPECT_EQ(config_error(R"({"scenario": "dual_lift", "box": {"mass_kg": -1}})").field(),
            "box.mass_kg");
  EXPECT_EQ(config_error(R"({"scenario": "dual_lift", "pid": {"kq": 1}})").field(), "pid.kq");
  EXPECT_EQ(config_error(R"({"scenario": "dual_lift", "gait": {"stance_s": "x"}})").field(),
            "gait.stance_s");
  EXPECT_EQ(config_error(R"({"scenario": "dual_lift", "seed": 1.5})").field(), "seed");
  EXPECT_EQ(
      config_error(R"({"scenario": "dual_lift", "module": {"link_lengths_m": [1, 2]}})").field(),
      "module.link_lengths_m");
}

TEST(ConfigTest, UnknownTopLevelFieldRejected) {
  EXPECT_EQ(config_error(R"({"scenario": "dual_lift", "speed": 3})").field(), "speed");
}

TEST(ConfigTest, ScenarioRequiredAndChecked) {
  EXPECT_EQ(config_error(R"({"timestep_s": 0.001})").field(), "scenario");
  EXPECT_THROW(parse_config(R"({"scenario": "backflip"})"), ConfigError);
  EXPECT_EQ(config_error(R"({"scenario": "dual_lift", "module": {"preset": "ur5"}})").field(),
            "module.preset");
}

TEST(ConfigTest, MalformedJsonIsConfigError) {
  EXPECT_THROW(parse_config("{\"scenario\": "), ConfigError);
  EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
}

TEST(ConfigTest, MissingFileIsConfigError) {
  try {
    load_config("/nonexistent/limms.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "<file>");
  }
}

TEST(ConfigTest, JsonRoundTripPreservesEveryField) {
  for (ScenarioKind kind : {ScenarioKind::kDualLift, ScenarioKind::kQuadrupedTrot,
                            ScenarioKind::kWheelBalance, ScenarioKind::kDexterityMap}) {
    ScenarioConfig c = default_config(kind);
    c.seed = 1234;
    c.box.mass_kg = 3.25;
    c.balance.theta0_rad = 0.1;
    c.gait.k_v = 0.07;
    c.dexterity.dims = {4, 5, 6};
    const ScenarioConfig back = config_from_json(nlohmann::json::parse(to_json(c).dump()));
    EXPECT_EQ(back, c) << to_string(kind);
  }
}

TEST(ConfigTest, SaveAndLoadFile) {
  const auto path = std::filesystem::temp_directory_path() / "limms_config_test.json";
  ScenarioConfig c = default_config(ScenarioKind::kWheelBalance, "traditional");
  c.balance.v_des_mps = 0.5;
  save_config(c, path.string());
  EXPECT_EQ(load_config(path.string()), c);
  std::filesystem::remove(path);
}

TEST(ConfigTest, PresetSuppliesModuleDefaults) {
  const ScenarioConfig c =
      parse_config(R"({"scenario": "dual_lift", "module": {"preset": "traditional"}})");
  EXPECT_EQ(c.module.link_lengths_m, traditional_params().link_lengths);
  const ModuleParams p = module_params(c);
  EXPECT_EQ(p.topology, Topology::kTraditional);
}

TEST(ConfigTest, ModuleOverridesRedistributeMass) {
  ScenarioConfig c = default_config(ScenarioKind::kDualLift);
  c.module.total_mass_kg = 6.0;
  const ModuleParams p = module_params(c);
  double sum = 0.0;
  for (double m : p.link_masses) sum += m;
  EXPECT_NEAR(sum, 6.0, 1e-12);
}

TEST(ConfigTest, ShippedConfigsLoad) {
  const std::filesystem::path dir = LIMMS_CONFIG_DIR;
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_config(entry.path().string())) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 4);
}

}  // namespace
}  // namespace limms
