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

// Drives the installed command-line tool as a subprocess.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(LIMMS_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string config(const std::string& name) {
  return (fs::path(LIMMS_CONFIG_DIR) / name).string();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("limms_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Last JSON object printed on stdout.
nlohmann::json report(const std::string& out) {
  return nlohmann::json::parse(out.substr(out.find('{')));
}

TEST(CliTest, FkAtZeroReachesFullLength) {
  const CliRun r = run("fk --q 0,0,0,0,0,0");
  EXPECT_EQ(r.code, 0);
  const auto at = r.out.find("translation:");
  ASSERT_NE(at, std::string::npos) << r.out;
  double x = 1.0, y = 1.0, z = 0.0;
  std::istringstream(r.out.substr(at + 12)) >> x >> y >> z;
  EXPECT_NEAR(x, 0.0, 1e-12);
  EXPECT_NEAR(y, 0.0, 1e-12);
  EXPECT_NEAR(z, 0.75, 1e-12);
}

TEST(CliTest, FkMirroredFromBaseBMatchesBaseA) {
  const CliRun a = run("fk --q 0.1,0.2,0.3,0.4,0.5,0.6 --base A");
  const CliRun b = run("fk --q -0.6,-0.5,-0.4,-0.3,-0.2,-0.1 --base B");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run("fk --q 0,0,0,0,0").code, 2);
  EXPECT_EQ(run("fk --q 0,0,0,0,0,x").code, 2);
  EXPECT_EQ(run("fk").code, 2);
  EXPECT_EQ(run("teleport").code, 2);
  EXPECT_EQ(run("fk --q 0,0,0,0,0,0 --base C").code, 2);
  EXPECT_EQ(run("dexterity --voxel -1").code, 2);
  EXPECT_EQ(run("run --config /nonexistent.json").code, 2);
}

TEST(CliTest, JointLimitsExitThree) {
  EXPECT_EQ(run("fk --q 0,0,3.5,0,0,0").code, 3);
}

TEST(CliTest, IkRoundTrip) {
  const CliRun ok = run("ik --target 0.3,0.1,0.4,0,1.5,0");
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("converged: true"), std::string::npos);
  EXPECT_EQ(run("ik --target 2,0,0,0,0,0").code, 1);
}

TEST(CliTest, HeavyLiftFailsWithLimitExit) {
  const fs::path dir = scratch_dir("heavy");
  const CliRun r = run("run --config " + config("dual_lift_10kg.json") + " --out " + dir.string());
  EXPECT_EQ(r.code, 4);
  const auto j = report(r.out);
  EXPECT_FALSE(j["pass"].get<bool>());
  EXPECT_GT(j["saturation_count"].get<int>(), 0);
  fs::remove_all(dir);
}

TEST(CliTest, TrotPassesAndWritesOutputs) {
  const fs::path dir = scratch_dir("trot");
  const CliRun r = run("run --config " + config("quadruped_trot.json") + " --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(report(r.out)["pass"].get<bool>());
  for (const char* f : {"quadruped_trot_trace.csv", "quadruped_trot_trace.json",
                        "quadruped_trot_torque.svg", "quadruped_trot_velocity.svg"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  std::ifstream csv(dir / "quadruped_trot_trace.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header.rfind("t_s,module,q1_rad", 0), 0u);
  fs::remove_all(dir);
}

TEST(CliTest, RepeatedRunsAreByteIdentical) {
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  ASSERT_EQ(run("run --config " + config("wheel_balance.json") + " --out " + a.string()).code, 0);
  ASSERT_EQ(run("run --config " + config("wheel_balance.json") + " --out " + b.string()).code, 0);
  const std::string ca = slurp(a / "wheel_balance_trace.csv");
  EXPECT_FALSE(ca.empty());
  EXPECT_EQ(ca, slurp(b / "wheel_balance_trace.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(CliTest, SmallDexterityGrid) {
  const fs::path dir = scratch_dir("dex");
  const CliRun r = run("dexterity --n-orient 2 --voxel 0.1 --origin -0.05,-0.05,0.3 --dims 1,1,2 --out " +
                    dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir / "dexterity.csv"));
  EXPECT_EQ(report(r.out)["n_orient"].get<int>(), 2);
  fs::remove_all(dir);
}

TEST(CliTest, PresetsListed) {
  const CliRun r = run("presets");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("traditional"), std::string::npos);
}

}  // namespace
