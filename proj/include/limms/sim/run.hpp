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

// Scenario dispatch for config-driven runs.

#pragma once

#include "limms/config.hpp"
#include "limms/sim/balance.hpp"
#include "limms/sim/dual_lift.hpp"
#include "limms/sim/trace.hpp"
#include "limms/sim/trot.hpp"

namespace limms::sim {

// Runs a trace-producing scenario. dexterity_map configs go through the
// workspace module instead.
inline SimResult run_scenario(const ScenarioConfig& c) {
  switch (c.scenario) {
    case ScenarioKind::kDualLift: return run_dual_lift(c);
    case ScenarioKind::kQuadrupedTrot: return run_quadruped_trot(c);
    case ScenarioKind::kWheelBalance: return run_wheel_balance(c);
    case ScenarioKind::kDexterityMap: break;
  }
  throw ConfigError("scenario", "dexterity_map does not produce a trace");
}

}  // namespace limms::sim
