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

#pragma once

#include <stdexcept>
#include <string>

namespace limms {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration file is missing, malformed, or has a bad value. `field`
// carries the dotted schema name when one applies.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& reason)
      : Error(field.empty() ? reason : field + ": " + reason),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Parameter set violates one of its invariants.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

// A joint vector lies outside the joint limits of its module.
class JointLimitError : public Error {
 public:
  JointLimitError(int joint, double value, double lo, double hi)
      : Error("joint " + std::to_string(joint) + " = " + std::to_string(value) +
              " outside [" + std::to_string(lo) + ", " + std::to_string(hi) +
              "]"),
        joint_(joint) {}

  int joint() const { return joint_; }

 private:
  int joint_;
};

// Planner could not find an IK solution for one of its targets.
class PlanError : public Error {
 public:
  using Error::Error;
};

// A simulation aborted (instability, fall, infeasible footstep).
class SimAbort : public Error {
 public:
  using Error::Error;
};

}  // namespace limms
