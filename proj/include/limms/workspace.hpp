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

// Dexterity index over a voxel grid: for each voxel center, the fraction of
// a fixed set of orientations for which IK converges.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "limms/errors.hpp"
#include "limms/ik.hpp"

namespace limms {

struct GridSpec {
  Vec3 origin = Vec3::Constant(-0.8);  // min corner
  double voxel_size = 0.05;
  int nx = 32, ny = 32, nz = 32;

  std::size_t size() const {
    return static_cast<std::size_t>(nx) * ny * nz;
  }
  std::size_t index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(nx) * (iy + static_cast<std::size_t>(ny) * iz);
  }
  Vec3 center(std::size_t i) const {
    const auto ix = static_cast<int>(i % nx);
    const auto iy = static_cast<int>((i / nx) % ny);
    const auto iz = static_cast<int>(i / (static_cast<std::size_t>(nx) * ny));
    return origin + voxel_size * Vec3(ix + 0.5, iy + 0.5, iz + 0.5);
  }
  double diagonal() const { return voxel_size * std::sqrt(3.0); }

  bool same_geometry(const GridSpec& o) const {
    return origin == o.origin && voxel_size == o.voxel_size && nx == o.nx &&
           ny == o.ny && nz == o.nz;
  }
};

// Cube of `extent` metres centred on the base.
inline GridSpec centered_grid(double voxel_size, double extent) {
  const int n = static_cast<int>(std::lround(extent / voxel_size));
  GridSpec g;
  g.voxel_size = voxel_size;
  g.nx = g.ny = g.nz = n;
  g.origin = Vec3::Constant(-0.5 * n * voxel_size);
  return g;
}

inline void validate(const GridSpec& g) {
  if (!(g.voxel_size > 0.0)) throw InvalidParams("voxel_size must be > 0");
  if (g.nx < 1 || g.ny < 1 || g.nz < 1) {
    throw InvalidParams("grid dims must be >= 1");
  }
}

struct DexterityGrid {
  GridSpec spec;
  std::vector<double> values;
  int orientation_sample_count = 0;
  std::uint64_t seed = 0;
  std::string preset;
  BaseEnd base = BaseEnd::kEndA;
};

// Radical inverse in base `b` (van der Corput).
inline double radical_inverse(std::uint64_t i, std::uint64_t b) {
  double inv = 1.0 / static_cast<double>(b);
  double f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % b);
    i /= b;
    f *= inv;
  }
  return r;
}

// `n` rotations from a Halton(2,3,5) sequence pushed through Shoemake's
// uniform-quaternion map. The same list is used at every voxel.
inline std::vector<Mat3> orientation_samples(int n) {
  std::vector<Mat3> out;
  out.reserve(n);
  for (int k = 1; k <= n; ++k) {
    const double u1 = radical_inverse(k, 2);
    const double u2 = radical_inverse(k, 3);
    const double u3 = radical_inverse(k, 5);
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    const Eigen::Quaterniond quat(b * std::cos(2.0 * M_PI * u3),
                                  a * std::sin(2.0 * M_PI * u2),
                                  a * std::cos(2.0 * M_PI * u2),
                                  b * std::sin(2.0 * M_PI * u3));
    out.push_back(quat.normalized().toRotationMatrix());
  }
  return out;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t voxel_seed(std::uint64_t seed, std::size_t voxel, int k) {
  return splitmix64(splitmix64(seed ^ splitmix64(voxel)) + static_cast<std::uint64_t>(k));
}

// Dexterity of a single point: converged orientations / orientations.
inline double point_dexterity(const ModuleParams& p, BaseEnd base,
                              const Vec3& point,
                              const std::vector<Mat3>& orientations,
                              IkSettings settings, std::uint64_t seed,
                              std::size_t voxel) {
  int reached = 0;
  for (std::size_t k = 0; k < orientations.size(); ++k) {
    settings.seed = voxel_seed(seed, voxel, static_cast<int>(k));
    const IkResult r =
        solve_ik(p, Pose{orientations[k], point}, base, settings);
    reached += r.converged ? 1 : 0;
  }
  return static_cast<double>(reached) / static_cast<double>(orientations.size());
}

// Voxels are split across `threads` workers (0 = hardware concurrency).
// Every voxel draws its IK seeds from (seed, voxel index, orientation index),
// so the result does not depend on the thread count.
inline DexterityGrid dexterity_map(const ModuleParams& p, BaseEnd base,
                                   const GridSpec& spec, int n_orientations,
                                   const IkSettings& settings,
                                   std::uint64_t seed, unsigned threads = 1) {
  if (n_orientations < 1) throw InvalidParams("n_orientations must be >= 1");
  validate(spec);
  validate(settings);
  validate(p);

  DexterityGrid grid;
  grid.spec = spec;
  grid.values.assign(spec.size(), 0.0);
  grid.orientation_sample_count = n_orientations;
  grid.seed = seed;
  grid.preset = p.preset;
  grid.base = base;

  const std::vector<Mat3> orientations = orientation_samples(n_orientations);
  // Nothing past the chain-length bound can be reached.
  const double cutoff = reach_bound(p) + settings.pos_tol;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < spec.size(); i = next++) {
      const Vec3 c = spec.center(i);
      if (c.norm() > cutoff) continue;
      grid.values[i] =
          point_dexterity(p, base, c, orientations, settings, seed, i);
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return grid;
}

struct RegionMeans {
  double center_axis = 0.0;
  double outer_shell = 0.0;
  double bulk = 0.0;
  int center_axis_count = 0;
  int outer_shell_count = 0;
  int bulk_count = 0;
};

enum class Region { kNone, kCenterAxis, kOuterShell, kBulk };

// Region of voxel `i` for a workspace of radius `reach`:
//   center axis  - within one voxel of the base z axis
//   outer shell  - centre distance in [0.8 reach, reach + diagonal]
//   bulk         - everything else inside reach + diagonal
inline Region classify_voxel(const GridSpec& g, std::size_t i, double reach) {
  const Vec3 c = g.center(i);
  const double r = c.norm();
  if (r > reach + g.diagonal()) return Region::kNone;
  if (c.head<2>().norm() <= g.voxel_size) return Region::kCenterAxis;
  if (r >= 0.8 * reach) return Region::kOuterShell;
  return Region::kBulk;
}

inline RegionMeans region_means(const DexterityGrid& g, double reach) {
  RegionMeans m;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double v = g.values[i];
    switch (classify_voxel(g.spec, i, reach)) {
      case Region::kCenterAxis: m.center_axis += v; ++m.center_axis_count; break;
      case Region::kOuterShell: m.outer_shell += v; ++m.outer_shell_count; break;
      case Region::kBulk: m.bulk += v; ++m.bulk_count; break;
      case Region::kNone: break;
    }
  }
  if (m.center_axis_count) m.center_axis /= m.center_axis_count;
  if (m.outer_shell_count) m.outer_shell /= m.outer_shell_count;
  if (m.bulk_count) m.bulk /= m.bulk_count;
  return m;
}

// Fraction of center-axis voxels with |z| in [0.25 reach, 0.75 reach] whose
// dexterity is nonzero. This band stays clear of both the base and the reach
// boundary above and below the base.
inline double mid_height_axis_coverage(const DexterityGrid& g, double reach) {
  int total = 0, nonzero = 0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    if (classify_voxel(g.spec, i, reach) != Region::kCenterAxis) continue;
    const double z = std::abs(g.spec.center(i).z());
    if (z < 0.25 * reach || z > 0.75 * reach) continue;
    ++total;
    if (g.values[i] > 0.0) ++nonzero;
  }
  return total ? static_cast<double>(nonzero) / total : 0.0;
}

struct GridComparison {
  RegionMeans a;
  RegionMeans b;
  double reach = 0.0;
  // a - b per voxel.
  std::vector<double> difference;
};

// Regions are sized from the furthest nonzero voxel in either grid.
inline GridComparison compare_grids(const DexterityGrid& a,
                                    const DexterityGrid& b) {
  if (!a.spec.same_geometry(b.spec) || a.values.size() != b.values.size()) {
    throw InvalidParams("compare_grids: grid geometry mismatch");
  }
  GridComparison out;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] > 0.0 || b.values[i] > 0.0) {
      out.reach = std::max(out.reach, a.spec.center(i).norm());
    }
  }
  out.a = region_means(a, out.reach);
  out.b = region_means(b, out.reach);
  out.difference.resize(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    out.difference[i] = a.values[i] - b.values[i];
  }
  return out;
}

inline void write_grid_csv(const DexterityGrid& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "x_m,y_m,z_m,dexterity\n";
  char line[128];
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const Vec3 c = g.spec.center(i);
    std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f,%.9g\n", c.x(), c.y(),
                  c.z(), g.values[i]);
    out << line;
  }
}

inline nlohmann::ordered_json grid_metadata(const DexterityGrid& g) {
  nlohmann::ordered_json j;
  j["preset"] = g.preset;
  j["base"] = to_string(g.base);
  j["origin_m"] = {g.spec.origin.x(), g.spec.origin.y(), g.spec.origin.z()};
  j["voxel_m"] = g.spec.voxel_size;
  j["dims"] = {g.spec.nx, g.spec.ny, g.spec.nz};
  j["n_orient"] = g.orientation_sample_count;
  j["seed"] = g.seed;
  return j;
}

}  // namespace limms
