// Copyright 2026 The ftcal Authors.
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

#include <cstdint>
#include <string>
#include <vector>

#include "ftcal/core_model.h"

namespace ftcal {

/// Known sensor model and body used to generate synthetic data.
struct GroundTruth {
  CalibrationModel model;
  InertialParams body;
  double gravity_norm = kStandardGravity;
};

/// Grid of hip-like orientations: a front-back rotation (about the sensor y
/// axis) composed with a lateral rotation (about x), each swept
/// symmetrically around the upright pose.
struct SweepSpec {
  double frontback_range_deg = 70.0;
  double lateral_range_deg = 90.0;
  int frontback_steps = 5;
  int lateral_steps = 10;
  /// Uniform random perturbation added to every grid angle (0 = exact grid).
  double jitter_deg = 0.0;
  std::uint64_t seed = 0;
};

/// Zero-mean Gaussian noise added to generated readings.
struct NoiseSpec {
  Vector6d raw_sigma = Vector6d::Zero();
  Vector3d accel_sigma = Vector3d::Zero();
  std::uint64_t seed = 0;
};

/// Deterministic random C with singular values log-spaced over
/// [1, conditioning], a random offset, and a body with mass in [0.5, 5] kg
/// and |c| <= 0.5 m.
GroundTruth make_ground_truth(std::uint64_t seed, double conditioning);

/// Rotations T (sensor to inertial) over the sweep grid, front-back major.
std::vector<Matrix3d> orientation_sweep(const SweepSpec& spec);

/// One static sample per orientation: g = T^T (0, 0, -|g|),
/// r = C^-1 (M_b + M_a) g + o, each plus noise.
Dataset generate_dataset(const GroundTruth& truth, const AddedMassSpec& added,
                         const SweepSpec& sweep, const NoiseSpec& noise = {},
                         const std::string& label = "synthetic");

/// Noise at `level` times the per-channel standard deviation of the
/// noiseless readings of (truth, added, sweep), and `level` times |g| on
/// the accelerometer.
NoiseSpec relative_noise(const GroundTruth& truth, const AddedMassSpec& added,
                         const SweepSpec& sweep, double level,
                         std::uint64_t seed);

/// Independent stream seed for item `index` of a run seeded with `seed`
/// (splitmix64 of the pair).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct ScenarioDataset {
  Dataset dataset;
  bool calibration = false;  // false: held out for validation
};

/// Eight added-mass configurations mirroring an in-situ leg experiment:
/// datasets 1-4 for calibration (1 without added mass), 5-8 for validation
/// (7 without added mass); the other added masses are 0.51 kg at distinct
/// positions on a beam.
std::vector<ScenarioDataset> paper_scenario(const GroundTruth& truth,
                                            const SweepSpec& sweep,
                                            double noise_level,
                                            std::uint64_t seed);

}  // namespace ftcal
