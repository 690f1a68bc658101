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

#include "ftcal/synth_rig.h"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <Eigen/QR>

#include "ftcal/error.h"

namespace ftcal {
namespace {

Matrix6d random_orthogonal(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix6d a;
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = normal(rng);
  Eigen::HouseholderQR<Matrix6d> qr(a);
  Matrix6d q = qr.householderQ();
  const Matrix6d r = qr.matrixQR();
  for (int k = 0; k < 6; ++k) {
    if (r(k, k) < 0.0) q.col(k) *= -1.0;
  }
  return q;
}

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

std::vector<double> grid(double range, int steps) {
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] =
        -0.5 * range + range * static_cast<double>(i) / (steps - 1);
  }
  return out;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

GroundTruth make_ground_truth(std::uint64_t seed, double conditioning) {
  if (!(conditioning >= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "conditioning must be >= 1");
  }
  std::mt19937_64 rng(seed);
  const Matrix6d u = random_orthogonal(rng);
  const Matrix6d v = random_orthogonal(rng);
  Vector6d sigma;
  for (int k = 0; k < 6; ++k) sigma(k) = std::pow(conditioning, k / 5.0);
  const Matrix6d c = u * sigma.asDiagonal() * v.transpose();

  std::uniform_real_distribution<double> offset_dist(-50.0, 50.0);
  Vector6d offset;
  for (int k = 0; k < 6; ++k) offset(k) = offset_dist(rng);

  std::uniform_real_distribution<double> mass_dist(0.5, 5.0);
  std::uniform_real_distribution<double> radius_dist(0.05, 0.5);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double mass = mass_dist(rng);
  Vector3d dir(normal(rng), normal(rng), normal(rng));
  dir.normalize();
  const Vector3d com = radius_dist(rng) * dir;

  return GroundTruth{CalibrationModel(c, offset), InertialParams(mass, com),
                     kStandardGravity};
}

std::vector<Matrix3d> orientation_sweep(const SweepSpec& spec) {
  if (!(spec.frontback_range_deg > 0.0) || !(spec.lateral_range_deg > 0.0) ||
      spec.frontback_steps < 2 || spec.lateral_steps < 2 ||
      spec.jitter_deg < 0.0) {
    throw Error(ErrorKind::kInvalidArgument,
                "sweep needs positive ranges and at least 2 steps per axis");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> jitter(-spec.jitter_deg, spec.jitter_deg);
  std::vector<Matrix3d> out;
  for (double fb : grid(spec.frontback_range_deg, spec.frontback_steps)) {
    for (double lat : grid(spec.lateral_range_deg, spec.lateral_steps)) {
      const double a = fb + (spec.jitter_deg > 0.0 ? jitter(rng) : 0.0);
      const double b = lat + (spec.jitter_deg > 0.0 ? jitter(rng) : 0.0);
      out.push_back(
          (Eigen::AngleAxisd(deg2rad(a), Vector3d::UnitY()) *
           Eigen::AngleAxisd(deg2rad(b), Vector3d::UnitX()))
              .toRotationMatrix());
    }
  }
  return out;
}

Dataset generate_dataset(const GroundTruth& truth, const AddedMassSpec& added,
                         const SweepSpec& sweep, const NoiseSpec& noise,
                         const std::string& label) {
  if ((noise.raw_sigma.array() < 0.0).any() ||
      (noise.accel_sigma.array() < 0.0).any()) {
    throw Error(ErrorKind::kInvalidArgument, "noise sigmas must be non-negative");
  }
  const Matrix6d c_inv = truth.model.matrix().inverse();
  const Matrix63d m = wrench_map(truth.body) + wrench_map(added);
  const Vector3d g_inertial(0.0, 0.0, -truth.gravity_norm);

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Dataset d;
  d.added_mass = added;
  d.label = label;
  for (const Matrix3d& t : orientation_sweep(sweep)) {
    const Vector3d g = t.transpose() * g_inertial;
    Vector6d r = c_inv * (m * g) + truth.model.offset();
    for (int k = 0; k < 6; ++k) r(k) += noise.raw_sigma(k) * normal(rng);
    Vector3d a = g;
    for (int k = 0; k < 3; ++k) a(k) += noise.accel_sigma(k) * normal(rng);
    d.samples.push_back(Sample{RawReading(r), GravitySample(a)});
  }
  return d;
}

NoiseSpec relative_noise(const GroundTruth& truth, const AddedMassSpec& added,
                         const SweepSpec& sweep, double level,
                         std::uint64_t seed) {
  const Dataset clean = generate_dataset(truth, added, sweep);
  const Eigen::MatrixXd r = clean.raw_matrix();
  const Eigen::MatrixXd centered = r.colwise() - r.rowwise().mean();
  NoiseSpec spec;
  spec.raw_sigma =
      level * (centered.rowwise().squaredNorm() / static_cast<double>(r.cols()))
                  .cwiseSqrt();
  spec.accel_sigma.setConstant(level * truth.gravity_norm);
  spec.seed = seed;
  return spec;
}

std::vector<ScenarioDataset> paper_scenario(const GroundTruth& truth,
                                            const SweepSpec& sweep,
                                            double noise_level,
                                            std::uint64_t seed) {
  constexpr double kSampleMass = 0.51;
  struct Config {
    double mass;
    Vector3d com;
    bool calibration;
  };
  const Config configs[] = {
      {0.0, Vector3d::Zero(), true},
      {kSampleMass, Vector3d(0.30, 0.035, 0.029), true},
      {kSampleMass, Vector3d(0.12, -0.035, 0.063), true},
      {kSampleMass, Vector3d(-0.02, 0.0, 0.045), true},
      {kSampleMass, Vector3d(0.39, -0.035, 0.029), false},
      {kSampleMass, Vector3d(0.21, 0.0, 0.063), false},
      {0.0, Vector3d::Zero(), false},
      {kSampleMass, Vector3d(-0.04, 0.0, 0.063), false},
  };
  std::vector<ScenarioDataset> out;
  std::uint64_t index = 0;
  for (const Config& cfg : configs) {
    const AddedMassSpec added(cfg.mass, cfg.com);
    SweepSpec s = sweep;
    s.seed = derive_seed(seed, 2 * index);
    const NoiseSpec noise =
        relative_noise(truth, added, s, noise_level, derive_seed(seed, 2 * index + 1));
    ++index;
    out.push_back(ScenarioDataset{
        generate_dataset(truth, added, s, noise, "dataset_" + std::to_string(index)),
        cfg.calibration});
  }
  return out;
}

}  // namespace ftcal
