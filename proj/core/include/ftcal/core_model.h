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

#include <string>
#include <vector>

#include <Eigen/Core>

namespace ftcal {

using Vector3d = Eigen::Vector3d;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix3d = Eigen::Matrix3d;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix63d = Eigen::Matrix<double, 6, 3>;

/// Standard gravity, m/s^2.
inline constexpr double kStandardGravity = 9.80665;

/// Uncalibrated six-channel sensor output, in raw counts.
struct RawReading {
  Vector6d values = Vector6d::Zero();

  RawReading() = default;
  explicit RawReading(const Vector6d& v);
};

/// Gravity acceleration expressed in the sensor frame, m/s^2.
struct GravitySample {
  Vector3d values = Vector3d::Zero();

  GravitySample() = default;
  explicit GravitySample(const Vector3d& v);
};

/// Force (N) and torque (N m) in the sensor frame.
struct Wrench {
  Vector3d force = Vector3d::Zero();
  Vector3d torque = Vector3d::Zero();

  /// Stacked (force; torque).
  Vector6d as_vector() const;
  static Wrench from_vector(const Vector6d& w);
};

/// Mass (kg) and center of mass (m, sensor frame) of a rigid body.
struct InertialParams {
  double mass = 0.0;
  Vector3d com = Vector3d::Zero();

  InertialParams() = default;
  InertialParams(double mass, const Vector3d& com);

  /// First moment of mass, m * c.
  Vector3d first_moment() const { return mass * com; }
};

/// Known sample mass attached to the body for one dataset. A zero mass is
/// the "nothing added" configuration.
using AddedMassSpec = InertialParams;

/// Affine raw-to-wrench model w = C (r - o).
class CalibrationModel {
 public:
  static constexpr double kDefaultRcondFloor = 1e-12;

  /// Throws kInvalidArgument if `matrix` is not finite or its reciprocal
  /// condition number is below `rcond_floor`.
  CalibrationModel(const Matrix6d& matrix, const Vector6d& offset,
                   double rcond_floor = kDefaultRcondFloor);

  const Matrix6d& matrix() const { return matrix_; }
  const Vector6d& offset() const { return offset_; }

 private:
  Matrix6d matrix_;
  Vector6d offset_;
};

struct Sample {
  RawReading raw;
  GravitySample gravity;
};

/// Synchronized static samples recorded under a single added-mass
/// configuration.
struct Dataset {
  std::vector<Sample> samples;
  AddedMassSpec added_mass;
  std::string label;

  /// Raw readings as columns, 6 x N.
  Eigen::MatrixXd raw_matrix() const;
  /// Gravity samples as columns, 3 x N.
  Eigen::MatrixXd gravity_matrix() const;
};

/// Accepted band of gravity norms, nominal * (1 +/- tolerance).
struct GravityBand {
  double nominal = kStandardGravity;
  double tolerance = 0.05;

  bool contains(const Vector3d& g) const;
};

/// Throws kInvalidGravity naming the first sample outside `band`.
void require_gravity_in_band(const std::vector<Sample>& samples,
                             const GravityBand& band);

/// Skew-symmetric matrix with skew(c) * v == c.cross(v).
Matrix3d skew(const Vector3d& c);

/// M(m, c) = m * [I3; skew(c)], the 6x3 map from gravity to the static
/// wrench of a rigid body. Zero mass gives the zero matrix.
Matrix63d wrench_map(const InertialParams& params);

/// C (r - o).
Wrench predict_wrench(const CalibrationModel& model, const RawReading& r);

/// M(m, c) g.
Wrench gravitational_wrench(const InertialParams& params,
                            const GravitySample& g);

/// Column-major stacking, so vec(A X B) == kron(B^T, A) vec(X).
Eigen::VectorXd vec(const Eigen::MatrixXd& x);

/// Inverse of vec for a rows x cols matrix.
Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index rows,
                      Eigen::Index cols);

/// Kronecker product; block (i, j) of the result is a(i, j) * b.
Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Reciprocal 2-norm condition number, sigma_min / sigma_max (0 for a
/// zero matrix).
double reciprocal_condition(const Eigen::MatrixXd& a);

}  // namespace ftcal
