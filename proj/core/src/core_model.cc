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

#include "ftcal/core_model.h"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "ftcal/error.h"

namespace ftcal {

RawReading::RawReading(const Vector6d& v) : values(v) {
  if (!v.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "raw reading is not finite");
  }
}

GravitySample::GravitySample(const Vector3d& v) : values(v) {
  if (!v.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "gravity sample is not finite");
  }
}

Vector6d Wrench::as_vector() const {
  Vector6d w;
  w << force, torque;
  return w;
}

Wrench Wrench::from_vector(const Vector6d& w) {
  return Wrench{w.head<3>(), w.tail<3>()};
}

InertialParams::InertialParams(double mass_in, const Vector3d& com_in)
    : mass(mass_in), com(com_in) {
  if (!std::isfinite(mass) || mass < 0.0 || !com.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument,
                "inertial parameters need a finite non-negative mass and a "
                "finite center of mass");
  }
}

CalibrationModel::CalibrationModel(const Matrix6d& matrix,
                                   const Vector6d& offset, double rcond_floor)
    : matrix_(matrix), offset_(offset) {
  if (!matrix.allFinite() || !offset.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument,
                "calibration model entries must be finite");
  }
  const double rcond = reciprocal_condition(matrix);
  if (rcond < rcond_floor) {
    std::ostringstream msg;
    msg << "calibration matrix is not invertible (rcond " << rcond << " < "
        << rcond_floor << ")";
    throw Error(ErrorKind::kInvalidArgument, msg.str());
  }
}

Eigen::MatrixXd Dataset::raw_matrix() const {
  Eigen::MatrixXd out(6, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = samples[i].raw.values;
  }
  return out;
}

Eigen::MatrixXd Dataset::gravity_matrix() const {
  Eigen::MatrixXd out(3, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = samples[i].gravity.values;
  }
  return out;
}

bool GravityBand::contains(const Vector3d& g) const {
  return std::abs(g.norm() - nominal) <= tolerance * nominal;
}

void require_gravity_in_band(const std::vector<Sample>& samples,
                             const GravityBand& band) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Vector3d& g = samples[i].gravity.values;
    if (!band.contains(g)) {
      std::ostringstream msg;
      msg << "sample " << i << " has gravity norm " << g.norm()
          << " outside " << band.nominal << " +/- "
          << band.tolerance * 100.0 << "%";
      throw Error(ErrorKind::kInvalidGravity, msg.str());
    }
  }
}

Matrix3d skew(const Vector3d& c) {
  Matrix3d s;
  s << 0.0, -c.z(), c.y(),
       c.z(), 0.0, -c.x(),
       -c.y(), c.x(), 0.0;
  return s;
}

Matrix63d wrench_map(const InertialParams& params) {
  Matrix63d m;
  m.topRows<3>() = params.mass * Matrix3d::Identity();
  m.bottomRows<3>() = params.mass * skew(params.com);
  return m;
}

Wrench predict_wrench(const CalibrationModel& model, const RawReading& r) {
  return Wrench::from_vector(model.matrix() * (r.values - model.offset()));
}

Wrench gravitational_wrench(const InertialParams& params,
                            const GravitySample& g) {
  return Wrench::from_vector(wrench_map(params) * g.values);
}

Eigen::VectorXd vec(const Eigen::MatrixXd& x) {
  // Eigen's default storage is column-major, so the buffer is already vec(x).
  return Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
}

Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index rows,
                      Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw Error(ErrorKind::kDimensionMismatch,
                "unvec: vector length does not match rows * cols");
  }
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double reciprocal_condition(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
  const double smax = s(0);
  if (smax == 0.0) return 0.0;
  return s(s.size() - 1) / smax;
}

}  // namespace ftcal
