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

#include "least_squares.h"

#include <cmath>
#include <limits>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace ftcal::detail {

Eigen::VectorXd tall_singular_values(const Eigen::MatrixXd& a) {
  if (a.rows() <= a.cols()) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd r =
      qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  return Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues();
}

LeastSquaresSolution solve_least_squares(const Eigen::MatrixXd& a,
                                         const Eigen::VectorXd& b,
                                         bool equilibrate) {
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(a.cols());
  if (equilibrate) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double n = a.col(j).norm();
      if (n > 0.0) scale(j) = 1.0 / n;
    }
  }
  const Eigen::MatrixXd scaled = a * scale.asDiagonal();

  LeastSquaresSolution out;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  out.x = scale.asDiagonal() * qr.solve(b);
  out.singular_values = tall_singular_values(scaled);
  const double smin = out.singular_values(out.singular_values.size() - 1);
  out.condition = smin > 0.0 ? out.singular_values(0) / smin
                             : std::numeric_limits<double>::infinity();
  const Eigen::VectorXd residual = a * out.x - b;
  out.residual_rms =
      b.size() > 0 ? std::sqrt(residual.squaredNorm() / b.size()) : 0.0;
  return out;
}

}  // namespace ftcal::detail
