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

#include <Eigen/Core>

namespace ftcal::detail {

struct LeastSquaresSolution {
  Eigen::VectorXd x;
  // Singular values of the (possibly equilibrated) system, descending.
  Eigen::VectorXd singular_values;
  double condition = 0.0;
  double residual_rms = 0.0;
};

// Singular values of a tall matrix, computed from the R factor of its QR
// decomposition.
Eigen::VectorXd tall_singular_values(const Eigen::MatrixXd& a);

// min ||a x - b|| by column-pivoted Householder QR. With `equilibrate`, the
// columns are scaled to unit norm before factoring and the solution is
// scaled back; `singular_values` and `condition` then describe the scaled
// system.
LeastSquaresSolution solve_least_squares(const Eigen::MatrixXd& a,
                                         const Eigen::VectorXd& b,
                                         bool equilibrate);

}  // namespace ftcal::detail
