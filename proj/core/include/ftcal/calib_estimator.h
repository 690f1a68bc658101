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

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ftcal/core_model.h"
#include "ftcal/error.h"
#include "ftcal/subspace.h"

namespace ftcal {

using Matrix18x4d = Eigen::Matrix<double, 18, 4>;

/// Number of unknowns: vec(C) (36, column-major), m, m*c (3).
inline constexpr Eigen::Index kCalibUnknowns = 40;

/// Signed selection matrix with vec(M(m, c)) == H * (m, m c1, m c2, m c3).
Matrix18x4d build_H();

/// Stacked system Theta x = beta over all datasets. Block j contributes
/// (R_j^T kron I6 | -(G_j^T kron I6) H) and vec(M_a^j G_j), with R_j the
/// offset-free readings.
struct CalibSystem {
  Eigen::MatrixXd Theta;  // 6 N_T x 40
  Eigen::VectorXd beta;   // 6 N_T
  std::vector<std::size_t> dataset_sizes;
  std::vector<AddedMassSpec> added_masses;
};

CalibSystem build_calib_system(const std::vector<Dataset>& datasets,
                               const Vector6d& offset);

struct IdentifiabilityDiagnostics {
  std::size_t n_datasets = 0;
  bool nd_ok = false;           // at least three datasets
  bool distinct_masses = false; // not every added-mass spec is the same
  int rank = 0;                 // numerical rank of Theta
  bool full_rank = false;       // rank == 40
  double condition = 0.0;       // sigma_1 / sigma_40
  Eigen::VectorXd singular_values;

  bool identifiable() const { return nd_ok && distinct_masses && full_rank; }
};

struct CalibOptions {
  /// Singular values below sigma_1 * rank_tolerance do not count to the rank.
  double rank_tolerance = 1e-10;
  /// Above this condition number the estimate carries `ill_conditioned`.
  double ill_condition_threshold = 1e10;
  /// Smallest mass for which c = (m c) / m is reported.
  double mass_floor = 1e-6;
  /// Tolerances (kg, m) under which two added-mass specs count as equal.
  double mass_equal_tol = 1e-9;
  double com_equal_tol = 1e-9;
  /// Scale Theta's columns to unit norm before solving.
  bool equilibrate = true;
  std::optional<GravityBand> gravity_band = GravityBand{};
  /// estimate_calibration runs denoise_dataset on each dataset first. Plain
  /// least squares on noisy readings and gravity is biased, and the bias
  /// does not shrink with more samples. Datasets whose span is degenerate
  /// are used as recorded.
  bool denoise = true;
  SubspaceOptions subspace;
};

IdentifiabilityDiagnostics check_identifiability(const CalibSystem& system,
                                                 std::size_t n_datasets,
                                                 const CalibOptions& options = {});

struct CalibEstimate {
  Matrix6d C_hat = Matrix6d::Zero();
  double mass = 0.0;
  Vector3d first_moment = Vector3d::Zero();  // m c
  std::optional<Vector3d> com;               // empty when mass <= floor
  double residual_rms = 0.0;
  double theta_condition = 0.0;
  int theta_rank = 0;
  bool ill_conditioned = false;
  std::size_t denoised_datasets = 0;
  IdentifiabilityDiagnostics diagnostics;
};

/// Thrown by solve_calibration when the system has no unique solution.
class NotIdentifiableError : public Error {
 public:
  NotIdentifiableError(const std::string& message,
                       IdentifiabilityDiagnostics diagnostics)
      : Error(ErrorKind::kNotIdentifiable, message),
        diagnostics_(std::move(diagnostics)) {}

  const IdentifiabilityDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  IdentifiabilityDiagnostics diagnostics_;
};

/// Least-squares estimate of C and the body's (m, m c). Throws
/// NotIdentifiableError when fewer than three datasets, identical added
/// masses, or a rank-deficient Theta make the solution non-unique. An
/// ill-conditioned system still returns, with `ill_conditioned` set.
CalibEstimate solve_calibration(const CalibSystem& system,
                                const CalibOptions& options = {});

/// Optional denoising, then build_calib_system -> solve_calibration.
CalibEstimate estimate_calibration(const std::vector<Dataset>& datasets,
                                   const Vector6d& offset,
                                   const CalibOptions& options = {});

}  // namespace ftcal
