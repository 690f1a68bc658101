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
#include "ftcal/subspace.h"

namespace ftcal {

/// Stacked linear system rbar = Gamma x with x = (vec(K); lambda_o), where
/// each sample contributes U1^T (r_i - r_m) = K g_i + lambda_o.
struct OffsetSystem {
  Eigen::MatrixXd Gamma;  // 3N x 12, rows (g_i^T kron I3 | I3)
  Eigen::VectorXd rbar;   // 3N
  AffineBasis basis;
};

struct OffsetEstimate {
  Vector6d o_hat = Vector6d::Zero();  // == lift(basis, lambda_o)
  Vector3d lambda_o = Vector3d::Zero();
  Matrix3d K_hat = Matrix3d::Zero();  // estimate of U1^T C^-1 M
  AffineBasis basis;
  double residual_rms = 0.0;
  double condition_number = 0.0;
};

struct OffsetOptions {
  SubspaceOptions subspace;
  /// Gamma condition numbers above this are rank deficient.
  double max_condition = 1e10;
  /// Sample counts below this are accepted but flagged in `low_sample_count`.
  std::size_t recommended_samples = 12;
  /// Hard check on gravity norms; disable only for unit-scaling studies.
  std::optional<GravityBand> gravity_band = GravityBand{};
  /// Pool every dataset into one subspace instead of estimating per dataset.
  bool pooled = false;
};

OffsetSystem build_offset_system(const AffineBasis& basis,
                                 const std::vector<Sample>& samples);

/// Least-squares solve by orthogonal factorization. Throws
/// kRankDeficientSystem when the orientations do not excite every unknown.
OffsetEstimate solve_offset(const OffsetSystem& system,
                            const OffsetOptions& options = {});

/// subspace -> build -> solve on one sample set.
OffsetEstimate estimate_offset(const std::vector<Sample>& samples,
                               const OffsetOptions& options = {});

struct MultiOffsetEstimate {
  /// Mean of the per-dataset estimates, or the pooled estimate.
  Vector6d o_hat = Vector6d::Zero();
  /// Per-channel sample standard deviation across datasets (zero for a
  /// single dataset or pooled mode).
  Vector6d spread = Vector6d::Zero();
  /// One entry per dataset, or a single pooled entry.
  std::vector<OffsetEstimate> estimates;
  bool pooled = false;
  bool low_sample_count = false;
};

/// Offset from several datasets of the same sensor. Per-dataset estimation
/// is the default because different added masses put readings in different
/// subspaces.
MultiOffsetEstimate estimate_offset(const std::vector<Dataset>& datasets,
                                    const OffsetOptions& options = {});

}  // namespace ftcal
