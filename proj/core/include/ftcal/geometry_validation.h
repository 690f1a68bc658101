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
#include <string>
#include <vector>

#include "ftcal/core_model.h"

namespace ftcal {

struct EllipsoidFit {
  Vector3d center = Vector3d::Zero();
  Vector3d semiaxes = Vector3d::Zero();  // descending
  Matrix3d axes = Matrix3d::Identity();  // columns pair with semiaxes, det +1
  /// RMS radial distance from the points to the surface, in point units.
  double rms_residual = 0.0;
  /// RMS algebraic residual of the unit-norm quadric in normalized
  /// coordinates; the quantity the fit minimizes.
  double algebraic_residual = 0.0;
};

struct SphereFit {
  Vector3d center = Vector3d::Zero();
  double radius = 0.0;
  double rms_residual = 0.0;
  double algebraic_residual = 0.0;
};

/// Direct algebraic least-squares quadric fit with unit-norm coefficients,
/// accepted only when the quadratic form is positive definite.
///
/// Points are centered and scaled to unit RMS radius before fitting. Throws
/// kDegeneratePointSet for fewer than 10 or coplanar points and
/// kNonEllipsoidQuadric when the best quadric is not an ellipsoid.
EllipsoidFit fit_ellipsoid(const std::vector<Vector3d>& points);

/// Sphere fit in the same normalized algebraic setting as fit_ellipsoid,
/// so the two algebraic residuals are directly comparable.
SphereFit fit_sphere(const std::vector<Vector3d>& points);

struct SphericityReport {
  Vector3d semiaxes = Vector3d::Zero();  // N
  double anisotropy = 0.0;               // (max - min) / mean
  double mean_force_norm = 0.0;          // N
  double mean_semiaxis() const { return semiaxes.mean(); }
};

SphericityReport sphericity(const std::vector<Vector3d>& forces);

/// Mass and first moment explaining a dataset's calibrated wrenches.
struct InertialEstimate {
  double mass = 0.0;
  Vector3d first_moment = Vector3d::Zero();
  std::optional<Vector3d> com;
  double residual_rms = 0.0;
};

struct InertialRecovery {
  /// Total load seen by the sensor (body plus added mass).
  InertialEstimate total;
  /// Added-mass estimate, total minus a baseline body estimate.
  std::optional<double> mass_est;
  std::optional<Vector3d> com_est;
  /// Declared added mass of the dataset.
  double mass_truth = 0.0;
  Vector3d com_truth = Vector3d::Zero();
};

struct InertialOptions {
  double mass_floor = 1e-6;
  double rank_tolerance = 1e-10;
};

/// Least-squares fit of M(m, c) g_i = C (r_i - offset) over (m, m c).
/// Throws kRankDeficient when the gravity directions cannot separate the
/// unknowns (fewer than two distinct directions).
InertialEstimate fit_inertial(const Matrix6d& C, const Vector6d& offset,
                              const Dataset& dataset,
                              const InertialOptions& options = {});

/// fit_inertial plus, given the body's (m, m c), the added-mass estimate
/// m_a = m_total - m_body with its COM from the first-moment difference.
InertialRecovery estimate_inertial(
    const Matrix6d& C, const Vector6d& offset, const Dataset& dataset,
    const std::optional<InertialEstimate>& body = std::nullopt,
    const InertialOptions& options = {});

/// Forces C(r - o) (first three rows) for every sample of the dataset.
std::vector<Vector3d> calibrated_forces(const Matrix6d& C,
                                        const Vector6d& offset,
                                        const Dataset& dataset);

/// Where the body estimate used for added-mass differencing comes from.
struct Baseline {
  /// Body (m, m c) supplied directly, e.g. from the calibration.
  std::optional<InertialEstimate> body;
  /// Index of a dataset in the report whose total minus its declared added
  /// mass gives the body. Takes precedence over `body`.
  std::optional<std::size_t> dataset_index;
};

struct ValidationRow {
  std::string label;
  SphericityReport sphericity;
  InertialRecovery inertial;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  std::optional<InertialEstimate> body;
  std::string baseline_source;  // "none", "calibration" or "dataset:<label>"
};

/// Sphericity and inertial recovery for every dataset. Throws
/// kEmptyDataset for an empty list.
ValidationReport validation_report(const Matrix6d& C, const Vector6d& offset,
                                   const std::vector<Dataset>& datasets,
                                   const Baseline& baseline = {},
                                   const InertialOptions& options = {});

}  // namespace ftcal
