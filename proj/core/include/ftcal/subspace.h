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

#include <vector>

#include "ftcal/core_model.h"

namespace ftcal {

/// Three-dimensional affine subspace r = r_m + U1 * lambda holding the
/// static gravitational raw readings.
///
/// Only span(U1) is meaningful. Each column's sign is fixed so that its
/// largest-magnitude entry is positive, which makes results reproducible;
/// everything downstream is invariant to rotations of the basis inside the
/// span.
struct AffineBasis {
  Vector6d r_m = Vector6d::Zero();
  Matrix63d U1 = Matrix63d::Zero();
  /// All six singular values of the centered reading matrix, descending.
  /// Missing trailing values (fewer than six samples) are zero.
  Vector6d singular_values = Vector6d::Zero();
  std::size_t sample_count = 0;

  /// Orthogonal projector U1 U1^T onto the span.
  Matrix6d projector() const { return U1 * U1.transpose(); }
};

struct SubspaceDiagnostics {
  double sigma_ratio = 0.0;   // sigma_4 / sigma_3
  std::size_t sample_count = 0;
  double in_plane_rms = 0.0;  // RMS distance of readings from the subspace
};

struct SubspaceOptions {
  /// Minimum sigma_3 / sigma_1 for a valid 3D span.
  double span_threshold = 1e-6;
};

/// Threshold appropriate for noisy recorded data.
inline constexpr double kNoisySpanThreshold = 1e-3;

/// Mean raw reading. Throws kEmptyDataset.
Vector6d centroid(const std::vector<RawReading>& samples);

/// Left singular basis of the readings centered at `r_m`. Throws
/// kDegenerateSpan when the readings excite fewer than three directions,
/// kDimensionMismatch with fewer than four samples.
AffineBasis svd_basis(const std::vector<RawReading>& samples,
                      const Vector6d& r_m, const SubspaceOptions& options = {});

/// centroid followed by svd_basis.
AffineBasis fit_affine_basis(const std::vector<RawReading>& samples,
                             const SubspaceOptions& options = {});

/// lambda = U1^T (r - r_m).
Vector3d project(const AffineBasis& basis, const RawReading& r);

/// r_m + U1 lambda.
Vector6d lift(const AffineBasis& basis, const Vector3d& lambda);

SubspaceDiagnostics diagnose(const AffineBasis& basis,
                             const std::vector<RawReading>& samples);

std::vector<RawReading> raw_readings(const std::vector<Sample>& samples);

/// Copy of `dataset` with each reading replaced by its projection onto the
/// dataset's affine basis and each gravity sample replaced by its affine
/// least-squares fit in the basis coordinates. Noiseless data is returned
/// unchanged up to rounding. Throws like fit_affine_basis.
Dataset denoise_dataset(const Dataset& dataset,
                        const SubspaceOptions& options = {});

}  // namespace ftcal
