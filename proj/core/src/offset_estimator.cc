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

#include "ftcal/offset_estimator.h"

#include <cmath>
#include <sstream>

#include "ftcal/error.h"
#include "least_squares.h"

namespace ftcal {

OffsetSystem build_offset_system(const AffineBasis& basis,
                                 const std::vector<Sample>& samples) {
  if (samples.size() < 4) {
    throw Error(ErrorKind::kDimensionMismatch,
                "offset system needs at least 4 samples for 12 unknowns");
  }
  const auto n = static_cast<Eigen::Index>(samples.size());
  OffsetSystem sys;
  sys.basis = basis;
  sys.Gamma.resize(3 * n, 12);
  sys.rbar.resize(3 * n);
  const Eigen::Matrix3d eye = Eigen::Matrix3d::Identity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Sample& s = samples[static_cast<std::size_t>(i)];
    sys.rbar.segment<3>(3 * i) = basis.U1.transpose() * (s.raw.values - basis.r_m);
    sys.Gamma.block<3, 9>(3 * i, 0) =
        kronecker(s.gravity.values.transpose(), eye);
    sys.Gamma.block<3, 3>(3 * i, 9) = eye;
  }
  return sys;
}

OffsetEstimate solve_offset(const OffsetSystem& system,
                            const OffsetOptions& options) {
  if (system.Gamma.cols() != 12 || system.Gamma.rows() != system.rbar.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "malformed offset system");
  }
  const auto sol = detail::solve_least_squares(system.Gamma, system.rbar,
                                               /*equilibrate=*/false);
  if (!(sol.condition <= options.max_condition)) {
    std::ostringstream msg;
    msg << "offset system condition " << sol.condition << " exceeds "
        << options.max_condition
        << "; the gravity directions do not vary enough, widen the "
           "orientation sweep";
    throw Error(ErrorKind::kRankDeficientSystem, msg.str());
  }
  OffsetEstimate est;
  est.basis = system.basis;
  est.K_hat = Eigen::Map<const Matrix3d>(sol.x.data());
  est.lambda_o = sol.x.tail<3>();
  est.o_hat = lift(system.basis, est.lambda_o);
  est.residual_rms = sol.residual_rms;
  est.condition_number = sol.condition;
  return est;
}

OffsetEstimate estimate_offset(const std::vector<Sample>& samples,
                               const OffsetOptions& options) {
  if (samples.empty()) {
    throw Error(ErrorKind::kEmptyDataset, "no samples for offset estimation");
  }
  if (options.gravity_band) require_gravity_in_band(samples, *options.gravity_band);
  const AffineBasis basis =
      fit_affine_basis(raw_readings(samples), options.subspace);
  return solve_offset(build_offset_system(basis, samples), options);
}

MultiOffsetEstimate estimate_offset(const std::vector<Dataset>& datasets,
                                    const OffsetOptions& options) {
  if (datasets.empty()) {
    throw Error(ErrorKind::kEmptyDataset, "no datasets for offset estimation");
  }
  MultiOffsetEstimate out;
  out.pooled = options.pooled;
  if (options.pooled) {
    std::vector<Sample> all;
    for (const auto& d : datasets) {
      all.insert(all.end(), d.samples.begin(), d.samples.end());
    }
    out.low_sample_count = all.size() < options.recommended_samples;
    out.estimates.push_back(estimate_offset(all, options));
    out.o_hat = out.estimates.front().o_hat;
    return out;
  }

  for (const auto& d : datasets) {
    out.low_sample_count |= d.samples.size() < options.recommended_samples;
    out.estimates.push_back(estimate_offset(d.samples, options));
  }
  Vector6d sum = Vector6d::Zero();
  for (const auto& e : out.estimates) sum += e.o_hat;
  const double n = static_cast<double>(out.estimates.size());
  out.o_hat = sum / n;
  if (out.estimates.size() > 1) {
    Vector6d sq = Vector6d::Zero();
    for (const auto& e : out.estimates) {
      sq += (e.o_hat - out.o_hat).cwiseAbs2();
    }
    out.spread = (sq / (n - 1.0)).cwiseSqrt();
  }
  return out;
}

}  // namespace ftcal
