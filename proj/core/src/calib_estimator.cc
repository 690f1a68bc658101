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

#include "ftcal/calib_estimator.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "least_squares.h"

namespace ftcal {

Matrix18x4d build_H() {
  // Rows index vec(M) of the 6x3 matrix m [I3; skew(c)] (column-major),
  // columns index (m, mc1, mc2, mc3).
  Matrix18x4d h = Matrix18x4d::Zero();
  h(0, 0) = 1.0;
  h(4, 3) = 1.0;
  h(5, 2) = -1.0;
  h(7, 0) = 1.0;
  h(9, 3) = -1.0;
  h(11, 1) = 1.0;
  h(14, 0) = 1.0;
  h(15, 2) = 1.0;
  h(16, 1) = -1.0;
  return h;
}

CalibSystem build_calib_system(const std::vector<Dataset>& datasets,
                               const Vector6d& offset) {
  if (datasets.empty()) {
    throw Error(ErrorKind::kEmptyDataset, "no datasets for calibration");
  }
  Eigen::Index total = 0;
  for (const auto& d : datasets) {
    if (d.samples.empty()) {
      throw Error(ErrorKind::kEmptyDataset,
                  "dataset '" + d.label + "' has no samples");
    }
    total += static_cast<Eigen::Index>(d.samples.size());
  }
  if (!offset.allFinite()) {
    throw Error(ErrorKind::kDimensionMismatch, "offset is not finite");
  }

  CalibSystem sys;
  sys.Theta.resize(6 * total, kCalibUnknowns);
  sys.beta.resize(6 * total);
  const Matrix18x4d h = build_H();
  const Matrix6d eye6 = Matrix6d::Identity();

  Eigen::Index row = 0;
  for (const auto& d : datasets) {
    const Eigen::Index n = static_cast<Eigen::Index>(d.samples.size());
    const Eigen::MatrixXd r = d.raw_matrix().colwise() - offset;
    const Eigen::MatrixXd g = d.gravity_matrix();
    sys.Theta.block(row, 0, 6 * n, 36) = kronecker(r.transpose(), eye6);
    sys.Theta.block(row, 36, 6 * n, 4) = -kronecker(g.transpose(), eye6) * h;
    sys.beta.segment(row, 6 * n) = vec(wrench_map(d.added_mass) * g);
    row += 6 * n;
    sys.dataset_sizes.push_back(d.samples.size());
    sys.added_masses.push_back(d.added_mass);
  }
  return sys;
}

namespace {

bool all_masses_equal(const std::vector<AddedMassSpec>& specs,
                      const CalibOptions& options) {
  for (std::size_t i = 1; i < specs.size(); ++i) {
    const bool same =
        std::abs(specs[i].mass - specs[0].mass) <= options.mass_equal_tol &&
        (specs[i].com - specs[0].com).cwiseAbs().maxCoeff() <=
            options.com_equal_tol;
    if (!same) return false;
  }
  return true;
}

}  // namespace

IdentifiabilityDiagnostics check_identifiability(const CalibSystem& system,
                                                 std::size_t n_datasets,
                                                 const CalibOptions& options) {
  IdentifiabilityDiagnostics diag;
  diag.n_datasets = n_datasets;
  diag.nd_ok = n_datasets >= 3;
  diag.distinct_masses = !all_masses_equal(system.added_masses, options);
  diag.singular_values = detail::tall_singular_values(system.Theta);
  const auto& s = diag.singular_values;
  const double s1 = s.size() > 0 ? s(0) : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > s1 * options.rank_tolerance) ++diag.rank;
  }
  diag.full_rank = diag.rank == kCalibUnknowns;
  const double smin = s.size() == kCalibUnknowns ? s(kCalibUnknowns - 1) : 0.0;
  diag.condition = smin > 0.0 ? s1 / smin : std::numeric_limits<double>::infinity();
  return diag;
}

CalibEstimate solve_calibration(const CalibSystem& system,
                                const CalibOptions& options) {
  if (system.Theta.cols() != kCalibUnknowns ||
      system.Theta.rows() != system.beta.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "malformed calibration system");
  }
  auto diag = check_identifiability(system, system.dataset_sizes.size(), options);
  if (!diag.identifiable()) {
    std::ostringstream msg;
    if (!diag.nd_ok) {
      msg << "calibration needs at least 3 datasets with distinct added "
             "masses (N_D >= 3), got "
          << diag.n_datasets;
    } else if (!diag.distinct_masses) {
      msg << "all " << diag.n_datasets
          << " datasets share the same added mass; at least 3 distinct "
             "added-mass configurations (N_D >= 3) are required";
    } else {
      msg << "Theta has rank " << diag.rank << " < 40; add datasets with "
             "different added-mass placements or widen the orientation sweep";
    }
    throw NotIdentifiableError(msg.str(), std::move(diag));
  }

  const auto sol = detail::solve_least_squares(system.Theta, system.beta,
                                               options.equilibrate);
  CalibEstimate est;
  est.C_hat = Eigen::Map<const Matrix6d>(sol.x.data());
  est.mass = sol.x(36);
  est.first_moment = sol.x.segment<3>(37);
  if (est.mass > options.mass_floor) est.com = est.first_moment / est.mass;
  est.residual_rms = sol.residual_rms;
  est.theta_condition = diag.condition;
  est.theta_rank = diag.rank;
  est.ill_conditioned = diag.condition > options.ill_condition_threshold;
  est.diagnostics = std::move(diag);
  return est;
}

CalibEstimate estimate_calibration(const std::vector<Dataset>& datasets,
                                   const Vector6d& offset,
                                   const CalibOptions& options) {
  if (options.gravity_band) {
    for (const auto& d : datasets) {
      require_gravity_in_band(d.samples, *options.gravity_band);
    }
  }
  if (!options.denoise) {
    return solve_calibration(build_calib_system(datasets, offset), options);
  }
  std::vector<Dataset> cleaned;
  cleaned.reserve(datasets.size());
  std::size_t denoised = 0;
  for (const auto& d : datasets) {
    try {
      cleaned.push_back(denoise_dataset(d, options.subspace));
      ++denoised;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kDegenerateSpan &&
          e.kind() != ErrorKind::kDimensionMismatch) {
        throw;
      }
      cleaned.push_back(d);
    }
  }
  CalibEstimate est = solve_calibration(build_calib_system(cleaned, offset), options);
  est.denoised_datasets = denoised;
  return est;
}

}  // namespace ftcal
