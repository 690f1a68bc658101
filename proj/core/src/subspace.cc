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

#include "ftcal/subspace.h"

#include <cmath>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "ftcal/error.h"

namespace ftcal {

Vector6d centroid(const std::vector<RawReading>& samples) {
  if (samples.empty()) {
    throw Error(ErrorKind::kEmptyDataset, "centroid of an empty sample set");
  }
  Vector6d sum = Vector6d::Zero();
  for (const auto& s : samples) sum += s.values;
  return sum / static_cast<double>(samples.size());
}

AffineBasis svd_basis(const std::vector<RawReading>& samples,
                      const Vector6d& r_m, const SubspaceOptions& options) {
  if (samples.size() < 4) {
    throw Error(ErrorKind::kDimensionMismatch,
                "subspace extraction needs at least 4 samples");
  }
  Eigen::MatrixXd centered(6, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    centered.col(static_cast<Eigen::Index>(i)) = samples[i].values - r_m;
  }
  // Thin SVD of a 6 x N matrix; only six singular values ever exist.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU);

  AffineBasis basis;
  basis.r_m = r_m;
  basis.sample_count = samples.size();
  const Eigen::VectorXd& s = svd.singularValues();
  basis.singular_values.head(s.size()) = s;

  const double s1 = basis.singular_values(0);
  const double ratio = s1 > 0.0 ? basis.singular_values(2) / s1 : 0.0;
  if (!(ratio > options.span_threshold)) {
    std::ostringstream msg;
    msg << "readings span fewer than three directions (sigma3/sigma1 = "
        << ratio << ", threshold " << options.span_threshold
        << "); widen the orientation sweep";
    throw Error(ErrorKind::kDegenerateSpan, msg.str());
  }

  basis.U1 = svd.matrixU().leftCols<3>();
  for (int k = 0; k < 3; ++k) {
    Eigen::Index idx = 0;
    basis.U1.col(k).cwiseAbs().maxCoeff(&idx);
    if (basis.U1(idx, k) < 0.0) basis.U1.col(k) *= -1.0;
  }
  return basis;
}

AffineBasis fit_affine_basis(const std::vector<RawReading>& samples,
                             const SubspaceOptions& options) {
  return svd_basis(samples, centroid(samples), options);
}

Vector3d project(const AffineBasis& basis, const RawReading& r) {
  return basis.U1.transpose() * (r.values - basis.r_m);
}

Vector6d lift(const AffineBasis& basis, const Vector3d& lambda) {
  return basis.r_m + basis.U1 * lambda;
}

SubspaceDiagnostics diagnose(const AffineBasis& basis,
                             const std::vector<RawReading>& samples) {
  SubspaceDiagnostics d;
  d.sample_count = samples.size();
  const double s3 = basis.singular_values(2);
  d.sigma_ratio = s3 > 0.0 ? basis.singular_values(3) / s3 : 0.0;
  if (!samples.empty()) {
    double sq = 0.0;
    for (const auto& r : samples) {
      sq += (r.values - lift(basis, project(basis, r))).squaredNorm();
    }
    d.in_plane_rms = std::sqrt(sq / static_cast<double>(samples.size()));
  }
  return d;
}

std::vector<RawReading> raw_readings(const std::vector<Sample>& samples) {
  std::vector<RawReading> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.raw);
  return out;
}

Dataset denoise_dataset(const Dataset& dataset,
                        const SubspaceOptions& options) {
  const AffineBasis basis = fit_affine_basis(raw_readings(dataset.samples), options);
  const auto n = static_cast<Eigen::Index>(dataset.samples.size());
  Eigen::MatrixXd design(n, 4);
  Eigen::MatrixXd g(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Sample& s = dataset.samples[static_cast<std::size_t>(i)];
    design.row(i) << project(basis, s.raw).transpose(), 1.0;
    g.row(i) = s.gravity.values.transpose();
  }
  const Eigen::MatrixXd coeffs = design.colPivHouseholderQr().solve(g);
  const Eigen::MatrixXd g_fit = design * coeffs;

  Dataset out = dataset;
  for (Eigen::Index i = 0; i < n; ++i) {
    Sample& s = out.samples[static_cast<std::size_t>(i)];
    s.raw = RawReading(lift(basis, design.row(i).head<3>().transpose()));
    s.gravity = GravitySample(g_fit.row(i).transpose());
  }
  return out;
}

}  // namespace ftcal
