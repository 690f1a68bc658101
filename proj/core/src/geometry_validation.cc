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

#include "ftcal/geometry_validation.h"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "ftcal/calib_estimator.h"
#include "ftcal/error.h"

namespace ftcal {
namespace {

constexpr std::size_t kMinEllipsoidPoints = 10;
constexpr double kCoplanarThreshold = 1e-8;

struct Normalized {
  Vector3d mean;
  double scale = 1.0;
  Eigen::MatrixXd pts;  // N x 3
};

Normalized normalize(const std::vector<Vector3d>& points) {
  if (points.size() < kMinEllipsoidPoints) {
    std::ostringstream msg;
    msg << "ellipsoid fit needs at least " << kMinEllipsoidPoints
        << " points, got " << points.size();
    throw Error(ErrorKind::kDegeneratePointSet, msg.str());
  }
  Normalized n;
  n.mean = Vector3d::Zero();
  for (const auto& p : points) {
    if (!p.allFinite()) {
      throw Error(ErrorKind::kDegeneratePointSet, "non-finite point");
    }
    n.mean += p;
  }
  n.mean /= static_cast<double>(points.size());
  n.pts.resize(static_cast<Eigen::Index>(points.size()), 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    n.pts.row(static_cast<Eigen::Index>(i)) = (points[i] - n.mean).transpose();
  }
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::MatrixXd>(n.pts).singularValues();
  if (!(sv(0) > 0.0) || sv(2) <= kCoplanarThreshold * sv(0)) {
    throw Error(ErrorKind::kDegeneratePointSet,
                "points are coplanar or collinear");
  }
  n.scale = std::sqrt(n.pts.squaredNorm() / static_cast<double>(points.size()));
  n.pts /= n.scale;
  return n;
}

// Right singular vectors of a tall matrix via its R factor.
Eigen::JacobiSVD<Eigen::MatrixXd> tall_svd(const Eigen::MatrixXd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd r =
      qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  return Eigen::JacobiSVD<Eigen::MatrixXd>(r, Eigen::ComputeFullV);
}

// Rows (x^2, y^2, z^2, r2 xy, r2 xz, r2 yz, x, y, z, 1) with r2 = sqrt(2).
// With this scaling the coefficient norm is the Frobenius norm of the
// quadratic form plus the linear and constant parts, which is unchanged by
// rotating the points.
Eigen::MatrixXd quadric_design(const Eigen::MatrixXd& p) {
  const double r2 = std::sqrt(2.0);
  Eigen::MatrixXd d(p.rows(), 10);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double x = p(i, 0), y = p(i, 1), z = p(i, 2);
    d.row(i) << x * x, y * y, z * z, r2 * x * y, r2 * x * z, r2 * y * z, x, y,
        z, 1.0;
  }
  return d;
}

}  // namespace

EllipsoidFit fit_ellipsoid(const std::vector<Vector3d>& points) {
  const Normalized n = normalize(points);
  const Eigen::MatrixXd design = quadric_design(n.pts);
  const auto svd = tall_svd(design);
  const Eigen::VectorXd v = svd.matrixV().col(9);

  const double h = 1.0 / std::sqrt(2.0);
  Matrix3d q;
  q << v(0), h * v(3), h * v(4),
       h * v(3), v(1), h * v(5),
       h * v(4), h * v(5), v(2);
  const Vector3d l = 0.5 * Vector3d(v(6), v(7), v(8));
  const double j = v(9);

  Eigen::FullPivLU<Matrix3d> lu(q);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::kNonEllipsoidQuadric,
                "fitted quadric has a singular quadratic form");
  }
  const Vector3d center_n = -lu.solve(l);
  const double level = center_n.dot(q * center_n) - j;
  if (!(std::abs(level) > 0.0)) {
    throw Error(ErrorKind::kNonEllipsoidQuadric, "fitted quadric is degenerate");
  }
  const Matrix3d shape = q / level;  // (x - c)^T shape (x - c) == 1
  Eigen::SelfAdjointEigenSolver<Matrix3d> eig(shape);
  const Vector3d ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 0.0)) {
    std::ostringstream msg;
    msg << "fitted quadric is not an ellipsoid (eigenvalues " << ev.transpose()
        << ")";
    throw Error(ErrorKind::kNonEllipsoidQuadric, msg.str());
  }

  EllipsoidFit fit;
  fit.center = n.mean + n.scale * center_n;
  // Eigenvalues ascend, so semiaxes 1/sqrt(ev) already descend.
  for (int k = 0; k < 3; ++k) {
    fit.semiaxes(k) = n.scale / std::sqrt(ev(k));
    fit.axes.col(k) = eig.eigenvectors().col(k);
  }
  if (fit.axes.determinant() < 0.0) fit.axes.col(2) *= -1.0;

  const Matrix3d shape_world = shape / (n.scale * n.scale);
  double sq = 0.0;
  for (const auto& p : points) {
    const Vector3d y = p - fit.center;
    const double s = std::sqrt(y.dot(shape_world * y));
    const double radial = s > 0.0 ? y.norm() * std::abs(1.0 - 1.0 / s)
                                  : fit.semiaxes(2);
    sq += radial * radial;
  }
  const double count = static_cast<double>(points.size());
  fit.rms_residual = std::sqrt(sq / count);
  fit.algebraic_residual = svd.singularValues()(9) / std::sqrt(count);
  return fit;
}

SphereFit fit_sphere(const std::vector<Vector3d>& points) {
  const Normalized n = normalize(points);
  const Eigen::MatrixXd design = quadric_design(n.pts);
  // Orthonormal basis of the sphere subfamily (a, a, a, 0, 0, 0, g, h, i, j)
  // inside the 10-coefficient space, so unit norm means the same thing for
  // both fits.
  Eigen::Matrix<double, 10, 5> basis = Eigen::Matrix<double, 10, 5>::Zero();
  basis.block<3, 1>(0, 0).setConstant(1.0 / std::sqrt(3.0));
  for (int k = 0; k < 4; ++k) basis(6 + k, 1 + k) = 1.0;
  const auto svd = tall_svd(design * basis);
  const Eigen::VectorXd v = basis * svd.matrixV().col(4);

  const double a = v(0);
  if (!(std::abs(a) > 0.0)) {
    throw Error(ErrorKind::kNonEllipsoidQuadric, "fitted sphere is a plane");
  }
  const Vector3d center_n = -0.5 * Vector3d(v(6), v(7), v(8)) / a;
  const double r2 = center_n.squaredNorm() - v(9) / a;
  if (!(r2 > 0.0)) {
    throw Error(ErrorKind::kNonEllipsoidQuadric, "fitted sphere is imaginary");
  }
  SphereFit fit;
  fit.center = n.mean + n.scale * center_n;
  fit.radius = n.scale * std::sqrt(r2);
  double sq = 0.0;
  for (const auto& p : points) {
    const double d = (p - fit.center).norm() - fit.radius;
    sq += d * d;
  }
  const double count = static_cast<double>(points.size());
  fit.rms_residual = std::sqrt(sq / count);
  fit.algebraic_residual = svd.singularValues()(4) / std::sqrt(count);
  return fit;
}

SphericityReport sphericity(const std::vector<Vector3d>& forces) {
  const EllipsoidFit fit = fit_ellipsoid(forces);
  SphericityReport rep;
  rep.semiaxes = fit.semiaxes;
  rep.anisotropy = (fit.semiaxes.maxCoeff() - fit.semiaxes.minCoeff()) /
                   fit.semiaxes.mean();
  double sum = 0.0;
  for (const auto& f : forces) sum += f.norm();
  rep.mean_force_norm = sum / static_cast<double>(forces.size());
  return rep;
}

std::vector<Vector3d> calibrated_forces(const Matrix6d& C,
                                        const Vector6d& offset,
                                        const Dataset& dataset) {
  std::vector<Vector3d> out;
  out.reserve(dataset.samples.size());
  for (const auto& s : dataset.samples) {
    out.push_back(C.topRows<3>() * (s.raw.values - offset));
  }
  return out;
}

InertialEstimate fit_inertial(const Matrix6d& C, const Vector6d& offset,
                              const Dataset& dataset,
                              const InertialOptions& options) {
  if (dataset.samples.size() < 4) {
    throw Error(ErrorKind::kRankDeficient,
                "inertial estimation needs at least 4 samples");
  }
  const auto n = static_cast<Eigen::Index>(dataset.samples.size());
  const Matrix18x4d h = build_H();
  Eigen::MatrixXd a(6 * n, 4);
  Eigen::VectorXd b(6 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Sample& s = dataset.samples[static_cast<std::size_t>(i)];
    a.block<6, 4>(6 * i, 0) =
        kronecker(s.gravity.values.transpose(), Matrix6d::Identity()) * h;
    b.segment<6>(6 * i) = C * (s.raw.values - offset);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(options.rank_tolerance);
  if (qr.rank() < 4) {
    throw Error(ErrorKind::kRankDeficient,
                "gravity directions in dataset '" + dataset.label +
                    "' cannot separate mass and center of mass; at least two "
                    "distinct orientations are needed");
  }
  const Eigen::Vector4d u = qr.solve(b);
  InertialEstimate est;
  est.mass = u(0);
  est.first_moment = u.tail<3>();
  if (est.mass > options.mass_floor) est.com = est.first_moment / est.mass;
  est.residual_rms = std::sqrt((a * u - b).squaredNorm() / static_cast<double>(b.size()));
  return est;
}

InertialRecovery estimate_inertial(const Matrix6d& C, const Vector6d& offset,
                                   const Dataset& dataset,
                                   const std::optional<InertialEstimate>& body,
                                   const InertialOptions& options) {
  InertialRecovery rec;
  rec.total = fit_inertial(C, offset, dataset, options);
  rec.mass_truth = dataset.added_mass.mass;
  rec.com_truth = dataset.added_mass.com;
  if (body) {
    const double m = rec.total.mass - body->mass;
    const Vector3d mc = rec.total.first_moment - body->first_moment;
    rec.mass_est = m;
    if (m > options.mass_floor) rec.com_est = mc / m;
  }
  return rec;
}

ValidationReport validation_report(const Matrix6d& C, const Vector6d& offset,
                                   const std::vector<Dataset>& datasets,
                                   const Baseline& baseline,
                                   const InertialOptions& options) {
  if (datasets.empty()) {
    throw Error(ErrorKind::kEmptyDataset, "no validation datasets");
  }
  ValidationReport report;
  report.baseline_source = "none";
  if (baseline.dataset_index) {
    const std::size_t idx = *baseline.dataset_index;
    if (idx >= datasets.size()) {
      throw Error(ErrorKind::kInvalidArgument, "baseline dataset index out of range");
    }
    const Dataset& d = datasets[idx];
    InertialEstimate body = fit_inertial(C, offset, d, options);
    body.mass -= d.added_mass.mass;
    body.first_moment -= d.added_mass.first_moment();
    body.com.reset();
    if (body.mass > options.mass_floor) body.com = body.first_moment / body.mass;
    report.body = body;
    report.baseline_source = "dataset:" + d.label;
  } else if (baseline.body) {
    report.body = baseline.body;
    report.baseline_source = "calibration";
  }

  for (const auto& d : datasets) {
    ValidationRow row;
    row.label = d.label;
    row.sphericity = sphericity(calibrated_forces(C, offset, d));
    row.inertial = estimate_inertial(C, offset, d, report.body, options);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace ftcal
