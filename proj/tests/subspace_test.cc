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

#include <algorithm>
#include <random>

#include <Eigen/QR>
#include <gtest/gtest.h>

#include "ftcal/error.h"
#include "ftcal/geometry_validation.h"
#include "support/test_util.h"

namespace ftcal {
namespace {

// Orthonormal basis of span(C^-1 M) computed from the ground truth alone.
Matrix6d truth_projector(const GroundTruth& truth, const AddedMassSpec& added) {
  const Matrix63d span = truth.model.matrix().inverse() *
                         (wrench_map(truth.body) + wrench_map(added));
  Eigen::HouseholderQR<Matrix63d> qr(span);
  const Matrix63d q = qr.householderQ() * Matrix63d::Identity();
  return q * q.transpose();
}

std::vector<RawReading> synthetic_readings(std::uint64_t seed) {
  const GroundTruth truth = make_ground_truth(seed, 10.0);
  return raw_readings(
      generate_dataset(truth, AddedMassSpec(), testing::default_sweep()).samples);
}

TEST(CentroidTest, MeanOfReadings) {
  const std::vector<RawReading> two = {RawReading(Vector6d::Constant(1.0)),
                                       RawReading(Vector6d::Constant(3.0))};
  EXPECT_TRUE(centroid(two).isApprox(Vector6d::Constant(2.0)));
  Vector6d r;
  r << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(centroid({RawReading(r)}), r);
}

TEST(CentroidTest, EmptyThrows) {
  try {
    centroid({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyDataset);
  }
}

TEST(CentroidTest, LiesInTheAffineSubspace) {
  const GroundTruth truth = make_ground_truth(21, 10.0);
  const Dataset d = generate_dataset(truth, AddedMassSpec(), testing::default_sweep());
  const Vector6d rm = centroid(raw_readings(d.samples));
  const Matrix6d p = truth_projector(truth, AddedMassSpec());
  const Vector6d out_of_plane =
      (Matrix6d::Identity() - p) * (rm - truth.model.offset());
  EXPECT_LT(out_of_plane.norm(), 1e-9);
}

TEST(SvdBasisTest, NoiselessSweepSpansThreeDimensions) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GroundTruth truth = make_ground_truth(seed, 10.0);
    const Dataset d = generate_dataset(truth, AddedMassSpec(), testing::default_sweep());
    const AffineBasis basis = fit_affine_basis(raw_readings(d.samples));
    EXPECT_LT(basis.singular_values(3) / basis.singular_values(0), 1e-10);
    EXPECT_TRUE((basis.U1.transpose() * basis.U1).isApprox(Matrix3d::Identity(), 1e-12));
    for (int k = 1; k < 6; ++k) {
      EXPECT_LE(basis.singular_values(k), basis.singular_values(k - 1));
    }

    const Matrix63d span = truth.model.matrix().inverse() * wrench_map(truth.body);
    const double leak = ((Matrix6d::Identity() - basis.projector()) * span).norm();
    EXPECT_LT(leak / span.norm(), 1e-8);
  }
}

TEST(SvdBasisTest, SignConventionLargestEntryPositive) {
  const AffineBasis basis = fit_affine_basis(synthetic_readings(3));
  for (int k = 0; k < 3; ++k) {
    Eigen::Index idx = 0;
    basis.U1.col(k).cwiseAbs().maxCoeff(&idx);
    EXPECT_GT(basis.U1(idx, k), 0.0);
  }
}

TEST(SvdBasisTest, SingleAxisRotationIsDegenerate) {
  const GroundTruth truth = make_ground_truth(5, 10.0);
  // Only the lateral angle moves: gravity traces an arc of a circle in the
  // sensor's y-z plane, so the readings span two directions.
  const Matrix63d m = truth.model.matrix().inverse() * wrench_map(truth.body);
  std::vector<RawReading> readings;
  for (int i = 0; i < 20; ++i) {
    const double angle = -0.8 + 0.08 * i;
    const Vector3d g(0.0, kStandardGravity * std::sin(angle),
                     -kStandardGravity * std::cos(angle));
    readings.emplace_back(m * g + truth.model.offset());
  }
  try {
    fit_affine_basis(readings);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateSpan);
  }
}

TEST(SvdBasisTest, RequiresFourSamples) {
  const auto readings = synthetic_readings(1);
  const std::vector<RawReading> three(readings.begin(), readings.begin() + 3);
  EXPECT_THROW(fit_affine_basis(three), Error);
}

TEST(SvdBasisTest, PermutationInvariance) {
  auto readings = synthetic_readings(7);
  const AffineBasis a = fit_affine_basis(readings);
  std::mt19937_64 rng(7);
  std::shuffle(readings.begin(), readings.end(), rng);
  const AffineBasis b = fit_affine_basis(readings);
  EXPECT_LT((a.r_m - b.r_m).norm(), 1e-10 * a.r_m.norm());
  EXPECT_LT((a.projector() - b.projector()).norm(), 1e-10);
}

TEST(SvdBasisTest, ScalingReadings) {
  const auto readings = synthetic_readings(8);
  const double alpha = 3.5;
  std::vector<RawReading> scaled;
  for (const auto& r : readings) scaled.emplace_back(alpha * r.values);
  const AffineBasis a = fit_affine_basis(readings);
  const AffineBasis b = fit_affine_basis(scaled);
  EXPECT_TRUE(b.r_m.isApprox(alpha * a.r_m, 1e-12));
  EXPECT_TRUE(b.singular_values.head<3>().isApprox(alpha * a.singular_values.head<3>(), 1e-10));
  EXPECT_LT((a.projector() - b.projector()).norm(), 1e-10);
}

TEST(ProjectLiftTest, RoundTrips) {
  const AffineBasis basis = fit_affine_basis(synthetic_readings(9));
  EXPECT_TRUE(project(basis, RawReading(basis.r_m)).isZero(1e-12));
  EXPECT_EQ(lift(basis, Vector3d::Zero()), basis.r_m);

  const Vector3d lambda(1, 2, 3);
  const RawReading in_plane(lift(basis, lambda));
  EXPECT_TRUE(project(basis, in_plane).isApprox(lambda, 1e-12));
  EXPECT_LT((lift(basis, project(basis, in_plane)) - in_plane.values).norm(), 1e-10);

  // Component orthogonal to the span survives as the lift residual.
  Vector6d normal = (Matrix6d::Identity() - basis.projector()) * Vector6d::Ones();
  normal = 0.7 * normal.normalized();
  const RawReading off(in_plane.values + normal);
  const double residual = (lift(basis, project(basis, off)) - off.values).norm();
  EXPECT_NEAR(residual, 0.7, 1e-10);
}

TEST(ProjectTest, NoiselessProjectionsLieOnEllipsoid) {
  const GroundTruth truth = make_ground_truth(10, 10.0);
  const Dataset d = generate_dataset(truth, AddedMassSpec(), testing::default_sweep());
  const AffineBasis basis = fit_affine_basis(raw_readings(d.samples));
  std::vector<Vector3d> pts;
  for (const auto& s : d.samples) pts.push_back(project(basis, s.raw));
  const EllipsoidFit fit = fit_ellipsoid(pts);
  EXPECT_LT(fit.rms_residual, 1e-8);
}

TEST(DiagnoseTest, ReportsRatiosAndRms) {
  const auto readings = synthetic_readings(12);
  const AffineBasis basis = fit_affine_basis(readings);
  const SubspaceDiagnostics diag = diagnose(basis, readings);
  EXPECT_EQ(diag.sample_count, readings.size());
  EXPECT_GE(diag.sigma_ratio, 0.0);
  EXPECT_LT(diag.sigma_ratio, 1e-9);
  EXPECT_LT(diag.in_plane_rms, 1e-9);
}

TEST(DenoiseDatasetTest, NoiselessDataUnchanged) {
  const GroundTruth truth = make_ground_truth(13, 10.0);
  const Dataset d = generate_dataset(truth, AddedMassSpec(), testing::default_sweep());
  const Dataset out = denoise_dataset(d);
  ASSERT_EQ(out.samples.size(), d.samples.size());
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    EXPECT_LT((out.samples[i].raw.values - d.samples[i].raw.values).norm(), 1e-9);
    EXPECT_LT((out.samples[i].gravity.values - d.samples[i].gravity.values).norm(),
              1e-9);
  }
  EXPECT_EQ(out.label, d.label);
}

TEST(DenoiseDatasetTest, ReadingsLieInTheFittedSubspace) {
  const GroundTruth truth = make_ground_truth(14, 10.0);
  const AddedMassSpec none;
  const SweepSpec sweep = testing::default_sweep();
  const Dataset d = generate_dataset(truth, none, sweep,
                                     relative_noise(truth, none, sweep, 0.01, 3));
  const Dataset out = denoise_dataset(d);
  const AffineBasis basis = fit_affine_basis(raw_readings(out.samples));
  EXPECT_LT(basis.singular_values(3), 1e-9 * basis.singular_values(0));
  // Noise orthogonal to the true span is removed.
  const Matrix6d off = Matrix6d::Identity() - truth_projector(truth, none);
  double before = 0.0;
  double after = 0.0;
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    before += (off * (d.samples[i].raw.values - truth.model.offset())).squaredNorm();
    after += (off * (out.samples[i].raw.values - truth.model.offset())).squaredNorm();
  }
  EXPECT_LT(after, before);
}

TEST(DenoiseDatasetTest, DegenerateSpanThrows) {
  Dataset d;
  for (int i = 0; i < 6; ++i) {
    d.samples.push_back(Sample{RawReading(Vector6d::Constant(i)),
                               GravitySample(Vector3d(0, 0, -kStandardGravity))});
  }
  try {
    denoise_dataset(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateSpan);
  }
}

}  // namespace
}  // namespace ftcal
