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

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftcal/calib_estimator.h"
#include "ftcal/geometry_validation.h"
#include "ftcal/ingest.h"
#include "ftcal/offset_estimator.h"
#include "ftcal/synth_rig.h"

namespace ftcal::cli {

using nlohmann::json;

inline constexpr int kReportVersion = 1;
inline constexpr const char* kOffsetSchema = "ftcal.offset_report";
inline constexpr const char* kCalibrationSchema = "ftcal.calibration_report";
inline constexpr const char* kValidationSchema = "ftcal.validation_report";
inline constexpr const char* kTruthSchema = "ftcal.synthetic_truth";

/// A dataset file as loaded by the tool.
struct InputDataset {
  std::string file;
  LoadedDataset loaded;
};

json dataset_entry(const InputDataset& input);

json offset_report(const MultiOffsetEstimate& estimate,
                   const std::vector<InputDataset>& inputs);

json calibration_report(const CalibEstimate& estimate, const Vector6d& offset,
                        const std::string& offset_source,
                        const std::vector<InputDataset>& inputs);

/// Calibration needed downstream, read back from a calibration report.
struct CalibrationResult {
  Matrix6d C = Matrix6d::Identity();
  Vector6d offset = Vector6d::Zero();
  double mass = 0.0;
  Vector3d first_moment = Vector3d::Zero();
};

/// Throws kParseError when required fields are missing or malformed.
CalibrationResult read_calibration_report(const json& report);

/// Offset vector of an offset report. Throws kParseError.
Vector6d read_offset_report(const json& report);

json validation_report_json(const ValidationReport& report,
                            const std::vector<InputDataset>& inputs,
                            const std::string& sensor,
                            const std::string& calibration_file);

/// Plain-text rendering of a validation report: semiaxes per dataset, then
/// added-mass recovery.
std::string render_validation_tables(const json& report);

struct SynthManifestEntry {
  std::string file;
  std::string label;
  bool calibration = false;
  AddedMassSpec added;
  std::size_t samples = 0;
};

json truth_report(const GroundTruth& truth, const SweepSpec& sweep,
                  const std::string& preset, std::uint64_t seed,
                  double conditioning, double noise_level,
                  const std::vector<SynthManifestEntry>& entries);

json to_json(const Eigen::Ref<const Eigen::VectorXd>& v);
/// Row-major nested arrays.
json to_json_rows(const Eigen::Ref<const Eigen::MatrixXd>& m);

}  // namespace ftcal::cli
