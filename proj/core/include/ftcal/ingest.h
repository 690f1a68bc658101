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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ftcal/core_model.h"

namespace ftcal {

/// Exact header of a sensor log file.
inline constexpr std::string_view kLogCsvHeader = "t,r1,r2,r3,r4,r5,r6,ax,ay,az";

/// One synchronized row: raw sensor outputs and accelerometer (m/s^2).
struct LogRecord {
  double t = 0.0;
  Vector6d r = Vector6d::Zero();
  Vector3d a = Vector3d::Zero();
};

struct IngestConfig {
  bool smooth = true;
  int sg_window = 301;  // odd, >= 5
  int sg_order = 3;     // < sg_window
  int decimation = 1;   // keep every k-th filtered sample, starting at 0
  /// The accelerometer reports specific force (-g at rest); negate on load.
  bool accel_is_specific_force = true;
  double gravity_norm = kStandardGravity;
  /// Samples whose gravity norm deviates by more than this fraction are
  /// counted as warnings; beyond twice this fraction they are dropped.
  double norm_tolerance = 0.05;

  /// Throws kInvalidArgument describing the first violated constraint.
  void validate() const;
};

/// Centered local polynomial least-squares smoothing. The first and last
/// window/2 samples are evaluated on the polynomial fitted to the first or
/// last full window. Throws kBadWindow (even window, window < order + 1,
/// negative order) or kSignalTooShort (signal shorter than the window).
std::vector<double> savitzky_golay(std::span<const double> signal, int window,
                                   int order);

/// Parses the log CSV. Throws kParseError naming the offending line.
std::vector<LogRecord> parse_log_csv(std::istream& in,
                                     const std::string& source = "<stream>");
std::vector<LogRecord> read_log_csv(const std::filesystem::path& path);

/// Writes records with the exact header and shortest round-trip numbers.
void write_log_csv(std::ostream& out, const std::vector<LogRecord>& records);

/// Added-mass metadata stored next to each log as `<stem>.meta` with lines
/// `mass_kg=`, `com_m=x,y,z`, `label=`.
struct SidecarMeta {
  AddedMassSpec added;
  std::string label;
};

std::filesystem::path sidecar_path(const std::filesystem::path& csv);
SidecarMeta read_sidecar(const std::filesystem::path& path);
void write_sidecar(const std::filesystem::path& path, const SidecarMeta& meta);

struct IngestStats {
  std::size_t records = 0;
  std::size_t kept = 0;
  std::size_t norm_warnings = 0;
  std::size_t dropped = 0;
};

struct LoadedDataset {
  Dataset dataset;
  IngestStats stats;
};

/// Filter -> decimate -> accelerometer sign -> gravity-norm screening.
LoadedDataset build_dataset(const std::vector<LogRecord>& records,
                            const AddedMassSpec& added, const std::string& label,
                            const IngestConfig& config);

/// Reads `path` and runs build_dataset. The label defaults to the file stem.
/// Throws kIoError, kParseError, kSignalTooShort or kNoValidSamples.
LoadedDataset load_dataset(const std::filesystem::path& path,
                           const AddedMassSpec& added,
                           const IngestConfig& config,
                           const std::string& label = {});

/// load_dataset with the added mass and label taken from the sidecar.
LoadedDataset load_dataset(const std::filesystem::path& path,
                           const IngestConfig& config);

/// Writes `dataset` as a log (timestamps i * sample_period) plus sidecar.
void export_dataset(const std::filesystem::path& csv, const Dataset& dataset,
                    bool accel_is_specific_force = true,
                    double sample_period = 0.01);

}  // namespace ftcal
