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

#include "ftcal_cli/cli.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ftcal/calib_estimator.h"
#include "ftcal/geometry_validation.h"
#include "ftcal/ingest.h"
#include "ftcal/offset_estimator.h"
#include "ftcal/subspace.h"
#include "ftcal/synth_rig.h"
#include "ftcal_cli/reports.h"

#ifndef FTCAL_VERSION
#define FTCAL_VERSION "unknown"
#endif

namespace ftcal::cli {
namespace fs = std::filesystem;

namespace {

struct IngestFlags {
  int sg_window = 301;
  int sg_order = 3;
  int decimation = 1;
  bool no_filter = false;
  bool accel_is_gravity = false;
  double gravity_norm = kStandardGravity;
  double norm_tolerance = 0.05;
  int jobs = 1;

  IngestConfig config() const {
    IngestConfig c;
    c.smooth = !no_filter;
    c.sg_window = sg_window;
    c.sg_order = sg_order;
    c.decimation = decimation;
    c.accel_is_specific_force = !accel_is_gravity;
    c.gravity_norm = gravity_norm;
    c.norm_tolerance = norm_tolerance;
    c.validate();
    return c;
  }
};

struct SynthFlags {
  std::string preset = "paper";
  std::uint64_t seed = 0;
  std::string out_dir;
  double noise = 0.0;
  double conditioning = 10.0;
  SweepSpec sweep;
  double sample_period = 0.01;
  int jobs = 1;
};

struct OffsetFlags {
  std::vector<std::string> datasets;
  double span_threshold = SubspaceOptions{}.span_threshold;
  double max_condition = OffsetOptions{}.max_condition;
  bool pooled = false;
  std::string out;
  IngestFlags ingest;
};

struct CalibrateFlags {
  std::vector<std::string> datasets;
  std::string offset;
  std::string offset_report;
  double rank_tolerance = CalibOptions{}.rank_tolerance;
  double ill_condition = CalibOptions{}.ill_condition_threshold;
  double mass_floor = CalibOptions{}.mass_floor;
  double span_threshold = SubspaceOptions{}.span_threshold;
  double max_condition = OffsetOptions{}.max_condition;
  bool pooled = false;
  bool force = false;
  bool no_denoise = false;
  std::string out;
  IngestFlags ingest;
};

struct ValidateFlags {
  std::string calibration;
  std::vector<std::string> datasets;
  std::string baseline = "calibration";
  std::string sensor = "FT";
  std::string table;
  std::string points_dir;
  double mass_floor = InertialOptions{}.mass_floor;
  double rank_tolerance = InertialOptions{}.rank_tolerance;
  double span_threshold = SubspaceOptions{}.span_threshold;
  std::string out;
  IngestFlags ingest;
};

void add_ingest_flags(CLI::App* app, IngestFlags& f) {
  const char* group = "Ingest";
  app->add_option("--sg-window", f.sg_window,
                  "Savitzky-Golay window length (odd)")
      ->capture_default_str()->group(group);
  app->add_option("--sg-order", f.sg_order, "Savitzky-Golay polynomial order")
      ->capture_default_str()->group(group);
  app->add_option("--decimation", f.decimation,
                  "Keep every k-th filtered sample")
      ->capture_default_str()->group(group);
  app->add_flag("--no-filter", f.no_filter,
                "Skip smoothing (logs of static samples, e.g. from synth)")
      ->group(group);
  app->add_flag("--accel-is-gravity", f.accel_is_gravity,
                "Accelerometer columns already hold g (no sign flip)")
      ->group(group);
  app->add_option("--gravity-norm", f.gravity_norm, "Expected |g| in m/s^2")
      ->capture_default_str()->check(CLI::PositiveNumber)->group(group);
  app->add_option("--norm-tolerance", f.norm_tolerance,
                  "Relative |g| band; samples beyond twice the band are dropped")
      ->capture_default_str()->check(CLI::PositiveNumber)->group(group);
  app->add_option("--jobs", f.jobs, "Datasets processed in parallel")
      ->capture_default_str()->check(CLI::Range(1, 256))->group(group);
}

void add_config_flag(CLI::App* app) {
  // Consumed before parsing; registered for --help only.
  static std::string unused;
  app->add_option("--config", unused,
                  "File of key=value lines; keys are long flag names");
}

template <typename F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  // First failure in input order, independent of scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<InputDataset> load_inputs(const std::vector<std::string>& files,
                                      const IngestFlags& flags,
                                      std::ostream& err) {
  const IngestConfig config = flags.config();
  std::vector<InputDataset> inputs(files.size());
  parallel_for(files.size(), flags.jobs, [&](std::size_t i) {
    inputs[i].file = files[i];
    inputs[i].loaded = load_dataset(files[i], config);
  });
  std::set<std::string> labels;
  for (const auto& in : inputs) {
    const IngestStats& s = in.loaded.stats;
    if (s.norm_warnings || s.dropped) {
      err << "warning: " << in.file << ": " << s.norm_warnings
          << " samples outside the gravity-norm band, " << s.dropped
          << " dropped\n";
    }
    if (!labels.insert(in.loaded.dataset.label).second) {
      throw Error(ErrorKind::kInvalidArgument,
                  "duplicate dataset label '" + in.loaded.dataset.label + "'");
    }
  }
  return inputs;
}

std::vector<Dataset> datasets_of(const std::vector<InputDataset>& inputs) {
  std::vector<Dataset> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) out.push_back(in.loaded.dataset);
  return out;
}

void write_text(const std::string& path, const std::string& text,
                std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  f.flush();
  if (!f) throw Error(ErrorKind::kIoError, "cannot write '" + path + "'");
}

void write_json(const std::string& path, const json& j, std::ostream& out) {
  write_text(path, j.dump(2) + "\n", out);
}

json read_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kIoError, "cannot read '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParseError, path + ": " + e.what());
  }
}

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_points(const fs::path& path, const char* header,
                  const std::vector<Vector3d>& points) {
  std::ostringstream s;
  s << header << '\n';
  for (const auto& p : points) {
    s << shortest(p.x()) << ',' << shortest(p.y()) << ',' << shortest(p.z())
      << '\n';
  }
  std::ostringstream sink;
  write_text(path.string(), s.str(), sink);
}

Vector6d parse_offset(const std::string& text) {
  Vector6d v;
  std::size_t pos = 0;
  for (int k = 0; k < 6; ++k) {
    const std::size_t end = k < 5 ? text.find(',', pos) : text.size();
    double x = 0.0;
    const char* first = text.data() + pos;
    const char* last = text.data() + (end == std::string::npos ? text.size() : end);
    const auto res = std::from_chars(first, last, x);
    if (end == std::string::npos || res.ec != std::errc() || res.ptr != last) {
      throw Error(ErrorKind::kInvalidArgument,
                  "--offset needs six comma-separated numbers, got '" + text + "'");
    }
    v(k) = x;
    pos = end + 1;
  }
  return v;
}

int cmd_synth(const SynthFlags& f, std::ostream& err) {
  const GroundTruth truth = make_ground_truth(f.seed, f.conditioning);
  const auto scenario =
      paper_scenario(truth, f.sweep, f.noise, derive_seed(f.seed, 1));
  std::error_code ec;
  fs::create_directories(f.out_dir, ec);
  if (ec || !fs::is_directory(f.out_dir)) {
    throw Error(ErrorKind::kIoError,
                "cannot create output directory '" + f.out_dir + "'");
  }
  std::vector<SynthManifestEntry> entries(scenario.size());
  parallel_for(scenario.size(), f.jobs, [&](std::size_t i) {
    const Dataset& d = scenario[i].dataset;
    const fs::path csv = fs::path(f.out_dir) / (d.label + ".csv");
    export_dataset(csv, d, true, f.sample_period);
    entries[i] = SynthManifestEntry{csv.filename().string(), d.label,
                                    scenario[i].calibration, d.added_mass,
                                    d.samples.size()};
  });
  const json truth_json = truth_report(truth, f.sweep, f.preset, f.seed,
                                       f.conditioning, f.noise, entries);
  std::ostringstream sink;
  write_json((fs::path(f.out_dir) / "truth.json").string(), truth_json, sink);
  err << "wrote " << entries.size() << " datasets to " << f.out_dir << '\n';
  return kExitOk;
}

int cmd_offset(const OffsetFlags& f, std::ostream& out, std::ostream& err) {
  OffsetOptions options;
  options.subspace.span_threshold = f.span_threshold;
  options.max_condition = f.max_condition;
  options.pooled = f.pooled;
  // Ingest has already screened gravity norms.
  options.gravity_band.reset();
  const auto inputs = load_inputs(f.datasets, f.ingest, err);
  const MultiOffsetEstimate est = estimate_offset(datasets_of(inputs), options);
  if (est.low_sample_count) {
    err << "warning: fewer than " << options.recommended_samples
        << " samples in a dataset; the offset may be poorly determined\n";
  }
  write_json(f.out, offset_report(est, inputs), out);
  return kExitOk;
}

int cmd_calibrate(const CalibrateFlags& f, std::ostream& out,
                  std::ostream& err) {
  const std::optional<Vector6d> flag_offset =
      f.offset.empty() ? std::nullopt : std::optional(parse_offset(f.offset));
  const auto inputs = load_inputs(f.datasets, f.ingest, err);
  const std::vector<Dataset> datasets = datasets_of(inputs);

  Vector6d offset;
  std::string source;
  if (flag_offset) {
    offset = *flag_offset;
    source = "flag";
  } else if (!f.offset_report.empty()) {
    offset = read_offset_report(read_json(f.offset_report));
    source = "report:" + f.offset_report;
  } else {
    OffsetOptions options;
    options.subspace.span_threshold = f.span_threshold;
    options.max_condition = f.max_condition;
    options.pooled = f.pooled;
    options.gravity_band.reset();
    offset = estimate_offset(datasets, options).o_hat;
    source = "chained";
  }

  CalibOptions options;
  options.rank_tolerance = f.rank_tolerance;
  options.ill_condition_threshold = f.ill_condition;
  options.mass_floor = f.mass_floor;
  options.denoise = !f.no_denoise;
  options.subspace.span_threshold = f.span_threshold;
  options.gravity_band.reset();
  const CalibEstimate est = estimate_calibration(datasets, offset, options);
  if (est.ill_conditioned && !f.force) {
    err << "error: IllConditioned: Theta condition number " << est.theta_condition
        << " exceeds " << f.ill_condition
        << "; pass --force to accept the estimate\n";
    return kExitIllConditioned;
  }
  if (est.ill_conditioned) {
    err << "warning: Theta condition number " << est.theta_condition
        << " exceeds " << f.ill_condition << '\n';
  }
  write_json(f.out, calibration_report(est, offset, source, inputs), out);
  return kExitOk;
}

int cmd_validate(const ValidateFlags& f, std::ostream& out, std::ostream& err) {
  const CalibrationResult cal = read_calibration_report(read_json(f.calibration));
  const auto inputs = load_inputs(f.datasets, f.ingest, err);
  const std::vector<Dataset> datasets = datasets_of(inputs);

  Baseline baseline;
  const std::string prefix = "dataset:";
  if (f.baseline == "calibration") {
    InertialEstimate body;
    body.mass = cal.mass;
    body.first_moment = cal.first_moment;
    baseline.body = body;
  } else if (f.baseline.rfind(prefix, 0) == 0) {
    const std::string label = f.baseline.substr(prefix.size());
    const auto it = std::find_if(datasets.begin(), datasets.end(),
                                 [&](const Dataset& d) { return d.label == label; });
    if (it == datasets.end()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "--baseline names unknown dataset '" + label + "'");
    }
    baseline.dataset_index = static_cast<std::size_t>(it - datasets.begin());
  } else if (f.baseline != "none") {
    throw Error(ErrorKind::kInvalidArgument,
                "--baseline must be 'calibration', 'none' or 'dataset:<label>'");
  }

  InertialOptions options;
  options.mass_floor = f.mass_floor;
  options.rank_tolerance = f.rank_tolerance;
  const ValidationReport report =
      validation_report(cal.C, cal.offset, datasets, baseline, options);
  const json j = validation_report_json(report, inputs, f.sensor, f.calibration);

  if (!f.points_dir.empty()) {
    std::error_code ec;
    fs::create_directories(f.points_dir, ec);
    if (ec || !fs::is_directory(f.points_dir)) {
      throw Error(ErrorKind::kIoError,
                  "cannot create directory '" + f.points_dir + "'");
    }
    SubspaceOptions sub;
    sub.span_threshold = f.span_threshold;
    for (const Dataset& d : datasets) {
      const fs::path dir(f.points_dir);
      write_points(dir / (d.label + "_forces.csv"), "fx,fy,fz",
                   calibrated_forces(cal.C, cal.offset, d));
      const auto raw = raw_readings(d.samples);
      const AffineBasis basis = fit_affine_basis(raw, sub);
      std::vector<Vector3d> projected;
      projected.reserve(raw.size());
      for (const auto& r : raw) projected.push_back(project(basis, r));
      write_points(dir / (d.label + "_projected.csv"), "l1,l2,l3", projected);
    }
  }

  write_json(f.out, j, out);
  const std::string tables = render_validation_tables(j);
  if (!f.table.empty()) {
    write_text(f.table, tables, out);
  } else if (!f.out.empty() && f.out != "-") {
    out << tables;
  }
  return kExitOk;
}

bool is_present(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  throw Error(ErrorKind::kInvalidArgument,
              "config key '" + key + "' needs a boolean, got '" + value + "'");
}

// Removes --config from `args` and appends the file's settings as flags,
// unless the same flag is already on the command line.
void apply_config(std::vector<std::string>& args, CLI::App& app) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        throw Error(ErrorKind::kInvalidArgument, "--config needs a file");
      }
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return;

  CLI::App* sub = nullptr;
  for (const auto& a : args) {
    for (CLI::App* s : app.get_subcommands({})) {
      if (s->get_name() == a) sub = s;
    }
    if (sub) break;
  }
  if (!sub) {
    throw Error(ErrorKind::kInvalidArgument, "--config needs a subcommand");
  }
  std::vector<std::string> extra;
  for (const auto& [key, value] : read_config_file(path)) {
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (!opt || key == "config" || key == "help") {
      throw Error(ErrorKind::kInvalidArgument,
                  path + ": unknown key '" + key + "' for '" + sub->get_name() + "'");
    }
    if (is_present(args, flag)) continue;
    if (opt->get_type_size_max() == 0) {
      if (parse_bool(key, value)) extra.push_back(flag);
    } else {
      extra.push_back(flag + "=" + value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kBadWindow:
      return kExitUsage;
    case ErrorKind::kIoError:
      return kExitIo;
    case ErrorKind::kRankDeficientSystem:
    case ErrorKind::kNotIdentifiable:
    case ErrorKind::kRankDeficient:
      return kExitNotIdentifiable;
    case ErrorKind::kDegenerateSpan:
      return kExitDegenerateSpan;
    case ErrorKind::kIllConditioned:
      return kExitIllConditioned;
    case ErrorKind::kDimensionMismatch:
    case ErrorKind::kEmptyDataset:
    case ErrorKind::kInvalidGravity:
    case ErrorKind::kSignalTooShort:
    case ErrorKind::kParseError:
    case ErrorKind::kNoValidSamples:
      return kExitDataError;
    case ErrorKind::kDegeneratePointSet:
    case ErrorKind::kNonEllipsoidQuadric:
      return kExitGeometryError;
  }
  return kExitInternal;
}

std::vector<std::pair<std::string, std::string>> read_config_file(
    const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIoError,
                "cannot read config file '" + path.string() + "'");
  }
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
      throw Error(ErrorKind::kInvalidArgument,
                  path.string() + ":" + std::to_string(n) +
                      ": expected key=value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

int run(const std::vector<std::string>& args_in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"In-situ six-axis force/torque sensor calibration", "ftcal"};
  app.set_version_flag("--version", std::string("ftcal ") + FTCAL_VERSION);
  app.require_subcommand(1);

  SynthFlags synth;
  CLI::App* s = app.add_subcommand(
      "synth", "Write synthetic datasets, sidecars and a ground-truth file");
  s->add_option("--preset", synth.preset, "Scenario preset")
      ->capture_default_str()->check(CLI::IsMember({"paper"}));
  s->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  s->add_option("--out", synth.out_dir, "Output directory")->required();
  s->add_option("--noise", synth.noise,
                "Noise level relative to the per-channel signal spread")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  s->add_option("--conditioning", synth.conditioning, "Condition number of C")
      ->capture_default_str()->check(CLI::Range(1.0, 1e12));
  s->add_option("--frontback-range", synth.sweep.frontback_range_deg,
                "Front-back sweep range [deg]")
      ->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--lateral-range", synth.sweep.lateral_range_deg,
                "Lateral sweep range [deg]")
      ->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--frontback-steps", synth.sweep.frontback_steps,
                "Front-back grid steps")
      ->capture_default_str()->check(CLI::Range(2, 100000));
  s->add_option("--lateral-steps", synth.sweep.lateral_steps,
                "Lateral grid steps")
      ->capture_default_str()->check(CLI::Range(2, 100000));
  s->add_option("--jitter", synth.sweep.jitter_deg,
                "Uniform angle perturbation [deg]")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  s->add_option("--sample-period", synth.sample_period,
                "Timestamp spacing of written logs [s]")
      ->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--jobs", synth.jobs, "Datasets written in parallel")
      ->capture_default_str()->check(CLI::Range(1, 256));
  add_config_flag(s);

  OffsetFlags offset;
  CLI::App* o = app.add_subcommand("offset", "Estimate the sensor offset");
  o->add_option("datasets", offset.datasets, "Dataset CSV files (sidecar next to each)")
      ->required()->check(CLI::ExistingFile);
  o->add_option("--span-threshold", offset.span_threshold,
                "Minimum sigma3/sigma1 for a 3D span (1e-3 suits noisy logs)")
      ->capture_default_str()->check(CLI::PositiveNumber);
  o->add_option("--max-condition", offset.max_condition,
                "Largest accepted condition number of the offset system")
      ->capture_default_str()->check(CLI::PositiveNumber);
  o->add_flag("--pooled", offset.pooled,
              "One estimate from all datasets instead of one per dataset");
  o->add_option("--out", offset.out, "Report path (default stdout)");
  add_ingest_flags(o, offset.ingest);
  add_config_flag(o);

  CalibrateFlags calib;
  CLI::App* c = app.add_subcommand(
      "calibrate", "Estimate the calibration matrix and the body's inertia");
  c->add_option("datasets", calib.datasets,
                "At least three dataset CSV files with distinct added masses")
      ->required()->check(CLI::ExistingFile);
  auto* off_flag = c->add_option("--offset", calib.offset,
                                 "Offset as six comma-separated values");
  auto* off_report = c->add_option("--offset-report", calib.offset_report,
                                   "Take the offset from an offset report")
                         ->check(CLI::ExistingFile);
  off_flag->excludes(off_report);
  c->add_option("--rank-tolerance", calib.rank_tolerance,
                "Relative singular-value floor for the rank of Theta")
      ->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--ill-condition", calib.ill_condition,
                "Condition number above which the result needs --force")
      ->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--mass-floor", calib.mass_floor,
                "Smallest mass for which a center of mass is reported")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  c->add_option("--span-threshold", calib.span_threshold,
                "Minimum sigma3/sigma1 for a 3D span")
      ->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--max-condition", calib.max_condition,
                "Offset system condition limit when chaining")
      ->capture_default_str()->check(CLI::PositiveNumber);
  c->add_flag("--pooled", calib.pooled, "Pooled offset when chaining");
  c->add_flag("--force", calib.force, "Accept an ill-conditioned estimate");
  c->add_flag("--no-denoise", calib.no_denoise,
              "Solve on the readings as recorded");
  c->add_option("--out", calib.out, "Report path (default stdout)");
  add_ingest_flags(c, calib.ingest);
  add_config_flag(c);

  ValidateFlags val;
  CLI::App* v = app.add_subcommand(
      "validate", "Check a calibration on held-out datasets");
  v->add_option("--calibration", val.calibration, "Calibration report")
      ->required()->check(CLI::ExistingFile);
  v->add_option("datasets", val.datasets, "Validation dataset CSV files")
      ->required()->check(CLI::ExistingFile);
  v->add_option("--baseline", val.baseline,
                "Body estimate for added-mass recovery: calibration, none or "
                "dataset:<label>")
      ->capture_default_str();
  v->add_option("--sensor", val.sensor, "Sensor name for the tables")
      ->capture_default_str();
  v->add_option("--table", val.table, "Write the text tables here ('-' for stdout)");
  v->add_option("--points-dir", val.points_dir,
                "Write calibrated forces and projected readings per dataset");
  v->add_option("--mass-floor", val.mass_floor,
                "Smallest mass for which a center of mass is reported")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  v->add_option("--rank-tolerance", val.rank_tolerance,
                "Rank tolerance of the inertial fit")
      ->capture_default_str()->check(CLI::PositiveNumber);
  v->add_option("--span-threshold", val.span_threshold,
                "Minimum sigma3/sigma1 when projecting readings")
      ->capture_default_str()->check(CLI::PositiveNumber);
  v->add_option("--out", val.out, "Report path (default stdout)");
  add_ingest_flags(v, val.ingest);
  add_config_flag(v);

  std::vector<std::string> args = args_in;
  try {
    apply_config(args, app);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const CLI::App* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const CLI::App* target = &app;
    for (const CLI::App* sub : app.get_subcommands()) target = sub;
    err << target->help("", CLI::AppFormatMode::Normal);
    return kExitUsage;
  }

  try {
    if (s->parsed()) return cmd_synth(synth, err);
    if (o->parsed()) return cmd_offset(offset, out, err);
    if (c->parsed()) return cmd_calibrate(calib, out, err);
    if (v->parsed()) return cmd_validate(val, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace ftcal::cli
