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

#include "ftcal_cli/reports.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "ftcal/error.h"

namespace ftcal::cli {
namespace {

json header(const char* schema) {
  return json{{"schema", schema}, {"schema_version", kReportVersion}};
}

json optional_vector(const std::optional<Vector3d>& v) {
  return v ? to_json(*v) : json(nullptr);
}

json estimate_entry(const std::string& label, const OffsetEstimate& e) {
  return json{{"label", label},
              {"o_hat", to_json(e.o_hat)},
              {"lambda_o", to_json(e.lambda_o)},
              {"singular_values", to_json(e.basis.singular_values)},
              {"condition", e.condition_number},
              {"residual_rms", e.residual_rms},
              {"samples", e.basis.sample_count}};
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::kParseError,
                std::string("report is missing field '") + key + "'");
  }
  return j.at(key);
}

Eigen::VectorXd read_vector(const json& j, const char* key, Eigen::Index n) {
  const json& a = field(j, key);
  if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != n) {
    throw Error(ErrorKind::kParseError, std::string("field '") + key +
                                            "' must be an array of " +
                                            std::to_string(n) + " numbers");
  }
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& x = a[static_cast<std::size_t>(i)];
    if (!x.is_number()) {
      throw Error(ErrorKind::kParseError,
                  std::string("field '") + key + "' holds a non-number");
    }
    v(i) = x.get<double>();
  }
  return v;
}

void check_schema(const json& j, const char* schema) {
  const json& s = field(j, "schema");
  if (!s.is_string() || s.get<std::string>() != schema) {
    throw Error(ErrorKind::kParseError,
                std::string("expected a report with schema '") + schema + "'");
  }
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  std::string s = buf;
  // Values that round to zero print without a sign.
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string number_or_dash(const json& v, int digits) {
  return v.is_number() ? fixed(v.get<double>(), digits) : "-";
}

std::string vector_or_dash(const json& v, int digits) {
  if (!v.is_array()) return "-";
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fixed(v[i].get<double>(), digits);
  }
  return s + ")";
}

// Left-aligned first columns, right-aligned numbers.
std::string render(const std::vector<std::string>& head,
                   const std::vector<std::vector<std::string>>& rows,
                   std::size_t left_columns) {
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) width[c] = head[c].size();
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      width[c] = std::max(width[c], r[c].size());
    }
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string pad(width[c] - cells[c].size(), ' ');
      if (c) out << "  ";
      out << (c < left_columns ? cells[c] + pad : pad + cells[c]);
    }
    out << '\n';
  };
  line(head);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& r : rows) line(r);
  return out.str();
}

}  // namespace

json to_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json_rows(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    a.push_back(to_json(m.row(i).transpose()));
  }
  return a;
}

json dataset_entry(const InputDataset& input) {
  const Dataset& d = input.loaded.dataset;
  const IngestStats& s = input.loaded.stats;
  return json{{"file", input.file},
              {"label", d.label},
              {"added_mass_kg", d.added_mass.mass},
              {"added_com_m", to_json(d.added_mass.com)},
              {"records", s.records},
              {"samples", s.kept},
              {"norm_warnings", s.norm_warnings},
              {"dropped", s.dropped}};
}

json offset_report(const MultiOffsetEstimate& estimate,
                   const std::vector<InputDataset>& inputs) {
  json r = header(kOffsetSchema);
  const OffsetEstimate& first = estimate.estimates.front();
  r["o_hat"] = to_json(estimate.o_hat);
  r["lambda_o"] = to_json(first.lambda_o);
  r["singular_values"] = to_json(first.basis.singular_values);
  r["condition"] = first.condition_number;
  r["residual_rms"] = first.residual_rms;
  r["per_dataset_spread"] = to_json(estimate.spread);
  r["pooled"] = estimate.pooled;
  r["low_sample_count"] = estimate.low_sample_count;
  json datasets = json::array();
  for (const auto& in : inputs) datasets.push_back(dataset_entry(in));
  r["datasets"] = std::move(datasets);
  json estimates = json::array();
  for (std::size_t i = 0; i < estimate.estimates.size(); ++i) {
    const std::string label =
        estimate.pooled ? "pooled" : inputs[i].loaded.dataset.label;
    estimates.push_back(estimate_entry(label, estimate.estimates[i]));
  }
  r["estimates"] = std::move(estimates);
  return r;
}

json calibration_report(const CalibEstimate& estimate, const Vector6d& offset,
                        const std::string& offset_source,
                        const std::vector<InputDataset>& inputs) {
  json r = header(kCalibrationSchema);
  r["C_hat"] = to_json_rows(estimate.C_hat);
  r["C_hat_layout"] =
      "row-major: rows (fx, fy, fz, tx, ty, tz), columns (r1..r6)";
  r["m_hat"] = estimate.mass;
  r["mc_hat"] = to_json(estimate.first_moment);
  r["com_hat"] = optional_vector(estimate.com);
  r["theta_rank"] = estimate.theta_rank;
  r["condition"] = estimate.theta_condition;
  r["residual_rms"] = estimate.residual_rms;
  r["ill_conditioned"] = estimate.ill_conditioned;
  r["denoised_datasets"] = estimate.denoised_datasets;
  r["offset"] = to_json(offset);
  r["offset_source"] = offset_source;
  json datasets = json::array();
  for (const auto& in : inputs) datasets.push_back(dataset_entry(in));
  r["datasets"] = std::move(datasets);
  return r;
}

CalibrationResult read_calibration_report(const json& report) {
  check_schema(report, kCalibrationSchema);
  CalibrationResult c;
  const json& rows = field(report, "C_hat");
  if (!rows.is_array() || rows.size() != 6) {
    throw Error(ErrorKind::kParseError, "field 'C_hat' must hold 6 rows");
  }
  for (std::size_t i = 0; i < 6; ++i) {
    const json row = json{{"row", rows[i]}};
    c.C.row(static_cast<Eigen::Index>(i)) = read_vector(row, "row", 6).transpose();
  }
  c.offset = read_vector(report, "offset", 6);
  const json& m = field(report, "m_hat");
  if (!m.is_number()) {
    throw Error(ErrorKind::kParseError, "field 'm_hat' must be a number");
  }
  c.mass = m.get<double>();
  c.first_moment = read_vector(report, "mc_hat", 3);
  return c;
}

Vector6d read_offset_report(const json& report) {
  check_schema(report, kOffsetSchema);
  return read_vector(report, "o_hat", 6);
}

json validation_report_json(const ValidationReport& report,
                            const std::vector<InputDataset>& inputs,
                            const std::string& sensor,
                            const std::string& calibration_file) {
  json r = header(kValidationSchema);
  r["sensor"] = sensor;
  r["calibration"] = calibration_file;
  r["baseline_source"] = report.baseline_source;
  if (report.body) {
    r["body"] = json{{"mass", report.body->mass},
                     {"first_moment", to_json(report.body->first_moment)}};
  } else {
    r["body"] = nullptr;
  }
  json rows = json::array();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const ValidationRow& row = report.rows[i];
    const InertialRecovery& in = row.inertial;
    rows.push_back(json{
        {"dataset", row.label},
        {"file", inputs[i].file},
        {"added_mass_kg", in.mass_truth},
        {"added_com_m", to_json(in.com_truth)},
        {"semiaxes", to_json(row.sphericity.semiaxes)},
        {"anisotropy", row.sphericity.anisotropy},
        {"mean_force_norm", row.sphericity.mean_force_norm},
        {"total_mass", in.total.mass},
        {"total_first_moment", to_json(in.total.first_moment)},
        {"total_com", optional_vector(in.total.com)},
        {"inertial_residual_rms", in.total.residual_rms},
        {"mass_est", in.mass_est ? json(*in.mass_est) : json(nullptr)},
        {"com_est", optional_vector(in.com_est)}});
  }
  r["rows"] = std::move(rows);
  return r;
}

std::string render_validation_tables(const json& report) {
  const std::string sensor = report.value("sensor", "");
  std::vector<std::vector<std::string>> axes;
  std::vector<std::vector<std::string>> masses;
  for (const auto& row : report.at("rows")) {
    const json& s = row.at("semiaxes");
    axes.push_back({sensor, row.at("dataset").get<std::string>(),
                    fixed(row.at("added_mass_kg").get<double>(), 2),
                    fixed(s[0].get<double>(), 2), fixed(s[1].get<double>(), 2),
                    fixed(s[2].get<double>(), 2)});
    masses.push_back({sensor, row.at("dataset").get<std::string>(),
                      fixed(row.at("added_mass_kg").get<double>(), 2),
                      number_or_dash(row.at("mass_est"), 2),
                      vector_or_dash(row.at("added_com_m"), 3),
                      vector_or_dash(row.at("com_est"), 3)});
  }
  std::string out = "Ellipsoid semiaxes of calibrated forces\n";
  out += render({"Sensor", "Dataset", "Added mass [kg]", "Semiaxis 1 [N]",
                 "Semiaxis 2 [N]", "Semiaxis 3 [N]"},
                axes, 2);
  out += "\nAdded-mass recovery (baseline: " +
         report.value("baseline_source", std::string("none")) + ")\n";
  out += render({"Sensor", "Dataset", "Added mass [kg]", "Estimated [kg]",
                 "COM [m]", "Estimated COM [m]"},
                masses, 2);
  return out;
}

json truth_report(const GroundTruth& truth, const SweepSpec& sweep,
                  const std::string& preset, std::uint64_t seed,
                  double conditioning, double noise_level,
                  const std::vector<SynthManifestEntry>& entries) {
  json r = header(kTruthSchema);
  r["note"] =
      "Synthetic ground truth for test harnesses only. It is not a "
      "calibration result.";
  r["preset"] = preset;
  r["seed"] = seed;
  r["conditioning"] = conditioning;
  r["noise_level"] = noise_level;
  r["C"] = to_json_rows(truth.model.matrix());
  r["offset"] = to_json(truth.model.offset());
  r["body"] = json{{"mass", truth.body.mass},
                   {"com", to_json(truth.body.com)},
                   {"first_moment", to_json(truth.body.first_moment())}};
  r["gravity_norm"] = truth.gravity_norm;
  r["sweep"] = json{{"frontback_range_deg", sweep.frontback_range_deg},
                    {"lateral_range_deg", sweep.lateral_range_deg},
                    {"frontback_steps", sweep.frontback_steps},
                    {"lateral_steps", sweep.lateral_steps},
                    {"jitter_deg", sweep.jitter_deg}};
  json datasets = json::array();
  for (const auto& e : entries) {
    datasets.push_back(json{{"file", e.file},
                            {"label", e.label},
                            {"role", e.calibration ? "calibration" : "validation"},
                            {"added_mass_kg", e.added.mass},
                            {"added_com_m", to_json(e.added.com)},
                            {"samples", e.samples}});
  }
  r["datasets"] = std::move(datasets);
  return r;
}

}  // namespace ftcal::cli
