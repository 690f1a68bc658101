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

#include "ftcal/ingest.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/QR>

#include "ftcal/error.h"

namespace ftcal {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() &&
         std::isfinite(out);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line,
                              const std::string& what) {
  std::ostringstream msg;
  msg << source << ":" << line << ": " << what;
  throw Error(ErrorKind::kParseError, msg.str());
}

// Least-squares polynomial fit over `window` consecutive samples: row d of
// the result maps the samples to coefficient d of the fitted polynomial in
// the normalized abscissa x = (k - half) / half.
Eigen::MatrixXd sg_fit_operator(int window, int order) {
  const double half = 0.5 * (window - 1);
  Eigen::MatrixXd vander(window, order + 1);
  for (int k = 0; k < window; ++k) {
    const double x = (k - half) / half;
    double p = 1.0;
    for (int d = 0; d <= order; ++d) {
      vander(k, d) = p;
      p *= x;
    }
  }
  return vander.colPivHouseholderQr().solve(
      Eigen::MatrixXd::Identity(window, window));
}

// Weights producing the fitted value at window sample `eval`.
Eigen::VectorXd sg_weights(const Eigen::MatrixXd& fit, int window, int eval) {
  const double half = 0.5 * (window - 1);
  const double x = (eval - half) / half;
  Eigen::VectorXd basis(fit.rows());
  double p = 1.0;
  for (Eigen::Index d = 0; d < fit.rows(); ++d) {
    basis(d) = p;
    p *= x;
  }
  return fit.transpose() * basis;
}

}  // namespace

void IngestConfig::validate() const {
  if (smooth) {
    if (sg_window < 5 || sg_window % 2 == 0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "sg_window must be odd and at least 5");
    }
    if (sg_order < 0 || sg_order >= sg_window) {
      throw Error(ErrorKind::kInvalidArgument,
                  "sg_order must be non-negative and below sg_window");
    }
  }
  if (decimation < 1) {
    throw Error(ErrorKind::kInvalidArgument, "decimation must be >= 1");
  }
  if (!(gravity_norm > 0.0) || !(norm_tolerance > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "gravity_norm and norm_tolerance must be positive");
  }
}

std::vector<double> savitzky_golay(std::span<const double> signal, int window,
                                   int order) {
  if (order < 0 || window < 1 || window % 2 == 0 || window < order + 1) {
    std::ostringstream msg;
    msg << "window " << window << " must be odd and at least order + 1 ("
        << order + 1 << ")";
    throw Error(ErrorKind::kBadWindow, msg.str());
  }
  const auto n = static_cast<int>(signal.size());
  if (n < window) {
    std::ostringstream msg;
    msg << "signal of " << n << " samples is shorter than the window " << window;
    throw Error(ErrorKind::kSignalTooShort, msg.str());
  }
  const int half = window / 2;
  std::vector<double> out(signal.size());

  const Eigen::MatrixXd fit = sg_fit_operator(window, order);
  const Eigen::VectorXd center = sg_weights(fit, window, half);
  for (int i = half; i < n - half; ++i) {
    double acc = 0.0;
    for (int k = 0; k < window; ++k) acc += center(k) * signal[i - half + k];
    out[i] = acc;
  }
  for (int i = 0; i < half; ++i) {
    const Eigen::VectorXd head = sg_weights(fit, window, i);
    const Eigen::VectorXd tail = sg_weights(fit, window, window - half + i);
    double acc_head = 0.0;
    double acc_tail = 0.0;
    for (int k = 0; k < window; ++k) {
      acc_head += head(k) * signal[k];
      acc_tail += tail(k) * signal[n - window + k];
    }
    out[i] = acc_head;
    out[n - half + i] = acc_tail;
  }
  return out;
}

std::vector<LogRecord> parse_log_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) parse_error(source, 1, "missing header");
  ++line_no;
  std::string_view header = trim(line);
  if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
  if (header != kLogCsvHeader) {
    parse_error(source, line_no,
                "expected header '" + std::string(kLogCsvHeader) + "'");
  }

  std::vector<LogRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 10) {
      parse_error(source, line_no,
                  "expected 10 columns, found " + std::to_string(fields.size()));
    }
    double v[10];
    for (std::size_t k = 0; k < 10; ++k) {
      if (!parse_double(fields[k], v[k])) {
        parse_error(source, line_no,
                    "column " + std::to_string(k + 1) + " is not a finite number");
      }
    }
    LogRecord rec;
    rec.t = v[0];
    for (int k = 0; k < 6; ++k) rec.r(k) = v[1 + k];
    for (int k = 0; k < 3; ++k) rec.a(k) = v[7 + k];
    if (!records.empty() && !(rec.t > records.back().t)) {
      parse_error(source, line_no, "timestamps must be strictly increasing");
    }
    records.push_back(rec);
  }
  return records;
}

std::vector<LogRecord> read_log_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open " + path.string());
  return parse_log_csv(in, path.string());
}

void write_log_csv(std::ostream& out, const std::vector<LogRecord>& records) {
  out << kLogCsvHeader << '\n';
  for (const auto& rec : records) {
    out << format_double(rec.t);
    for (int k = 0; k < 6; ++k) out << ',' << format_double(rec.r(k));
    for (int k = 0; k < 3; ++k) out << ',' << format_double(rec.a(k));
    out << '\n';
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".meta");
  return p;
}

SidecarMeta read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open " + path.string());
  SidecarMeta meta;
  double mass = 0.0;
  Vector3d com = Vector3d::Zero();
  bool have_mass = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view l = trim(line);
    if (l.empty() || l.front() == '#') continue;
    const std::size_t eq = l.find('=');
    if (eq == std::string_view::npos) {
      parse_error(path.string(), line_no, "expected key=value");
    }
    const std::string_view key = trim(l.substr(0, eq));
    const std::string_view value = trim(l.substr(eq + 1));
    if (key == "mass_kg") {
      if (!parse_double(value, mass) || mass < 0.0) {
        parse_error(path.string(), line_no, "mass_kg must be a non-negative number");
      }
      have_mass = true;
    } else if (key == "com_m") {
      const auto parts = split(value, ',');
      if (parts.size() != 3) parse_error(path.string(), line_no, "com_m needs x,y,z");
      for (int k = 0; k < 3; ++k) {
        if (!parse_double(parts[static_cast<std::size_t>(k)], com(k))) {
          parse_error(path.string(), line_no, "com_m entries must be numbers");
        }
      }
    } else if (key == "label") {
      meta.label = std::string(value);
    } else {
      parse_error(path.string(), line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_mass) parse_error(path.string(), line_no, "missing mass_kg");
  meta.added = AddedMassSpec(mass, com);
  return meta;
}

void write_sidecar(const std::filesystem::path& path, const SidecarMeta& meta) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + path.string());
  out << "mass_kg=" << format_double(meta.added.mass) << '\n'
      << "com_m=" << format_double(meta.added.com.x()) << ','
      << format_double(meta.added.com.y()) << ','
      << format_double(meta.added.com.z()) << '\n'
      << "label=" << meta.label << '\n';
  if (!out) throw Error(ErrorKind::kIoError, "failed writing " + path.string());
}

LoadedDataset build_dataset(const std::vector<LogRecord>& records,
                            const AddedMassSpec& added, const std::string& label,
                            const IngestConfig& config) {
  config.validate();
  LoadedDataset out;
  out.dataset.added_mass = added;
  out.dataset.label = label;
  out.stats.records = records.size();
  if (records.empty()) {
    throw Error(ErrorKind::kNoValidSamples, "log '" + label + "' has no records");
  }

  const std::size_t n = records.size();
  std::vector<std::vector<double>> channels(9, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 6; ++k) channels[static_cast<std::size_t>(k)][i] = records[i].r(k);
    for (int k = 0; k < 3; ++k) channels[static_cast<std::size_t>(6 + k)][i] = records[i].a(k);
  }
  if (config.smooth) {
    for (auto& ch : channels) ch = savitzky_golay(ch, config.sg_window, config.sg_order);
  }

  const double sign = config.accel_is_specific_force ? -1.0 : 1.0;
  const double warn_band = config.norm_tolerance * config.gravity_norm;
  for (std::size_t i = 0; i < n; i += static_cast<std::size_t>(config.decimation)) {
    Vector6d r;
    Vector3d g;
    for (int k = 0; k < 6; ++k) r(k) = channels[static_cast<std::size_t>(k)][i];
    for (int k = 0; k < 3; ++k) g(k) = sign * channels[static_cast<std::size_t>(6 + k)][i];
    const double deviation = std::abs(g.norm() - config.gravity_norm);
    if (deviation > 2.0 * warn_band) {
      ++out.stats.dropped;
      continue;
    }
    if (deviation > warn_band) ++out.stats.norm_warnings;
    out.dataset.samples.push_back(Sample{RawReading(r), GravitySample(g)});
  }
  out.stats.kept = out.dataset.samples.size();
  if (out.dataset.samples.empty()) {
    throw Error(ErrorKind::kNoValidSamples,
                "every sample of '" + label + "' failed gravity-norm screening");
  }
  return out;
}

LoadedDataset load_dataset(const std::filesystem::path& path,
                           const AddedMassSpec& added,
                           const IngestConfig& config, const std::string& label) {
  config.validate();
  return build_dataset(read_log_csv(path), added,
                       label.empty() ? path.stem().string() : label, config);
}

LoadedDataset load_dataset(const std::filesystem::path& path,
                           const IngestConfig& config) {
  const SidecarMeta meta = read_sidecar(sidecar_path(path));
  return load_dataset(path, meta.added, config, meta.label);
}

void export_dataset(const std::filesystem::path& csv, const Dataset& dataset,
                    bool accel_is_specific_force, double sample_period) {
  std::vector<LogRecord> records;
  records.reserve(dataset.samples.size());
  const double sign = accel_is_specific_force ? -1.0 : 1.0;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    LogRecord rec;
    rec.t = static_cast<double>(i) * sample_period;
    rec.r = dataset.samples[i].raw.values;
    rec.a = sign * dataset.samples[i].gravity.values;
    records.push_back(rec);
  }
  std::ofstream out(csv, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIoError, "cannot write " + csv.string());
  write_log_csv(out, records);
  if (!out) throw Error(ErrorKind::kIoError, "failed writing " + csv.string());
  write_sidecar(sidecar_path(csv), SidecarMeta{dataset.added_mass, dataset.label});
}

}  // namespace ftcal
