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

#include <set>

#include <gtest/gtest.h>

#include "ftcal/ingest.h"
#include "ftcal/synth_rig.h"
#include "ftcal_cli/reports.h"
#include "support/cli_fixture.h"

namespace ftcal {
namespace {

using testing::CliResult;
using testing::dataset_files;
using testing::load_json;
using testing::run_cli;
using testing::schema_errors;
using testing::ScratchDir;
using testing::slurp;

std::vector<std::string> concat(std::vector<std::string> a,
                                const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const CliResult r =
        run_cli({"synth", "--preset", "paper", "--seed", "7", "--out", dir_ / "data"});
    ASSERT_EQ(r.code, 0) << r.err;
    truth_ = load_json(dir_ / "data/truth.json");
  }

  std::vector<std::string> calib_files() const {
    return dataset_files(dir_, "data", {1, 2, 3, 4});
  }
  std::vector<std::string> valid_files() const {
    return dataset_files(dir_, "data", {5, 6, 7, 8});
  }
  Matrix6d truth_C() const { return testing::json_matrix(truth_["C"]); }
  Vector6d truth_offset() const { return testing::json_vector(truth_["offset"]); }

  ScratchDir dir_{::testing::UnitTest::GetInstance()->current_test_info()->name()};
  nlohmann::json truth_;
};

TEST_F(CliTest, SynthWritesEightDatasetsAndTruth) {
  int csv = 0, meta = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir_.path() / "data")) {
    csv += e.path().extension() == ".csv";
    meta += e.path().extension() == ".meta";
  }
  EXPECT_EQ(csv, 8);
  EXPECT_EQ(meta, 8);
  EXPECT_TRUE(schema_errors(truth_, "synthetic_truth").empty());
  std::set<double> masses;
  for (const auto& d : truth_["datasets"]) masses.insert(d["added_mass_kg"].get<double>());
  EXPECT_EQ(masses, (std::set<double>{0.0, 0.51}));
}

TEST_F(CliTest, SynthIsByteIdenticalForOneSeed) {
  ASSERT_EQ(run_cli({"synth", "--seed", "7", "--out", dir_ / "again"}).code, 0);
  ASSERT_EQ(run_cli({"synth", "--seed", "8", "--out", dir_ / "other"}).code, 0);
  for (int i = 1; i <= 8; ++i) {
    const std::string f = "dataset_" + std::to_string(i) + ".csv";
    EXPECT_EQ(slurp(dir_ / ("data/" + f)), slurp(dir_ / ("again/" + f)));
    EXPECT_NE(slurp(dir_ / ("data/" + f)), slurp(dir_ / ("other/" + f)));
  }
  EXPECT_EQ(slurp(dir_ / "data/truth.json"), slurp(dir_ / "again/truth.json"));
}

TEST_F(CliTest, OffsetMatchesTruth) {
  const CliResult r = run_cli(
      concat({"offset", "--no-filter", "--out", dir_ / "off.json"}, calib_files()));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = load_json(dir_ / "off.json");
  EXPECT_TRUE(schema_errors(rep, "offset_report").empty());
  EXPECT_LT((testing::json_vector(rep["o_hat"]) - truth_offset()).norm(), 1e-8);
  EXPECT_EQ(rep["estimates"].size(), 4u);
}

TEST_F(CliTest, OffsetWritesToStdoutByDefault) {
  const CliResult r = run_cli(concat({"offset", "--no-filter"}, calib_files()));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(schema_errors(nlohmann::json::parse(r.out), "offset_report").empty());
}

TEST_F(CliTest, SingleOrientationIsDegenerate) {
  Dataset d;
  d.label = "still";
  const Vector3d g(0.0, 0.0, -kStandardGravity);
  for (int i = 0; i < 20; ++i) {
    d.samples.push_back(Sample{RawReading(Vector6d::Constant(1.0 + 1e-3 * (i % 2))),
                               GravitySample(g)});
  }
  export_dataset(dir_ / "still.csv", d);
  const CliResult r = run_cli({"offset", "--no-filter", dir_ / "still.csv"});
  EXPECT_EQ(r.code, cli::kExitDegenerateSpan) << r.err;
  EXPECT_NE(r.err.find("DegenerateSpan"), std::string::npos);
}

TEST_F(CliTest, CalibrateChainedMatchesTruth) {
  const CliResult r = run_cli(
      concat({"calibrate", "--no-filter", "--out", dir_ / "cal.json"}, calib_files()));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = load_json(dir_ / "cal.json");
  EXPECT_TRUE(schema_errors(rep, "calibration_report").empty());
  const Matrix6d C = testing::json_matrix(rep["C_hat"]);
  EXPECT_LT((C - truth_C()).norm() / truth_C().norm(), 1e-8);
  EXPECT_NEAR(rep["m_hat"].get<double>(), truth_["body"]["mass"].get<double>(), 1e-8);
  EXPECT_EQ(rep["theta_rank"], 40);
  EXPECT_EQ(rep["offset_source"], "chained");
}

TEST_F(CliTest, CalibrateTakesOffsetFromFlagOrReport) {
  std::string flag;
  for (int k = 0; k < 6; ++k) {
    flag += (k ? "," : "") + nlohmann::json(truth_offset()(k)).dump();
  }
  CliResult r = run_cli(concat({"calibrate", "--no-filter", "--offset", flag}, calib_files()));
  ASSERT_EQ(r.code, 0) << r.err;
  auto rep = nlohmann::json::parse(r.out);
  EXPECT_EQ(rep["offset_source"], "flag");
  EXPECT_LT((testing::json_matrix(rep["C_hat"]) - truth_C()).norm() / truth_C().norm(),
            1e-8);

  ASSERT_EQ(run_cli(concat({"offset", "--no-filter", "--out", dir_ / "off.json"},
                           calib_files()))
                .code,
            0);
  r = run_cli(concat({"calibrate", "--no-filter", "--offset-report", dir_ / "off.json"},
                     calib_files()));
  ASSERT_EQ(r.code, 0) << r.err;
  rep = nlohmann::json::parse(r.out);
  EXPECT_EQ(rep["offset_source"], "report:" + (dir_ / "off.json"));

  r = run_cli(concat({"calibrate", "--no-filter", "--offset", "1,2,3"}, calib_files()));
  EXPECT_EQ(r.code, cli::kExitUsage);
}

TEST_F(CliTest, TwoDatasetsAreNotIdentifiable) {
  const CliResult r = run_cli(concat({"calibrate", "--no-filter"},
                                     dataset_files(dir_, "data", {1, 2})));
  EXPECT_EQ(r.code, cli::kExitNotIdentifiable);
  EXPECT_NE(r.err.find("N_D >= 3"), std::string::npos);
}

TEST_F(CliTest, IdenticalMassSpecsAreNotIdentifiable) {
  const GroundTruth truth = make_ground_truth(3, 10.0);
  const AddedMassSpec same(0.51, Vector3d(0.1, 0.0, 0.05));
  std::vector<std::string> files;
  for (int i = 0; i < 3; ++i) {
    SweepSpec sweep;
    sweep.jitter_deg = 2.0;
    sweep.seed = static_cast<std::uint64_t>(i);
    const std::string f = dir_ / ("same" + std::to_string(i) + ".csv");
    export_dataset(f, generate_dataset(truth, same, sweep, {}, "same" + std::to_string(i)));
    files.push_back(f);
  }
  const CliResult r = run_cli(concat({"calibrate", "--no-filter"}, files));
  EXPECT_EQ(r.code, cli::kExitNotIdentifiable);
  EXPECT_NE(r.err.find("N_D >= 3"), std::string::npos);
}

TEST_F(CliTest, IllConditionedNeedsForce) {
  CliResult r = run_cli(
      concat({"calibrate", "--no-filter", "--ill-condition", "10"}, calib_files()));
  EXPECT_EQ(r.code, cli::kExitIllConditioned);
  EXPECT_TRUE(r.out.empty());
  r = run_cli(concat({"calibrate", "--no-filter", "--ill-condition", "10", "--force"},
                     calib_files()));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(nlohmann::json::parse(r.out)["ill_conditioned"].get<bool>());
}

TEST_F(CliTest, ValidateReportsSpheresAndTables) {
  ASSERT_EQ(run_cli(concat({"calibrate", "--no-filter", "--out", dir_ / "cal.json"},
                           calib_files()))
                .code,
            0);
  const CliResult r = run_cli(concat(
      {"validate", "--no-filter", "--calibration", dir_ / "cal.json", "--out",
       dir_ / "val.json", "--table", dir_ / "val.txt", "--points-dir", dir_ / "pts",
       "--sensor", "leg"},
      valid_files()));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = load_json(dir_ / "val.json");
  EXPECT_TRUE(schema_errors(rep, "validation_report").empty());
  ASSERT_EQ(rep["rows"].size(), 4u);
  for (const auto& row : rep["rows"]) {
    EXPECT_LT(row["anisotropy"].get<double>(), 1e-8);
    EXPECT_NEAR(row["mass_est"].get<double>(), row["added_mass_kg"].get<double>(), 1e-8);
  }
  EXPECT_EQ(rep["baseline_source"], "calibration");

  const std::string table = slurp(dir_ / "val.txt");
  EXPECT_EQ(table, cli::render_validation_tables(rep));
  for (const char* col : {"Sensor", "Dataset", "Added mass [kg]", "Semiaxis 1 [N]",
                          "Semiaxis 2 [N]", "Semiaxis 3 [N]"}) {
    EXPECT_NE(table.find(col), std::string::npos) << col;
  }
  EXPECT_NE(table.find("leg"), std::string::npos);

  const std::string forces = slurp(dir_ / "pts/dataset_5_forces.csv");
  EXPECT_EQ(forces.rfind("fx,fy,fz\n", 0), 0u);
  EXPECT_EQ(std::count(forces.begin(), forces.end(), '\n'), 51);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "pts/dataset_8_projected.csv"));
}

TEST_F(CliTest, ValidateBaselineFromDataset) {
  ASSERT_EQ(run_cli(concat({"calibrate", "--no-filter", "--out", dir_ / "cal.json"},
                           calib_files()))
                .code,
            0);
  CliResult r = run_cli(concat({"validate", "--no-filter", "--calibration",
                                dir_ / "cal.json", "--baseline", "dataset:dataset_7"},
                               valid_files()));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = nlohmann::json::parse(r.out);
  EXPECT_EQ(rep["baseline_source"], "dataset:dataset_7");
  for (const auto& row : rep["rows"]) {
    EXPECT_NEAR(row["mass_est"].get<double>(), row["added_mass_kg"].get<double>(), 1e-8);
  }
  r = run_cli(concat({"validate", "--no-filter", "--calibration", dir_ / "cal.json",
                      "--baseline", "dataset:nope"},
                     valid_files()));
  EXPECT_EQ(r.code, cli::kExitUsage);
}

TEST_F(CliTest, MissingCalibrationIsUsageError) {
  CliResult r = run_cli(concat({"validate", "--no-filter"}, valid_files()));
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  r = run_cli(concat({"validate", "--no-filter", "--calibration", dir_ / "absent.json"},
                     valid_files()));
  EXPECT_EQ(r.code, cli::kExitUsage);
}

TEST_F(CliTest, MalformedCalibrationReportIsDataError) {
  std::ofstream(dir_ / "bad.json") << "{\"schema\": \"ftcal.calibration_report\"}";
  const CliResult r = run_cli(concat(
      {"validate", "--no-filter", "--calibration", dir_ / "bad.json"}, valid_files()));
  EXPECT_EQ(r.code, cli::kExitDataError);
}

TEST_F(CliTest, FilteringShortSyntheticLogsFails) {
  // 50 static samples cannot fill the default 301-sample window.
  const CliResult r = run_cli(concat({"offset"}, calib_files()));
  EXPECT_EQ(r.code, cli::kExitDataError);
  EXPECT_NE(r.err.find("SignalTooShort"), std::string::npos);
}

TEST_F(CliTest, ConfigFileSuppliesFlags) {
  std::ofstream(dir_ / "run.cfg") << "# offset settings\nno-filter = true\nout="
                                  << (dir_ / "cfg_off.json") << "\npooled=false\n";
  CliResult r = run_cli(concat({"offset", "--config", dir_ / "run.cfg"}, calib_files()));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir_ / "cfg_off.json"));

  // The command line wins over the file.
  r = run_cli(concat({"offset", "--config", dir_ / "run.cfg", "--out", dir_ / "cli.json"},
                     calib_files()));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir_ / "cli.json"));

  std::ofstream(dir_ / "bad.cfg") << "no-such-flag=1\n";
  r = run_cli(concat({"offset", "--config", dir_ / "bad.cfg"}, calib_files()));
  EXPECT_EQ(r.code, cli::kExitUsage);
  std::ofstream(dir_ / "worse.cfg") << "just words\n";
  r = run_cli(concat({"offset", "--config", dir_ / "worse.cfg"}, calib_files()));
  EXPECT_EQ(r.code, cli::kExitUsage);
  std::ofstream(dir_ / "window.cfg") << "sg-window=4\n";
  r = run_cli(concat({"offset", "--config", dir_ / "window.cfg"}, calib_files()));
  EXPECT_EQ(r.code, cli::kExitUsage);
}

TEST_F(CliTest, RerunsAreIdenticalAndInputsUntouched) {
  std::vector<std::string> before;
  for (const auto& f : calib_files()) before.push_back(slurp(f));
  const auto args = concat({"calibrate", "--no-filter"}, calib_files());
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(concat(args, {"--jobs", "4"}));
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto files = calib_files();
  for (std::size_t i = 0; i < files.size(); ++i) EXPECT_EQ(slurp(files[i]), before[i]);
}

TEST_F(CliTest, MalformedCsvIsDataError) {
  std::ofstream(dir_ / "broken.csv") << "t,r1,r2,r3,r4,r5,r6,ax,ay,az\n0,1,2,3\n";
  std::ofstream(dir_ / "broken.meta") << "mass_kg=0\ncom_m=0,0,0\nlabel=broken\n";
  const CliResult r = run_cli({"offset", "--no-filter", dir_ / "broken.csv"});
  EXPECT_EQ(r.code, cli::kExitDataError);
  EXPECT_NE(r.err.find(":2:"), std::string::npos) << r.err;
}

TEST_F(CliTest, MissingSidecarIsIoError) {
  std::filesystem::copy_file(calib_files()[0], dir_ / "orphan.csv");
  const CliResult r = run_cli({"offset", "--no-filter", dir_ / "orphan.csv"});
  EXPECT_EQ(r.code, cli::kExitIo);
}

TEST_F(CliTest, UnwritableOutputIsIoError) {
  std::ofstream(dir_ / "plain") << "x";
  const CliResult r = run_cli({"synth", "--out", dir_ / "plain/sub"});
  EXPECT_EQ(r.code, cli::kExitIo);
}

TEST_F(CliTest, HelpAndVersion) {
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({"calibrate", "--help"}).code, 0);
  EXPECT_NE(run_cli({"--version"}).out.find("ftcal"), std::string::npos);
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitUsage);
}

TEST_F(CliTest, BinaryExitCodes) {
  EXPECT_EQ(testing::run_binary("--help"), 0);
  EXPECT_EQ(testing::run_binary("synth --seed 7 --out " + (dir_ / "bin")), 0);
  std::string calib;
  for (const auto& f : calib_files()) calib += " " + f;
  EXPECT_EQ(testing::run_binary("calibrate --no-filter" + calib), 0);
  EXPECT_EQ(testing::run_binary("calibrate --no-filter " + calib_files()[0] + " " +
                                calib_files()[1]),
            cli::kExitNotIdentifiable);
  EXPECT_EQ(testing::run_binary("validate " + valid_files()[0]), cli::kExitUsage);
}

TEST(ExitCodeTest, EveryErrorKindMapsToADocumentedCode) {
  const std::set<int> documented{cli::kExitUsage,     cli::kExitIo,
                                 cli::kExitNotIdentifiable, cli::kExitDegenerateSpan,
                                 cli::kExitIllConditioned,  cli::kExitDataError,
                                 cli::kExitGeometryError};
  for (int k = 0; k <= static_cast<int>(ErrorKind::kIoError); ++k) {
    EXPECT_TRUE(documented.count(cli::exit_code_for(static_cast<ErrorKind>(k))));
  }
  EXPECT_EQ(cli::exit_code_for(ErrorKind::kDegenerateSpan), 5);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::kNotIdentifiable), 4);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::kRankDeficientSystem), 4);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::kIllConditioned), 6);
}

TEST(SchemaCheckerTest, RejectsBrokenReports) {
  nlohmann::json doc = {{"schema", "ftcal.offset_report"}, {"schema_version", 1}};
  EXPECT_FALSE(schema_errors(doc, "offset_report").empty());
  doc = nlohmann::json::parse(R"({"schema": "ftcal.synthetic_truth", "extra": 1})");
  const auto errors = schema_errors(doc, "synthetic_truth");
  EXPECT_TRUE(std::any_of(errors.begin(), errors.end(), [](const std::string& e) {
    return e.find("unexpected property extra") != std::string::npos;
  }));
}

TEST(ConfigFileTest, ParsesKeyValueLines) {
  ScratchDir dir("config_parse");
  std::ofstream(dir / "a.cfg") << "\n# comment\n a = 1 \nb=x=y\n";
  const auto kv = cli::read_config_file(dir / "a.cfg");
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"a", "1"}));
  EXPECT_EQ(kv[1], (std::pair<std::string, std::string>{"b", "x=y"}));
}

}  // namespace
}  // namespace ftcal
