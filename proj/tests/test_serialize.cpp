#include "bell/serialize.hpp"

#include <gtest/gtest.h>

#include "bell/errors.hpp"

using namespace bell;

namespace {

ExperimentConfig sample_config() {
  ExperimentConfig c;
  c.source = "vector";
  c.left_angles = {0, 22.5};
  c.right_angles = {60, 120};
  c.trials_per_setting = 12;
  c.seed = 7;
  c.output_path = "out.json";
  return c;
}

}  // namespace

TEST(Numbers, Formatting) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(120.0), "120");
  EXPECT_EQ(rounded(0.1 + 0.2), 0.3);
}

TEST(ConfigJson, RoundTrip) {
  const ExperimentConfig c = sample_config();
  EXPECT_EQ(experiment_config_from_json(to_json(c)), c);
  EXPECT_EQ(experiment_config_from_json(Json::parse(dump(to_json(c)))), c);
}

TEST(ConfigJson, StrictParsing) {
  Json j = to_json(sample_config());
  j["extra"] = 1;
  EXPECT_THROW(experiment_config_from_json(j), InvalidConfiguration);
  Json missing = to_json(sample_config());
  missing.erase("source");
  EXPECT_THROW(experiment_config_from_json(missing), InvalidConfiguration);
  Json wrong = to_json(sample_config());
  wrong["trials_per_setting"] = -3;
  EXPECT_THROW(experiment_config_from_json(wrong), InvalidConfiguration);
  EXPECT_THROW(experiment_config_from_json(Json::array()), InvalidConfiguration);
}

TEST(RunRecordJson, ContainsConfigAndOutcomes) {
  ExperimentConfig c = sample_config();
  c.source = "quantum";
  const RunRecord r = run_experiment(c);
  const Json j = to_json(r);
  EXPECT_EQ(experiment_config_from_json(j.at("config")), c);
  EXPECT_EQ(j.at("provenance").at("seed"), 7);
  EXPECT_EQ(j.at("provenance").at("version"), kVersion);
  ASSERT_EQ(j.at("settings").size(), 4u);
  const std::string left = j.at("settings")[0].at("left");
  ASSERT_EQ(left.size(), 12u);
  for (std::size_t t = 0; t < 12; ++t) EXPECT_EQ(left[t], glyph(r.settings[0].outcomes[t].left));
}

TEST(RunRecordJson, ByteStable) {
  const RunRecord r = run_experiment(sample_config());
  EXPECT_EQ(dump(to_json(r)), dump(to_json(run_experiment(sample_config()))));
  EXPECT_EQ(dump(to_json(r)).back(), '\n');
}

TEST(RunRecordCsv, HeaderAndRows) {
  const RunRecord r = run_experiment(sample_config());
  const std::string csv = to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "setting_pair,trial,left,right");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 4 * 12);
}

TEST(ScanOutput, CsvHeaderAndMaxRow) {
  const ScanResult s = violation_scan(quantum_correlator(), deg_to_rad(60));
  const std::string csv = to_csv(s);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "phi_deg,theta_deg,c_phi,c_theta,c_diff,lhs,verdict");
  EXPECT_NE(csv.find("\n60,120,-0.5,0.5,-0.5,1.5,violated\n"), std::string::npos);
  const Json j = to_json(s);
  EXPECT_EQ(j.at("max").at("lhs"), 1.5);
  EXPECT_EQ(j.at("points_per_axis"), 6);
}

TEST(OracleOutput, StatusLines) {
  std::vector<double> angles{0, deg_to_rad(60), deg_to_rad(120)};
  OracleReport ok{max_bell_lhs(angles), bell_lhs(quantum_correlator(), angles[1], angles[2]), std::nullopt};
  EXPECT_NE(to_text(ok).find("status certified"), std::string::npos);
  EXPECT_EQ(to_json(ok).at("max_lhs"), "1");
  EXPECT_EQ(to_json(ok).at("quantum_lhs"), 1.5);
  EXPECT_EQ(to_json(ok).at("gap"), 0.5);
  PairCorrelation rigged = [](const DeterministicStrategy&, std::size_t i, std::size_t j) {
    return i == 0 && j == 1 ? 1 : -1;
  };
  OracleReport bad{max_bell_lhs(angles, rigged), ok.quantum, std::nullopt};
  EXPECT_NE(to_text(bad).find("CERTIFICATION FAILED"), std::string::npos);
  EXPECT_EQ(to_json(bad).at("certified"), false);
}

TEST(TableOutput, InferredCellsBracketed) {
  ExperimentConfig c;
  c.left_angles = {0};
  c.right_angles = {60, 120};
  c.trials_per_setting = 10;
  const DataTable t = render_table(run_experiment(c));
  const std::string text = to_text(t);
  EXPECT_NE(text.find("LEFT DETECTOR"), std::string::npos);
  EXPECT_NE(text.find("RIGHT DETECTOR"), std::string::npos);
  // three rows of ten inferred cells each
  std::size_t inferred = 0;
  for (const char* cell : {"[+]", "[-]"})
    for (std::size_t at = 0; (at = text.find(cell, at)) != std::string::npos; ++at) ++inferred;
  EXPECT_EQ(inferred, 30u);
  const Json j = to_json(t);
  EXPECT_EQ(j.at("rows")[0].at("left")[0].at("kind"), "measured");
  EXPECT_EQ(j.at("rows")[0].at("right")[0].at("kind"), "inferred");
}
