#pragma once

// JSON, CSV and plain-text renderings of every result type.
//
// Output is byte-stable for fixed inputs: JSON object keys are sorted, real
// numbers are rounded to 12 significant digits, and every document ends with a
// newline.

#include <string>

#include <json.hpp>

#include "bell/experiment.hpp"
#include "bell/inequality.hpp"
#include "bell/oracle.hpp"

namespace bell {

using Json = nlohmann::json;

/// printf("%.12g") with negative zero printed as 0.
std::string format_number(double v);
/// v rounded to 12 significant digits, for embedding in JSON.
double rounded(double v);
/// Pretty-printed JSON followed by a newline.
std::string dump(const Json& j);

Json to_json(const ExperimentConfig& config);
/// Strict parse: unknown keys and wrong types throw InvalidConfiguration.
ExperimentConfig experiment_config_from_json(const Json& j);

Json to_json(const RunRecord& record);
/// Flattened rows: setting_pair,trial,left,right.
std::string to_csv(const RunRecord& record);
std::string to_text(const RunRecord& record);

Json to_json(const BellEvaluation& e);
Json to_json(const ScanResult& scan);
/// Header then one row per grid point: phi_deg,theta_deg,c_phi,c_theta,c_diff,lhs,verdict.
std::string to_csv(const ScanResult& scan);
std::string to_text(const ScanResult& scan);

/// Oracle certification plus the quantum value at the same settings.
struct OracleReport {
  Certification certification;
  BellEvaluation quantum;
  std::optional<TripleGridReport> grid;

  bool certified() const { return certification.certified() && (!grid || grid->certified()); }
};

Json to_json(const OracleReport& report);
std::string to_csv(const OracleReport& report);
std::string to_text(const OracleReport& report);

Json to_json(const NoSignalingReport& report);
std::string to_csv(const NoSignalingReport& report);
std::string to_text(const NoSignalingReport& report);

Json to_json(const DataTable& table);
/// Two-sided table; inferred cells are bracketed.
std::string to_text(const DataTable& table);

}  // namespace bell
