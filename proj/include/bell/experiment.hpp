#pragma once

// Monte Carlo runs of the two-detector experiment.
//
// Each setting pair (L, R) gets its own batch of emitted pairs; every pair is
// measured exactly once, at that setting pair. There is deliberately no way to
// take a recorded pair and ask what it would have shown at another angle.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bell/kernels.hpp"
#include "bell/lhv_models.hpp"
#include "bell/quantum_core.hpp"

namespace bell {

inline constexpr std::uint64_t kDefaultSeed = 1964;
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kQuantumSource = "quantum";

struct ExperimentConfig {
  std::string source = kQuantumSource;  ///< "quantum" or a registered model name
  std::vector<double> left_angles;      ///< degrees
  std::vector<double> right_angles;     ///< degrees
  std::uint64_t trials_per_setting = 0;
  std::uint64_t seed = kDefaultSeed;
  std::string output_path;  ///< empty means stdout

  /// Throws InvalidConfiguration on empty angle lists, non-finite angles,
  /// zero trials or duplicate setting pairs.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Something that emits a pair of particles and measures them at (L, R).
class PairSource {
public:
  virtual ~PairSource() = default;
  virtual std::string name() const = 0;
  virtual OutcomePair draw(MeasurementDirection left, MeasurementDirection right, Rng& rng) const = 0;
};

/// Singlet pairs sampled from the Born-rule joint distribution.
class QuantumSource final : public PairSource {
public:
  std::string name() const override { return kQuantumSource; }
  OutcomePair draw(MeasurementDirection left, MeasurementDirection right, Rng& rng) const override {
    return sample_pair(left, right, rng);
  }
};

/// One lambda per pair; each side evaluates its own outcome function.
class LocalModelSource final : public PairSource {
public:
  explicit LocalModelSource(LocalModelPtr model);
  std::string name() const override { return model_->name(); }
  OutcomePair draw(MeasurementDirection left, MeasurementDirection right, Rng& rng) const override;
  const LocalModel& model() const { return *model_; }

private:
  LocalModelPtr model_;
};

/// "quantum" or a registry model; LHV models must pass verify_anticorrelation.
/// Throws NotFound for unknown names, InvalidConfiguration for broken models.
std::shared_ptr<const PairSource> make_source(const std::string& name);

struct SettingRecord {
  std::size_t index = 0;
  double left_deg = 0.0;
  double right_deg = 0.0;
  std::vector<OutcomePair> outcomes;  ///< position = trial index

  MeasurementDirection left() const { return MeasurementDirection::from_degrees(left_deg); }
  MeasurementDirection right() const { return MeasurementDirection::from_degrees(right_deg); }
};

struct Provenance {
  std::uint64_t seed = 0;
  std::string version = kVersion;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct RunRecord {
  ExperimentConfig config;
  std::vector<SettingRecord> settings;
  Provenance provenance;

  /// Throws NotFound when the setting pair was not run.
  const SettingRecord& find(double left_deg, double right_deg) const;
};

/// Random stream id for a setting pair, derived from the configured angles.
std::uint64_t setting_stream_id(double left_deg, double right_deg);

RunRecord run_experiment(const ExperimentConfig& config,
                         kernels::ExecutionPolicy policy = kernels::ExecutionPolicy::parallel);
RunRecord run_experiment(const ExperimentConfig& config, const PairSource& source,
                         kernels::ExecutionPolicy policy = kernels::ExecutionPolicy::parallel);

struct AntialignmentCount {
  double fraction = 0.0;
  std::uint64_t anti_aligned = 0;
  std::uint64_t total = 0;
};

AntialignmentCount empirical_antialignment(const SettingRecord& setting);
AntialignmentCount empirical_antialignment(const RunRecord& record, double left_deg, double right_deg);

struct CorrelationEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

CorrelationEstimate empirical_correlation(const SettingRecord& setting);
CorrelationEstimate empirical_correlation(const RunRecord& record, double left_deg, double right_deg);

/// Two-sided 3-sigma tail probability of a normal distribution.
inline constexpr double kThreeSigmaSignificance = 0.0026997960632601866;

struct LeftMarginal {
  double right_deg = 0.0;
  std::uint64_t left_plus = 0;
  std::uint64_t trials = 0;
  double fraction() const { return trials ? static_cast<double>(left_plus) / static_cast<double>(trials) : 0.0; }
};

struct NoSignalingReport {
  double left_deg = 0.0;
  std::vector<LeftMarginal> marginals;
  double chi_square = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;
  double significance = kThreeSigmaSignificance;
  bool passed = true;
};

/// Chi-square homogeneity test of the left "+" frequency across right
/// settings. Requires at least two settings sharing one left angle and one
/// trial count; otherwise throws InvalidConfiguration.
NoSignalingReport nosignaling_check(std::span<const SettingRecord> settings);
NoSignalingReport nosignaling_check(const RunRecord& record, double left_deg);

enum class CellKind { measured, inferred };

struct TableCell {
  Outcome outcome = Outcome::plus;
  CellKind kind = CellKind::measured;
  /// Setting index and trial of the pair a measured cell came from.
  std::optional<std::pair<std::size_t, std::size_t>> pair;
};

struct TableRow {
  double angle_deg = 0.0;
  std::vector<TableCell> left;
  std::vector<TableCell> right;
};

/// Three rows (angles a, b, c) built from runs (a, b) and (a, c): row a's left
/// side and rows b and c's right sides are measured, the equal-angle partner
/// cells are filled in by anti-correlation.
struct DataTable {
  std::array<TableRow, 3> rows;
  std::size_t columns = 0;

  /// Fraction of columns where row i's left cell and row j's right cell differ.
  double antialignment(std::size_t left_row, std::size_t right_row) const;
};

/// Throws InvalidConfiguration unless the record is exactly two settings with
/// one shared left angle, two distinct right angles different from it, and
/// equal trial counts.
DataTable render_table(const RunRecord& record);

}  // namespace bell
