#include "bell/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <utility>

#include <boost/math/distributions/chi_squared.hpp>

#include "bell/errors.hpp"

namespace bell {

namespace {

constexpr double kAngleMatchTolerance = 1e-9;  // degrees

std::uint64_t bits_of(double v) {
  std::uint64_t b = 0;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

bool same_angle_deg(double a, double b) {
  return rad_to_deg(setting_distance(deg_to_rad(a), deg_to_rad(b))) < kAngleMatchTolerance;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (source.empty()) throw InvalidConfiguration("source must not be empty");
  if (left_angles.empty()) throw InvalidConfiguration("at least one left angle is required");
  if (right_angles.empty()) throw InvalidConfiguration("at least one right angle is required");
  if (trials_per_setting == 0) throw InvalidConfiguration("trials_per_setting must be at least 1");
  for (double a : left_angles)
    if (!std::isfinite(a)) throw InvalidConfiguration("left angles must be finite");
  for (double a : right_angles)
    if (!std::isfinite(a)) throw InvalidConfiguration("right angles must be finite");
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
  for (double l : left_angles)
    for (double r : right_angles)
      if (!seen.emplace(bits_of(l), bits_of(r)).second)
        throw InvalidConfiguration("duplicate setting pair (" + std::to_string(l) + ", " +
                                   std::to_string(r) + ")");
}

LocalModelSource::LocalModelSource(LocalModelPtr model) : model_(std::move(model)) {
  if (!model_) throw InvalidConfiguration("local model source needs a model");
}

OutcomePair LocalModelSource::draw(MeasurementDirection left, MeasurementDirection right, Rng& rng) const {
  const HiddenVariable lambda = model_->sample_lambda(rng);
  return {model_->outcome_left(left, lambda), model_->outcome_right(right, lambda)};
}

std::shared_ptr<const PairSource> make_source(const std::string& name) {
  if (name == kQuantumSource) return std::make_shared<QuantumSource>();
  LocalModelPtr model = model_registry().create(name);
  const auto grid = uniform_angle_grid(100);
  const AnticorrelationReport report = verify_anticorrelation(*model, grid, 1000, RngStream(kDefaultSeed, 0));
  if (!report.passed)
    throw InvalidConfiguration("model '" + name + "' violates perfect anti-correlation at equal settings");
  return std::make_shared<LocalModelSource>(std::move(model));
}

const SettingRecord& RunRecord::find(double left_deg, double right_deg) const {
  for (const auto& s : settings)
    if (same_angle_deg(s.left_deg, left_deg) && same_angle_deg(s.right_deg, right_deg)) return s;
  throw NotFound("setting pair (" + std::to_string(left_deg) + ", " + std::to_string(right_deg) +
                 ") is not in the record");
}

std::uint64_t setting_stream_id(double left_deg, double right_deg) {
  return mix64(bits_of(left_deg) ^ 0x243F6A8885A308D3ULL) ^ mix64(bits_of(right_deg) + 0x13198A2E03707344ULL);
}

RunRecord run_experiment(const ExperimentConfig& config, kernels::ExecutionPolicy policy) {
  config.validate();
  const auto source = make_source(config.source);
  return run_experiment(config, *source, policy);
}

RunRecord run_experiment(const ExperimentConfig& config, const PairSource& source,
                         kernels::ExecutionPolicy policy) {
  config.validate();
  RunRecord record;
  record.config = config;
  record.provenance.seed = config.seed;

  for (double l : config.left_angles) {
    for (double r : config.right_angles) {
      SettingRecord s;
      s.index = record.settings.size();
      s.left_deg = l;
      s.right_deg = r;
      s.outcomes.resize(config.trials_per_setting);

      const RngStream stream(config.seed, setting_stream_id(l, r));
      const MeasurementDirection left = s.left(), right = s.right();
      auto draw = [&](std::uint64_t trial) {
        Rng rng = stream.trial(trial);
        return source.draw(left, right, rng);
      };
      std::span<OutcomePair> out(s.outcomes);
      if (policy == kernels::ExecutionPolicy::parallel)
        kernels::fill_indexed(out, draw);
      else
        kernels::serial::fill_indexed(out, draw);
      record.settings.push_back(std::move(s));
    }
  }
  return record;
}

AntialignmentCount empirical_antialignment(const SettingRecord& setting) {
  AntialignmentCount c;
  c.total = setting.outcomes.size();
  c.anti_aligned = static_cast<std::uint64_t>(
      std::count_if(setting.outcomes.begin(), setting.outcomes.end(), [](const auto& p) { return p.anti_aligned(); }));
  c.fraction = c.total ? static_cast<double>(c.anti_aligned) / static_cast<double>(c.total) : 0.0;
  return c;
}

AntialignmentCount empirical_antialignment(const RunRecord& record, double left_deg, double right_deg) {
  return empirical_antialignment(record.find(left_deg, right_deg));
}

CorrelationEstimate empirical_correlation(const SettingRecord& setting) {
  if (setting.outcomes.empty()) throw InvalidConfiguration("setting has no outcomes");
  const AntialignmentCount c = empirical_antialignment(setting);
  const double n = static_cast<double>(c.total);
  const auto aligned = static_cast<std::int64_t>(c.total - c.anti_aligned);
  const double mean = static_cast<double>(aligned - static_cast<std::int64_t>(c.anti_aligned)) / n;
  double se = 0.0;
  if (c.total > 1) se = std::sqrt(std::max(0.0, 1.0 - mean * mean) * n / (n - 1.0) / n);
  return {mean, se, c.total};
}

CorrelationEstimate empirical_correlation(const RunRecord& record, double left_deg, double right_deg) {
  return empirical_correlation(record.find(left_deg, right_deg));
}

NoSignalingReport nosignaling_check(std::span<const SettingRecord> settings) {
  if (settings.size() < 2) throw InvalidConfiguration("no-signaling check needs at least two right settings");
  NoSignalingReport report;
  report.left_deg = settings.front().left_deg;
  const std::size_t n = settings.front().outcomes.size();
  if (n == 0) throw InvalidConfiguration("no-signaling check needs outcomes");

  std::uint64_t plus_total = 0;
  for (const auto& s : settings) {
    if (!same_angle_deg(s.left_deg, report.left_deg))
      throw InvalidConfiguration("no-signaling check needs one shared left angle");
    if (s.outcomes.size() != n)
      throw InvalidConfiguration("no-signaling check needs equal trial counts per setting");
    LeftMarginal m;
    m.right_deg = s.right_deg;
    m.trials = n;
    m.left_plus = static_cast<std::uint64_t>(std::count_if(
        s.outcomes.begin(), s.outcomes.end(), [](const auto& p) { return p.left == Outcome::plus; }));
    plus_total += m.left_plus;
    report.marginals.push_back(m);
  }

  // 2 x k contingency table: rows are left "+"/"-", columns are right settings
  const double k = static_cast<double>(settings.size());
  const double grand = k * static_cast<double>(n);
  const double expected_plus = static_cast<double>(plus_total) / k;
  const double expected_minus = (grand - static_cast<double>(plus_total)) / k;
  double chi2 = 0.0;
  for (const auto& m : report.marginals) {
    const double plus = static_cast<double>(m.left_plus);
    const double minus = static_cast<double>(n) - plus;
    if (expected_plus > 0.0) chi2 += (plus - expected_plus) * (plus - expected_plus) / expected_plus;
    if (expected_minus > 0.0) chi2 += (minus - expected_minus) * (minus - expected_minus) / expected_minus;
  }
  report.chi_square = chi2;
  report.degrees_of_freedom = settings.size() - 1;
  const boost::math::chi_squared dist(static_cast<double>(report.degrees_of_freedom));
  report.p_value = boost::math::cdf(boost::math::complement(dist, chi2));
  report.passed = report.p_value >= report.significance;
  return report;
}

NoSignalingReport nosignaling_check(const RunRecord& record, double left_deg) {
  std::vector<SettingRecord> selected;
  for (const auto& s : record.settings)
    if (same_angle_deg(s.left_deg, left_deg)) selected.push_back(s);
  if (selected.empty()) throw NotFound("no settings with left angle " + std::to_string(left_deg));
  return nosignaling_check(selected);
}

double DataTable::antialignment(std::size_t left_row, std::size_t right_row) const {
  const auto& l = rows.at(left_row).left;
  const auto& r = rows.at(right_row).right;
  if (columns == 0) return 0.0;
  std::size_t anti = 0;
  for (std::size_t c = 0; c < columns; ++c) anti += l[c].outcome != r[c].outcome ? 1 : 0;
  return static_cast<double>(anti) / static_cast<double>(columns);
}

DataTable render_table(const RunRecord& record) {
  if (record.settings.size() != 2)
    throw InvalidConfiguration("table needs exactly two setting pairs, got " +
                               std::to_string(record.settings.size()));
  const SettingRecord& first = record.settings[0];
  const SettingRecord& second = record.settings[1];
  if (!same_angle_deg(first.left_deg, second.left_deg))
    throw InvalidConfiguration("table settings must share the left angle");
  if (same_angle_deg(first.right_deg, second.right_deg) || same_angle_deg(first.right_deg, first.left_deg) ||
      same_angle_deg(second.right_deg, first.left_deg))
    throw InvalidConfiguration("table needs three distinct angles");
  if (first.outcomes.size() != second.outcomes.size() || first.outcomes.empty())
    throw InvalidConfiguration("table settings need equal, non-zero trial counts");

  DataTable table;
  table.columns = first.outcomes.size();
  const std::array<double, 3> angles{first.left_deg, first.right_deg, second.right_deg};
  for (std::size_t i = 0; i < 3; ++i) table.rows[i].angle_deg = angles[i];

  auto measured = [](Outcome o, std::size_t setting, std::size_t trial) {
    return TableCell{o, CellKind::measured, std::make_pair(setting, trial)};
  };
  auto inferred = [](const TableCell& partner) {
    return TableCell{negate(partner.outcome), CellKind::inferred, std::nullopt};
  };

  for (std::size_t t = 0; t < table.columns; ++t) {
    table.rows[0].left.push_back(measured(first.outcomes[t].left, first.index, t));
    table.rows[1].right.push_back(measured(first.outcomes[t].right, first.index, t));
    table.rows[2].right.push_back(measured(second.outcomes[t].right, second.index, t));
  }
  for (std::size_t t = 0; t < table.columns; ++t) {
    table.rows[0].right.push_back(inferred(table.rows[0].left[t]));
    table.rows[1].left.push_back(inferred(table.rows[1].right[t]));
    table.rows[2].left.push_back(inferred(table.rows[2].right[t]));
  }
  return table;
}

}  // namespace bell
