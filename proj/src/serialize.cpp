#include "bell/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "bell/errors.hpp"

namespace bell {

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drops the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

Json rounded_list(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(rounded(v));
  return out;
}

std::string outcome_string(const std::vector<OutcomePair>& outcomes, bool left) {
  std::string s;
  s.reserve(outcomes.size());
  for (const auto& p : outcomes) s.push_back(glyph(left ? p.left : p.right));
  return s;
}

const Json& require(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidConfiguration(std::string("config is missing '") + key + "'");
  return j.at(key);
}

std::vector<double> angle_list(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_array()) throw InvalidConfiguration(std::string("'") + key + "' must be an array of degrees");
  std::vector<double> out;
  for (const auto& a : v) {
    if (!a.is_number()) throw InvalidConfiguration(std::string("'") + key + "' must contain numbers");
    out.push_back(a.get<double>());
  }
  return out;
}

std::uint64_t unsigned_field(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw InvalidConfiguration(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string cell_text(const TableCell& c) {
  const char g = glyph(c.outcome);
  return c.kind == CellKind::inferred ? std::string{'[', g, ']'} : std::string{' ', g, ' '};
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

Json to_json(const ExperimentConfig& config) {
  Json j;
  j["source"] = config.source;
  j["left_angles"] = rounded_list(config.left_angles);
  j["right_angles"] = rounded_list(config.right_angles);
  j["trials_per_setting"] = config.trials_per_setting;
  j["seed"] = config.seed;
  j["output_path"] = config.output_path;
  return j;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidConfiguration("experiment config must be a JSON object");
  static const std::set<std::string> known{"source",     "left_angles", "right_angles", "trials_per_setting",
                                           "seed",       "output_path"};
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw InvalidConfiguration("unknown config key '" + key + "'");

  ExperimentConfig c;
  const Json& source = require(j, "source");
  if (!source.is_string()) throw InvalidConfiguration("'source' must be a string");
  c.source = source.get<std::string>();
  c.left_angles = angle_list(j, "left_angles");
  c.right_angles = angle_list(j, "right_angles");
  c.trials_per_setting = unsigned_field(j, "trials_per_setting");
  if (j.contains("seed")) c.seed = unsigned_field(j, "seed");
  if (j.contains("output_path")) {
    if (!j.at("output_path").is_string()) throw InvalidConfiguration("'output_path' must be a string");
    c.output_path = j.at("output_path").get<std::string>();
  }
  return c;
}

Json to_json(const RunRecord& record) {
  Json j;
  j["config"] = to_json(record.config);
  j["provenance"] = {{"seed", record.provenance.seed}, {"version", record.provenance.version}};
  Json settings = Json::array();
  for (const auto& s : record.settings) {
    settings.push_back({{"setting_pair", s.index},
                        {"left_deg", rounded(s.left_deg)},
                        {"right_deg", rounded(s.right_deg)},
                        {"trials", s.outcomes.size()},
                        {"left", outcome_string(s.outcomes, true)},
                        {"right", outcome_string(s.outcomes, false)}});
  }
  j["settings"] = std::move(settings);
  return j;
}

std::string to_csv(const RunRecord& record) {
  std::ostringstream out;
  out << "setting_pair,trial,left,right\n";
  for (const auto& s : record.settings)
    for (std::size_t t = 0; t < s.outcomes.size(); ++t)
      out << s.index << ',' << t << ',' << value(s.outcomes[t].left) << ',' << value(s.outcomes[t].right) << '\n';
  return out.str();
}

std::string to_text(const RunRecord& record) {
  std::ostringstream out;
  out << "source " << record.config.source << "\n";
  out << "seed " << record.provenance.seed << "\n";
  for (const auto& s : record.settings) {
    const AntialignmentCount a = empirical_antialignment(s);
    const CorrelationEstimate c = empirical_correlation(s);
    out << "L=" << format_number(s.left_deg) << " R=" << format_number(s.right_deg) << " trials=" << a.total
        << " anti_aligned=" << a.anti_aligned << " fraction=" << format_number(a.fraction)
        << " correlation=" << format_number(c.estimate) << " std_error=" << format_number(c.std_error) << "\n";
  }
  return out.str();
}

Json to_json(const BellEvaluation& e) {
  return {{"phi_deg", rounded(rad_to_deg(e.phi))},
          {"theta_deg", rounded(rad_to_deg(e.theta))},
          {"c_phi", rounded(e.c_phi)},
          {"c_theta", rounded(e.c_theta)},
          {"c_diff", rounded(e.c_diff)},
          {"lhs", rounded(e.lhs)},
          {"bound", rounded(e.bound)},
          {"error_bar", rounded(e.error_bar)},
          {"verdict", to_string(e.verdict)}};
}

Json to_json(const ScanResult& scan) {
  Json evals = Json::array();
  for (const auto& e : scan.evaluations) evals.push_back(to_json(e));
  return {{"step_deg", rounded(rad_to_deg(scan.step))},
          {"points_per_axis", scan.points_per_axis},
          {"violations", scan.violations()},
          {"max", to_json(scan.best())},
          {"evaluations", std::move(evals)}};
}

std::string to_csv(const ScanResult& scan) {
  std::ostringstream out;
  out << "phi_deg,theta_deg,c_phi,c_theta,c_diff,lhs,verdict\n";
  for (const auto& e : scan.evaluations)
    out << format_number(rad_to_deg(e.phi)) << ',' << format_number(rad_to_deg(e.theta)) << ','
        << format_number(e.c_phi) << ',' << format_number(e.c_theta) << ',' << format_number(e.c_diff) << ','
        << format_number(e.lhs) << ',' << to_string(e.verdict) << '\n';
  return out.str();
}

std::string to_text(const ScanResult& scan) {
  const BellEvaluation& b = scan.best();
  std::ostringstream out;
  out << "step_deg " << format_number(rad_to_deg(scan.step)) << "\n";
  out << "grid_points " << scan.evaluations.size() << "\n";
  out << "violations " << scan.violations() << "\n";
  out << "max_lhs " << format_number(b.lhs) << " at phi_deg " << format_number(rad_to_deg(b.phi))
      << " theta_deg " << format_number(rad_to_deg(b.theta)) << " (" << to_string(b.verdict) << ")\n";
  return out.str();
}

Json to_json(const OracleReport& report) {
  const Certification& c = report.certification;
  Json strategies = Json::array();
  for (std::size_t i = 0; i < c.strategies.size(); ++i) {
    const StrategyLhs& s = c.per_strategy[i];
    strategies.push_back({{"index", i},
                          {"left", c.strategies[i].assignment()},
                          {"c_phi", s.c_phi.str()},
                          {"c_theta", s.c_theta.str()},
                          {"c_diff", s.c_diff.str()},
                          {"lhs", s.lhs.str()}});
  }
  Json angles = Json::array();
  for (double a : c.angles) angles.push_back(rounded(rad_to_deg(a)));
  Json j = {{"angles_deg", std::move(angles)},
            {"strategy_count", c.strategies.size()},
            {"strategies", std::move(strategies)},
            {"max_lhs", c.max_lhs.str()},
            {"witness", {{"index", c.witness_index}, {"left", c.witness().assignment()}}},
            {"bound", "1"},
            {"quantum_lhs", rounded(report.quantum.lhs)},
            {"gap", rounded(report.quantum.lhs - c.max_lhs.to_double())},
            {"certified", report.certified()}};
  if (report.grid) {
    j["grid"] = {{"step_deg", rounded(rad_to_deg(report.grid->step))},
                 {"triples", report.grid->triples},
                 {"strategies_checked", report.grid->strategies_checked},
                 {"max_lhs", report.grid->overall_max.str()},
                 {"min_of_max_lhs", report.grid->overall_min_of_max.str()},
                 {"uncertified", report.grid->uncertified}};
  }
  return j;
}

std::string to_csv(const OracleReport& report) {
  const Certification& c = report.certification;
  std::ostringstream out;
  out << "strategy,left,c_phi,c_theta,c_diff,lhs\n";
  for (std::size_t i = 0; i < c.strategies.size(); ++i) {
    const StrategyLhs& s = c.per_strategy[i];
    out << i << ',' << c.strategies[i].assignment() << ',' << s.c_phi.str() << ',' << s.c_theta.str() << ','
        << s.c_diff.str() << ',' << s.lhs.str() << '\n';
  }
  return out.str();
}

std::string to_text(const OracleReport& report) {
  const Certification& c = report.certification;
  std::ostringstream out;
  out << "angles_deg";
  for (double a : c.angles) out << ' ' << format_number(rad_to_deg(a));
  out << "\nstrategies " << c.strategies.size() << "\n";
  for (std::size_t i = 0; i < c.strategies.size(); ++i)
    out << "  " << c.strategies[i].assignment() << " lhs " << c.per_strategy[i].lhs.str() << "\n";
  out << "certified_max " << c.max_lhs.str() << " (witness " << c.witness().assignment() << ")\n";
  out << "quantum_lhs " << format_number(report.quantum.lhs) << "\n";
  out << "gap " << format_number(report.quantum.lhs - c.max_lhs.to_double()) << "\n";
  if (report.grid) {
    out << "grid_step_deg " << format_number(rad_to_deg(report.grid->step)) << " triples " << report.grid->triples
        << " max " << report.grid->overall_max.str() << " uncertified " << report.grid->uncertified << "\n";
  }
  out << "status " << (report.certified() ? "certified" : "CERTIFICATION FAILED") << "\n";
  return out.str();
}

Json to_json(const NoSignalingReport& report) {
  Json marginals = Json::array();
  for (const auto& m : report.marginals)
    marginals.push_back({{"right_deg", rounded(m.right_deg)},
                         {"left_plus", m.left_plus},
                         {"trials", m.trials},
                         {"left_plus_fraction", rounded(m.fraction())}});
  return {{"left_deg", rounded(report.left_deg)},
          {"marginals", std::move(marginals)},
          {"chi_square", rounded(report.chi_square)},
          {"degrees_of_freedom", report.degrees_of_freedom},
          {"p_value", rounded(report.p_value)},
          {"significance", rounded(report.significance)},
          {"passed", report.passed}};
}

std::string to_csv(const NoSignalingReport& report) {
  std::ostringstream out;
  out << "left_deg,right_deg,left_plus,trials,left_plus_fraction\n";
  for (const auto& m : report.marginals)
    out << format_number(report.left_deg) << ',' << format_number(m.right_deg) << ',' << m.left_plus << ','
        << m.trials << ',' << format_number(m.fraction()) << '\n';
  return out.str();
}

std::string to_text(const NoSignalingReport& report) {
  std::ostringstream out;
  out << "left_deg " << format_number(report.left_deg) << "\n";
  for (const auto& m : report.marginals)
    out << "  R=" << format_number(m.right_deg) << " left_plus " << m.left_plus << "/" << m.trials << " = "
        << format_number(m.fraction()) << "\n";
  out << "chi_square " << format_number(report.chi_square) << " dof " << report.degrees_of_freedom << " p_value "
      << format_number(report.p_value) << "\n";
  out << "status " << (report.passed ? "pass" : "FAIL") << "\n";
  return out.str();
}

Json to_json(const DataTable& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    auto side = [](const std::vector<TableCell>& cells) {
      Json out = Json::array();
      for (const auto& c : cells) {
        Json cell = {{"outcome", value(c.outcome)},
                     {"kind", c.kind == CellKind::measured ? "measured" : "inferred"}};
        if (c.pair) cell["pair"] = {{"setting_pair", c.pair->first}, {"trial", c.pair->second}};
        out.push_back(std::move(cell));
      }
      return out;
    };
    rows.push_back({{"angle_deg", rounded(row.angle_deg)}, {"left", side(row.left)}, {"right", side(row.right)}});
  }
  return {{"columns", table.columns}, {"rows", std::move(rows)}};
}

std::string to_text(const DataTable& table) {
  constexpr std::size_t kAngleWidth = 5;
  std::ostringstream out;
  const std::size_t side_width = table.columns * 4;
  std::string left_title = "LEFT DETECTOR", right_title = "RIGHT DETECTOR";
  out << std::string(kAngleWidth + 3, ' ') << left_title
      << std::string(side_width > left_title.size() ? side_width - left_title.size() : 1, ' ') << "|| "
      << right_title << "\n";

  out << pad_left("L", kAngleWidth) << " | ";
  for (std::size_t c = 0; c < table.columns; ++c) out << pad_left(std::to_string(c + 1), 3) << ' ';
  out << "|| ";
  for (std::size_t c = 0; c < table.columns; ++c) out << pad_left(std::to_string(c + 1), 3) << ' ';
  out << "| " << "R" << "\n";

  for (const auto& row : table.rows) {
    const std::string angle = format_number(row.angle_deg);
    out << pad_left(angle, kAngleWidth) << " | ";
    for (const auto& cell : row.left) out << cell_text(cell) << ' ';
    out << "|| ";
    for (const auto& cell : row.right) out << cell_text(cell) << ' ';
    out << "| " << angle << "\n";
  }
  out << "[x] = inferred from anti-correlation at equal angles, not measured\n";

  const auto& r = table.rows;
  auto fraction_line = [&](std::size_t i, std::size_t j, const char* note) {
    const double predicted = antialignment_probability(deg_to_rad(r[j].angle_deg - r[i].angle_deg));
    out << "anti-aligned L=" << format_number(r[i].angle_deg) << " R=" << format_number(r[j].angle_deg) << ": "
        << format_number(table.antialignment(i, j)) << " (quantum " << format_number(predicted) << ", " << note
        << ")\n";
  };
  fraction_line(0, 1, "same pairs");
  fraction_line(0, 2, "across runs");
  fraction_line(1, 2, "across runs");
  return out.str();
}

}  // namespace bell
