#include "bell/cli.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bell/errors.hpp"
#include "bell/inequality.hpp"
#include "bell/serialize.hpp"

namespace bell::cli {

namespace {

constexpr double kMaxAbsAngleDeg = 360.0;
constexpr std::uint64_t kDefaultMcTrials = 100000;
constexpr std::uint64_t kDefaultQuadratureResolution = 1000000;
// divisible by 360, so sign-model breakpoints on a whole-degree grid fall
// between quadrature nodes
constexpr std::uint64_t kDefaultScanResolution = 360000;
constexpr double kDefaultScanStepDeg = 10.0;
constexpr std::uint64_t kDefaultTableTrials = 10;

constexpr std::array<std::pair<const char*, Subcommand>, 6> kSubcommands{{
    {"correlate", Subcommand::correlate},
    {"scan", Subcommand::scan},
    {"experiment", Subcommand::experiment},
    {"oracle", Subcommand::oracle},
    {"table", Subcommand::table},
    {"nosignal", Subcommand::nosignal},
}};

const std::vector<double> kStandardAngles{0.0, 60.0, 120.0};

[[noreturn]] void malformed(const std::string& flag, const std::string& what) {
  throw UsageError(ExitCode::malformed_value, flag + ": " + what);
}

[[noreturn]] void missing(const std::string& flag) {
  throw UsageError(ExitCode::missing_flag, flag + " is required");
}

Format parse_format(const std::string& s) {
  if (s == "text") return Format::text;
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  malformed("--format", "expected text, json or csv, got '" + s + "'");
}

AngleUnit parse_unit(const std::string& s) {
  if (s == "deg" || s == "degrees") return AngleUnit::degrees;
  if (s == "rad" || s == "radians") return AngleUnit::radians;
  malformed("--unit", "expected degrees or radians, got '" + s + "'");
}

std::vector<double> json_angles(const Json& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& a : v) {
      if (!a.is_number()) malformed("--config", "'" + key + "' must contain numbers");
      out.push_back(a.get<double>());
    }
  } else {
    malformed("--config", "'" + key + "' must be a number or an array of numbers");
  }
  return out;
}

std::uint64_t json_unsigned(const Json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  malformed("--config", "'" + key + "' must be a non-negative integer");
}

double json_real(const Json& v, const std::string& key) {
  if (!v.is_number()) malformed("--config", "'" + key + "' must be a number");
  return v.get<double>();
}

std::string json_string(const Json& v, const std::string& key) {
  if (!v.is_string()) malformed("--config", "'" + key + "' must be a string");
  return v.get<std::string>();
}

/// Config values win over flags. Angles in a config file are always degrees.
void apply_config(const std::string& path, Command& cmd, bool& format_given) {
  std::ifstream in(path);
  if (!in) malformed("--config", "cannot read '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    malformed("--config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) malformed("--config", "expected a JSON object");

  for (const auto& [key, v] : j.items()) {
    if (key == "source") cmd.source = json_string(v, key);
    else if (key == "seed") cmd.seed = json_unsigned(v, key);
    else if (key == "left" || key == "left_angles") cmd.left_deg = json_angles(v, key);
    else if (key == "right" || key == "right_angles") cmd.right_deg = json_angles(v, key);
    else if (key == "angles") cmd.angles_deg = json_angles(v, key);
    else if (key == "trials" || key == "trials_per_setting") cmd.trials = json_unsigned(v, key);
    else if (key == "resolution") cmd.resolution = json_unsigned(v, key);
    else if (key == "step") cmd.step_deg = json_real(v, key);
    else if (key == "grid_step") cmd.grid_step_deg = json_real(v, key);
    else if (key == "output" || key == "output_path") cmd.output_path = json_string(v, key);
    else if (key == "format") {
      cmd.format = parse_format(json_string(v, key));
      format_given = true;
    } else {
      malformed("--config", "unknown key '" + key + "'");
    }
  }
}

void check_angles(const std::vector<double>& angles, const std::string& flag) {
  for (double a : angles)
    if (!std::isfinite(a) || std::abs(a) > kMaxAbsAngleDeg)
      malformed(flag, "angle " + format_number(a) + " is outside [-360, 360] degrees");
}

void apply_defaults(Command& cmd, bool format_given) {
  switch (cmd.kind) {
    case Subcommand::correlate:
      if (cmd.resolution == 0) cmd.resolution = kDefaultQuadratureResolution;
      break;
    case Subcommand::scan:
      if (cmd.step_deg == 0.0) cmd.step_deg = kDefaultScanStepDeg;
      if (cmd.resolution == 0) cmd.resolution = kDefaultScanResolution;
      if (!format_given) cmd.format = Format::csv;
      break;
    case Subcommand::experiment:
      if (cmd.trials == 0) cmd.trials = kDefaultMcTrials;
      if (!format_given) cmd.format = Format::json;
      break;
    case Subcommand::oracle:
      if (cmd.angles_deg.empty()) cmd.angles_deg = kStandardAngles;
      break;
    case Subcommand::table:
      if (cmd.angles_deg.empty()) cmd.angles_deg = kStandardAngles;
      if (cmd.trials == 0) cmd.trials = kDefaultTableTrials;
      break;
    case Subcommand::nosignal:
      if (cmd.left_deg.empty()) cmd.left_deg = {0.0};
      if (cmd.right_deg.empty()) cmd.right_deg = kStandardAngles;
      if (cmd.trials == 0) cmd.trials = kDefaultMcTrials;
      break;
  }
}

void validate(const Command& cmd) {
  check_angles(cmd.left_deg, "--left");
  check_angles(cmd.right_deg, "--right");
  check_angles(cmd.angles_deg, "--angles");
  switch (cmd.kind) {
    case Subcommand::correlate:
      if (cmd.left_deg.empty()) missing("--left");
      if (cmd.right_deg.empty()) missing("--right");
      if (cmd.left_deg.size() != 1) malformed("--left", "expects exactly one angle");
      if (cmd.right_deg.size() != 1) malformed("--right", "expects exactly one angle");
      break;
    case Subcommand::scan:
      if (!(cmd.step_deg > 0.0) || !std::isfinite(cmd.step_deg) || cmd.step_deg > 360.0)
        malformed("--step", "grid step must be in (0, 360] degrees");
      break;
    case Subcommand::experiment:
      if (cmd.left_deg.empty()) missing("--left");
      if (cmd.right_deg.empty()) missing("--right");
      break;
    case Subcommand::oracle:
      if (cmd.angles_deg.size() != 3) malformed("--angles", "expects exactly three angles");
      if (cmd.grid_step_deg && (!(*cmd.grid_step_deg > 0.0) || *cmd.grid_step_deg > 120.0))
        malformed("--grid-step", "grid step must be in (0, 120] degrees");
      break;
    case Subcommand::table:
      if (cmd.angles_deg.size() != 3) malformed("--angles", "expects exactly three angles");
      if (cmd.format == Format::csv) malformed("--format", "csv is not available for table output");
      break;
    case Subcommand::nosignal:
      if (cmd.left_deg.size() != 1) malformed("--left", "expects exactly one angle");
      if (cmd.right_deg.size() < 2) malformed("--right", "expects at least two angles");
      break;
  }
}

void add_common(CLI::App* sub, Command& cmd, std::string& format, std::string& unit, std::string& config) {
  sub->add_option("--seed", cmd.seed, "Random seed (default " + std::to_string(kDefaultSeed) + ")");
  sub->add_option("-o,--output", cmd.output_path, "Write the result to this file instead of stdout");
  sub->add_option("--format", format, "text, json or csv");
  sub->add_option("--unit", unit, "Unit of angle flags: degrees (default) or radians");
  sub->add_option("--config", config, "JSON file whose values override the flags");
}

}  // namespace

const char* to_string(Subcommand s) {
  for (const auto& [name, kind] : kSubcommands)
    if (kind == s) return name;
  return "?";
}

std::optional<Command> parse_args(const std::vector<std::string>& argv, std::ostream& out) {
  if (argv.size() < 2) throw UsageError(ExitCode::unknown_subcommand, "a subcommand is required");
  const std::string& first = argv[1];
  if (first != "-h" && first != "--help") {
    bool known = false;
    for (const auto& [name, _] : kSubcommands) known = known || first == name;
    if (!known) throw UsageError(ExitCode::unknown_subcommand, "unknown subcommand '" + first + "'");
  }

  Command cmd;
  std::string format, unit = "degrees", config;

  CLI::App app{"Singlet correlations, local hidden-variable models and the Bell inequality"};
  app.require_subcommand(1);

  auto* correlate = app.add_subcommand("correlate", "Correlation at one pair of settings");
  correlate->add_option("--left", cmd.left_deg, "Left detector angle")->expected(1);
  correlate->add_option("--right", cmd.right_deg, "Right detector angle")->expected(1);
  correlate->add_option("--source", cmd.source, "quantum or a model name");
  correlate->add_option("--trials", cmd.trials, "Monte Carlo trials (0 = exact or quadrature)");
  correlate->add_option("--resolution", cmd.resolution, "Quadrature nodes for local models");

  auto* scan = app.add_subcommand("scan", "Bell lhs over a grid of (phi, theta)");
  scan->add_option("--source", cmd.source, "quantum or a model name");
  scan->add_option("--step", cmd.step_deg, "Grid step (default 10 degrees)");
  scan->add_option("--trials", cmd.trials, "Monte Carlo trials per correlation (0 = exact or quadrature)");
  scan->add_option("--resolution", cmd.resolution, "Quadrature nodes for local models");

  auto* experiment = app.add_subcommand("experiment", "Simulate runs at every (left, right) setting pair");
  experiment->add_option("--source", cmd.source, "quantum or a model name");
  experiment->add_option("--left", cmd.left_deg, "Left angles, comma separated")->delimiter(',');
  experiment->add_option("--right", cmd.right_deg, "Right angles, comma separated")->delimiter(',');
  experiment->add_option("--trials", cmd.trials, "Pairs per setting (default 100000)");

  auto* oracle = app.add_subcommand("oracle", "Certify the local bound by enumerating strategies");
  oracle->add_option("--angles", cmd.angles_deg, "Reference, phi and theta (default 0,60,120)")->delimiter(',');
  oracle->add_option("--grid-step", cmd.grid_step_deg, "Also certify every angle triple on this grid");

  auto* table = app.add_subcommand("table", "Ten-run data table for two runs sharing a left angle");
  table->add_option("--angles", cmd.angles_deg, "Left angle and the two right angles (default 0,60,120)")
      ->delimiter(',');
  table->add_option("--source", cmd.source, "quantum or a model name");
  table->add_option("--trials", cmd.trials, "Pairs per run (default 10)");

  auto* nosignal = app.add_subcommand("nosignal", "Left marginals across right settings");
  nosignal->add_option("--source", cmd.source, "quantum or a model name");
  nosignal->add_option("--left", cmd.left_deg, "Shared left angle (default 0)")->expected(1);
  nosignal->add_option("--right", cmd.right_deg, "Right angles (default 0,60,120)")->delimiter(',');
  nosignal->add_option("--trials", cmd.trials, "Pairs per setting (default 100000)");

  for (auto* sub : {correlate, scan, experiment, oracle, table, nosignal}) add_common(sub, cmd, format, unit, config);

  std::vector<const char*> raw;
  raw.reserve(argv.size());
  for (const auto& a : argv) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::RequiredError& e) {
    throw UsageError(ExitCode::missing_flag, e.what());
  } catch (const CLI::ConversionError& e) {
    throw UsageError(ExitCode::malformed_value, e.what());
  } catch (const CLI::ValidationError& e) {
    throw UsageError(ExitCode::malformed_value, e.what());
  } catch (const CLI::ArgumentMismatch& e) {
    throw UsageError(ExitCode::malformed_value, e.what());
  } catch (const CLI::ParseError& e) {
    throw UsageError(ExitCode::unknown_flag, e.what());
  }

  for (const auto& [name, kind] : kSubcommands)
    if (app.got_subcommand(name)) cmd.kind = kind;

  bool format_given = !format.empty();
  if (format_given) cmd.format = parse_format(format);
  cmd.unit = parse_unit(unit);
  if (cmd.unit == AngleUnit::radians) {
    for (auto* list : {&cmd.left_deg, &cmd.right_deg, &cmd.angles_deg})
      for (double& a : *list) a = rad_to_deg(a);
    if (cmd.step_deg != 0.0) cmd.step_deg = rad_to_deg(cmd.step_deg);
    if (cmd.grid_step_deg) cmd.grid_step_deg = rad_to_deg(*cmd.grid_step_deg);
  }
  if (!config.empty()) apply_config(config, cmd, format_given);
  apply_defaults(cmd, format_given);
  validate(cmd);
  return cmd;
}

ExperimentConfig to_experiment_config(const Command& cmd) {
  ExperimentConfig c;
  c.source = cmd.source;
  c.left_angles = cmd.left_deg;
  c.right_angles = cmd.right_deg;
  c.trials_per_setting = cmd.trials;
  c.seed = cmd.seed;
  c.output_path = cmd.output_path;
  return c;
}

void emit(const std::string& payload, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << payload;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot write output file '" + path + "'");
  file << payload;
  file.flush();
  if (!file) throw std::runtime_error("failed while writing output file '" + path + "'");
}

namespace {

std::string render(const Command& cmd, const Json& json, const std::string& csv, const std::string& text) {
  switch (cmd.format) {
    case Format::json: return dump(json);
    case Format::csv: return csv;
    case Format::text: return text;
  }
  return text;
}

/// Estimate of the correlation at gap `delta` from `trials` simulated pairs.
CorrelatorValue sampled_correlation(const PairSource& source, double delta, std::uint64_t trials,
                                    std::uint64_t seed) {
  std::uint64_t bits = 0;
  const double folded = normalize_angle(delta);
  std::memcpy(&bits, &folded, sizeof bits);
  const RngStream stream(seed, bits);
  const MeasurementDirection left(0.0), right(delta);
  const std::int64_t sum = kernels::sum_integer(trials, [&](std::uint64_t i) -> std::int64_t {
    Rng rng = stream.trial(i);
    return source.draw(left, right, rng).product();
  });
  const double n = static_cast<double>(trials);
  const double mean = static_cast<double>(sum) / n;
  const double se = trials > 1 ? std::sqrt(std::max(0.0, 1.0 - mean * mean) / (n - 1.0)) : 0.0;
  return {mean, se};
}

Correlator correlator_for(const Command& cmd) {
  if (cmd.trials > 0) {
    std::shared_ptr<const PairSource> source = make_source(cmd.source);
    return [source, trials = cmd.trials, seed = cmd.seed](double delta) {
      return sampled_correlation(*source, delta, trials, seed);
    };
  }
  if (cmd.source == kQuantumSource) return quantum_correlator();
  return quadrature_correlator(model_registry().create(cmd.source), cmd.resolution);
}

ExitCode run_correlate(const Command& cmd, std::ostream& out) {
  const double left_deg = cmd.left_deg.front(), right_deg = cmd.right_deg.front();
  const MeasurementDirection left = MeasurementDirection::from_degrees(left_deg);
  const MeasurementDirection right = MeasurementDirection::from_degrees(right_deg);

  std::string method;
  CorrelatorValue c;
  if (cmd.trials > 0) {
    method = "monte-carlo";
    std::shared_ptr<const PairSource> source = make_source(cmd.source);
    const RngStream stream(cmd.seed, setting_stream_id(left_deg, right_deg));
    const std::int64_t sum = kernels::sum_integer(cmd.trials, [&](std::uint64_t i) -> std::int64_t {
      Rng rng = stream.trial(i);
      return source->draw(left, right, rng).product();
    });
    const double n = static_cast<double>(cmd.trials);
    c.value = static_cast<double>(sum) / n;
    c.std_error = cmd.trials > 1 ? std::sqrt(std::max(0.0, 1.0 - c.value * c.value) / (n - 1.0)) : 0.0;
  } else if (cmd.source == kQuantumSource) {
    method = "exact";
    c.value = correlation_qm(left, right);
  } else {
    method = "quadrature";
    const LocalModelPtr model = model_registry().create(cmd.source);
    c.value = lhv_correlation_quadrature(*model, left, right, cmd.resolution);
  }

  Json j = {{"source", cmd.source},
            {"left_deg", rounded(left_deg)},
            {"right_deg", rounded(right_deg)},
            {"method", method},
            {"correlation", rounded(c.value)}};
  std::ostringstream text;
  text << "source " << cmd.source << "\nleft_deg " << format_number(left_deg) << "\nright_deg "
       << format_number(right_deg) << "\nmethod " << method << "\ncorrelation " << format_number(c.value) << "\n";
  std::string csv_header = "source,left_deg,right_deg,method,correlation";
  std::string csv_row = cmd.source + "," + format_number(left_deg) + "," + format_number(right_deg) + "," +
                        method + "," + format_number(c.value);
  if (cmd.trials > 0) {
    j["std_error"] = rounded(c.std_error);
    j["trials"] = cmd.trials;
    text << "std_error " << format_number(c.std_error) << "\ntrials " << cmd.trials << "\n";
    csv_header += ",std_error,trials";
    csv_row += "," + format_number(c.std_error) + "," + std::to_string(cmd.trials);
  }
  emit(render(cmd, j, csv_header + "\n" + csv_row + "\n", text.str()), cmd.output_path, out);
  return ExitCode::ok;
}

ExitCode run_scan(const Command& cmd, std::ostream& out) {
  const ScanResult scan = violation_scan(correlator_for(cmd), deg_to_rad(cmd.step_deg));
  emit(render(cmd, to_json(scan), to_csv(scan), to_text(scan)), cmd.output_path, out);
  return ExitCode::ok;
}

ExitCode run_experiment_cmd(const Command& cmd, std::ostream& out) {
  const RunRecord record = run_experiment(to_experiment_config(cmd));
  std::string payload;
  switch (cmd.format) {
    case Format::json: payload = dump(to_json(record)); break;
    case Format::csv: payload = to_csv(record); break;
    case Format::text: payload = to_text(record); break;
  }
  emit(payload, cmd.output_path, out);
  return ExitCode::ok;
}

ExitCode run_oracle(const Command& cmd, std::ostream& out, const Hooks& hooks) {
  std::vector<double> angles;
  for (double a : cmd.angles_deg) angles.push_back(deg_to_rad(a));
  OracleReport report{max_bell_lhs(angles, hooks.oracle_correlation),
                      bell_lhs(quantum_correlator(), angles[1] - angles[0], angles[2] - angles[0]),
                      std::nullopt};
  if (cmd.grid_step_deg)
    report.grid = certify_triple_grid(deg_to_rad(*cmd.grid_step_deg), kernels::ExecutionPolicy::parallel,
                                      hooks.oracle_correlation);
  emit(render(cmd, to_json(report), to_csv(report), to_text(report)), cmd.output_path, out);
  return report.certified() ? ExitCode::ok : ExitCode::certification_failure;
}

ExitCode run_table(const Command& cmd, std::ostream& out) {
  ExperimentConfig config;
  config.source = cmd.source;
  config.left_angles = {cmd.angles_deg[0]};
  config.right_angles = {cmd.angles_deg[1], cmd.angles_deg[2]};
  config.trials_per_setting = cmd.trials;
  config.seed = cmd.seed;
  const DataTable table = render_table(run_experiment(config));
  emit(cmd.format == Format::json ? dump(to_json(table)) : to_text(table), cmd.output_path, out);
  return ExitCode::ok;
}

ExitCode run_nosignal(const Command& cmd, std::ostream& out) {
  ExperimentConfig config = to_experiment_config(cmd);
  config.output_path.clear();
  const RunRecord record = run_experiment(config);
  const NoSignalingReport report = nosignaling_check(record, cmd.left_deg.front());
  emit(render(cmd, to_json(report), to_csv(report), to_text(report)), cmd.output_path, out);
  return report.passed ? ExitCode::ok : ExitCode::certification_failure;
}

}  // namespace

ExitCode run(const Command& cmd, std::ostream& out, std::ostream& err, const Hooks& hooks) {
  try {
    switch (cmd.kind) {
      case Subcommand::correlate: return run_correlate(cmd, out);
      case Subcommand::scan: return run_scan(cmd, out);
      case Subcommand::experiment: return run_experiment_cmd(cmd, out);
      case Subcommand::oracle: return run_oracle(cmd, out, hooks);
      case Subcommand::table: return run_table(cmd, out);
      case Subcommand::nosignal: return run_nosignal(cmd, out);
    }
  } catch (const std::exception& e) {
    err << "bellsim " << to_string(cmd.kind) << ": " << e.what() << "\n";
    return ExitCode::runtime_error;
  }
  return ExitCode::runtime_error;
}

int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err, const Hooks& hooks) {
  try {
    const std::optional<Command> cmd = parse_args(argv, out);
    if (!cmd) return static_cast<int>(ExitCode::ok);
    return static_cast<int>(run(*cmd, out, err, hooks));
  } catch (const UsageError& e) {
    err << "bellsim: " << e.what() << "\nRun 'bellsim --help' for usage.\n";
    return static_cast<int>(e.code());
  }
}

}  // namespace bell::cli
