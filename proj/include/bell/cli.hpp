#pragma once

// bellsim command line: parsing, dispatch and output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bell/experiment.hpp"
#include "bell/oracle.hpp"

namespace bell::cli {

enum class ExitCode : int {
  ok = 0,
  runtime_error = 1,
  missing_flag = 2,
  malformed_value = 3,
  unknown_subcommand = 4,
  unknown_flag = 5,
  certification_failure = 6,
};

enum class Subcommand { correlate, scan, experiment, oracle, table, nosignal };
enum class Format { text, json, csv };
enum class AngleUnit { degrees, radians };

const char* to_string(Subcommand s);

/// A parsed invocation. Angles are stored in degrees whatever --unit said.
struct Command {
  Subcommand kind = Subcommand::correlate;
  std::uint64_t seed = kDefaultSeed;
  std::string output_path;  ///< empty means stdout
  Format format = Format::text;
  AngleUnit unit = AngleUnit::degrees;

  std::string source = kQuantumSource;
  std::vector<double> left_deg;
  std::vector<double> right_deg;
  std::vector<double> angles_deg;  ///< oracle and table
  std::uint64_t trials = 0;        ///< 0 selects the exact or quadrature route where one exists
  std::uint64_t resolution = 0;    ///< quadrature nodes
  double step_deg = 0.0;           ///< scan grid
  std::optional<double> grid_step_deg;  ///< oracle triple grid

  friend bool operator==(const Command&, const Command&) = default;
};

class UsageError : public std::runtime_error {
public:
  UsageError(ExitCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
  ExitCode code() const { return code_; }

private:
  ExitCode code_;
};

/// argv[0] is the program name. Values from --config override flags.
/// Throws UsageError; returns nullopt after printing --help.
std::optional<Command> parse_args(const std::vector<std::string>& argv, std::ostream& out);

/// Builds the experiment configuration an `experiment` command describes.
ExperimentConfig to_experiment_config(const Command& cmd);

/// Test seams for paths that correct code never reaches.
struct Hooks {
  PairCorrelation oracle_correlation = strategy_correlation;
};

/// Writes `payload` to cmd.output_path, or to `out` when no path is set.
/// Throws std::runtime_error when the file cannot be written.
void emit(const std::string& payload, const std::string& path, std::ostream& out);

/// Executes a parsed command; returns the process exit code.
ExitCode run(const Command& cmd, std::ostream& out, std::ostream& err, const Hooks& hooks = {});

/// parse_args + run with every error mapped to its exit code.
int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err,
               const Hooks& hooks = {});

}  // namespace bell::cli
