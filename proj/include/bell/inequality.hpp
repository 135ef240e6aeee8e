#pragma once

// The three-correlation Bell inequality |C(phi) - C(theta)| - C(theta - phi) <= 1.
//
// A correlator maps the angle between the two settings to a correlation
// value. The left detector is pinned at 0, so C(phi) and C(theta) are the
// correlations with the right detector at phi and theta; C(theta - phi) uses
// |theta - phi| folded into [0, 2pi).

#include <cstdint>
#include <functional>
#include <vector>

#include "bell/kernels.hpp"
#include "bell/lhv_models.hpp"

namespace bell {

struct CorrelatorValue {
  double value = 0.0;
  double std_error = 0.0;  ///< zero for exact correlators
};

using Correlator = std::function<CorrelatorValue(double delta)>;

enum class Verdict { satisfied, violated };

const char* to_string(Verdict v);

struct BellEvaluation {
  double phi = 0.0;    ///< radians
  double theta = 0.0;  ///< radians
  double c_phi = 0.0;
  double c_theta = 0.0;
  double c_diff = 0.0;
  double lhs = 0.0;
  double bound = 1.0;
  Verdict verdict = Verdict::satisfied;
  double error_bar = 0.0;  ///< three propagated standard errors plus kNumericalTolerance

  /// Recomputes |c_phi - c_theta| - c_diff from the stored correlations.
  double recomputed_lhs() const;
};

inline constexpr double kBellBound = 1.0;
/// Standard errors required before a violation is reported.
inline constexpr double kViolationSigmas = 3.0;
/// Floor on every error bar so exact correlators sitting on the bound are not
/// flagged by round-off.
inline constexpr double kNumericalTolerance = 1e-9;
/// Slack allowed when validating that a correlator returns a value in [-1, 1].
inline constexpr double kCorrelatorRangeSlack = 1e-9;

/// Assembles an evaluation from already computed correlations; throws
/// InvalidConfiguration when a correlation lies outside [-1, 1] beyond slack.
BellEvaluation assemble_evaluation(double phi, double theta, CorrelatorValue c_phi,
                                   CorrelatorValue c_theta, CorrelatorValue c_diff);

BellEvaluation bell_lhs(const Correlator& correlator, double phi, double theta);

/// |theta - phi| folded into [0, 2pi).
double setting_gap(double phi, double theta);

struct ScanResult {
  double step = 0.0;
  std::size_t points_per_axis = 0;
  std::vector<BellEvaluation> evaluations;  ///< row-major over (phi index, theta index)
  std::size_t argmax = 0;  ///< first index within 1e-12 of the maximum lhs

  const BellEvaluation& best() const { return evaluations.at(argmax); }
  std::size_t violations() const;
};

/// Evaluates bell_lhs on every grid point (i * step, j * step) in [0, 2pi)^2.
/// When step divides 2pi the correlator is called once per distinct gap.
ScanResult violation_scan(const Correlator& correlator, double step,
                          kernels::ExecutionPolicy policy = kernels::ExecutionPolicy::parallel);

/// C(delta) = -cos(delta) from the explicit tensor-product expectation.
Correlator quantum_correlator();
/// -1 + 2|delta|/pi, the closed form of the sign model.
Correlator linear_law_correlator();
/// Midpoint quadrature of the model's correlation integral.
Correlator quadrature_correlator(LocalModelPtr model, std::uint64_t resolution);
/// Monte Carlo estimate with standard error; gaps are keyed into the stream id.
Correlator monte_carlo_correlator(LocalModelPtr model, std::uint64_t trials, std::uint64_t seed);

}  // namespace bell
