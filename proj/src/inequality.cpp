#include "bell/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "bell/errors.hpp"
#include "bell/quantum_core.hpp"

namespace bell {

namespace {

constexpr std::size_t kMaxScanPointsPerAxis = 1440;

void check_range(const char* label, double c) {
  if (!std::isfinite(c) || c < -1.0 - kCorrelatorRangeSlack || c > 1.0 + kCorrelatorRangeSlack)
    throw InvalidConfiguration(std::string("invalid correlation function: ") + label + " = " +
                               std::to_string(c) + " lies outside [-1, 1]");
}

}  // namespace

const char* to_string(Verdict v) { return v == Verdict::violated ? "violated" : "satisfied"; }

double BellEvaluation::recomputed_lhs() const { return std::abs(c_phi - c_theta) - c_diff; }

double setting_gap(double phi, double theta) { return normalize_angle(std::abs(theta - phi)); }

BellEvaluation assemble_evaluation(double phi, double theta, CorrelatorValue c_phi,
                                   CorrelatorValue c_theta, CorrelatorValue c_diff) {
  check_range("C(phi)", c_phi.value);
  check_range("C(theta)", c_theta.value);
  check_range("C(theta - phi)", c_diff.value);

  BellEvaluation e;
  e.phi = phi;
  e.theta = theta;
  e.c_phi = c_phi.value;
  e.c_theta = c_theta.value;
  e.c_diff = c_diff.value;
  e.lhs = e.recomputed_lhs();
  e.bound = kBellBound;
  // d lhs / d C is +-1 for each term
  const double sigma = std::sqrt(c_phi.std_error * c_phi.std_error +
                                 c_theta.std_error * c_theta.std_error +
                                 c_diff.std_error * c_diff.std_error);
  e.error_bar = kViolationSigmas * sigma + kNumericalTolerance;
  e.verdict = e.lhs > e.bound + e.error_bar ? Verdict::violated : Verdict::satisfied;
  return e;
}

BellEvaluation bell_lhs(const Correlator& correlator, double phi, double theta) {
  return assemble_evaluation(phi, theta, correlator(phi), correlator(theta),
                             correlator(setting_gap(phi, theta)));
}

std::size_t ScanResult::violations() const {
  return static_cast<std::size_t>(std::count_if(evaluations.begin(), evaluations.end(), [](const auto& e) {
    return e.verdict == Verdict::violated;
  }));
}

ScanResult violation_scan(const Correlator& correlator, double step, kernels::ExecutionPolicy policy) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidConfiguration("grid step must be positive");

  const double exact_count = kTwoPi / step;
  const double rounded = std::round(exact_count);
  const bool divides = std::abs(rounded - exact_count) <= 1e-9 * exact_count;
  const double count = divides ? rounded : std::ceil(exact_count);
  if (count > static_cast<double>(kMaxScanPointsPerAxis))
    throw InvalidConfiguration("grid step too small: more than " +
                               std::to_string(kMaxScanPointsPerAxis) + " points per axis");

  ScanResult result;
  result.step = step;
  const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(count));
  result.points_per_axis = n;
  result.evaluations.resize(n * n);

  std::vector<CorrelatorValue> table(n);
  for (std::size_t k = 0; k < n; ++k) table[k] = correlator(static_cast<double>(k) * step);

  auto cell = [&](std::size_t i, std::size_t j) {
    const double phi = static_cast<double>(i) * step;
    const double theta = static_cast<double>(j) * step;
    const CorrelatorValue diff = divides ? table[i > j ? i - j : j - i]
                                         : correlator(setting_gap(phi, theta));
    return assemble_evaluation(phi, theta, table[i], table[j], diff);
  };
  std::span<BellEvaluation> out(result.evaluations);
  if (policy == kernels::ExecutionPolicy::parallel)
    kernels::fill_grid(out, n, n, cell);
  else
    kernels::serial::fill_grid(out, n, n, cell);

  double best = result.evaluations.front().lhs;
  for (const auto& e : result.evaluations) best = std::max(best, e.lhs);
  for (std::size_t k = 0; k < result.evaluations.size(); ++k)
    if (result.evaluations[k].lhs >= best - 1e-12) {
      result.argmax = k;
      break;
    }
  return result;
}

Correlator quantum_correlator() {
  return [](double delta) {
    return CorrelatorValue{correlation_qm(MeasurementDirection(0.0), MeasurementDirection(delta)), 0.0};
  };
}

Correlator linear_law_correlator() {
  return [](double delta) { return CorrelatorValue{vector_model_linear_law(delta), 0.0}; };
}

Correlator quadrature_correlator(LocalModelPtr model, std::uint64_t resolution) {
  if (!model) throw InvalidConfiguration("quadrature correlator needs a model");
  return [model = std::move(model), resolution](double delta) {
    return CorrelatorValue{lhv_correlation_quadrature(*model, MeasurementDirection(0.0),
                                                      MeasurementDirection(delta), resolution),
                           0.0};
  };
}

Correlator monte_carlo_correlator(LocalModelPtr model, std::uint64_t trials, std::uint64_t seed) {
  if (!model) throw InvalidConfiguration("Monte Carlo correlator needs a model");
  return [model = std::move(model), trials, seed](double delta) {
    std::uint64_t bits = 0;
    const double folded = normalize_angle(delta);
    std::memcpy(&bits, &folded, sizeof bits);
    const McEstimate mc = lhv_correlation_mc(*model, MeasurementDirection(0.0), MeasurementDirection(delta),
                                             trials, RngStream(seed, bits));
    return CorrelatorValue{mc.estimate, mc.std_error};
  };
}

}  // namespace bell
