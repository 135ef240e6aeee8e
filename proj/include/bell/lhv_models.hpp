#pragma once

// Local hidden-variable models.
//
// A model carries a per-pair hidden variable lambda drawn from a fixed,
// setting-independent distribution, and deterministic outcome functions for
// each side. Nothing about one side's setting is visible to the other side's
// outcome function; that is the locality assumption being tested.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bell/angle.hpp"
#include "bell/kernels.hpp"
#include "bell/quantum_core.hpp"
#include "bell/rng.hpp"

namespace bell {

struct HiddenVariable {
  double value = 0.0;
};

/// Closed-form density of a one-dimensional lambda on [lower, upper).
struct LambdaDensity {
  double lower = 0.0;
  double upper = 0.0;
  std::function<double(double)> pdf;
};

class LocalModel {
public:
  virtual ~LocalModel() = default;

  virtual std::string name() const = 0;
  virtual HiddenVariable sample_lambda(Rng& rng) const = 0;
  virtual Outcome outcome_left(MeasurementDirection angle, HiddenVariable lambda) const = 0;
  virtual Outcome outcome_right(MeasurementDirection angle, HiddenVariable lambda) const = 0;

  /// Empty when lambda's distribution is only available through sampling.
  virtual std::optional<LambdaDensity> density() const { return std::nullopt; }
};

using LocalModelPtr = std::shared_ptr<const LocalModel>;

/// Sign model: lambda uniform on [0, 2pi), left = sign(cos(theta - lambda))
/// with ties to +1, right = -left.
LocalModelPtr vector_model();

/// Closed-form correlation of the sign model, -1 + 2|delta|/pi with delta
/// folded into [0, pi].
double vector_model_linear_law(double delta);

/// Adapter for models assembled from plain callables.
class FunctionalModel final : public LocalModel {
public:
  using Sampler = std::function<HiddenVariable(Rng&)>;
  using OutcomeFn = std::function<Outcome(MeasurementDirection, HiddenVariable)>;

  FunctionalModel(std::string name, Sampler sampler, OutcomeFn left, OutcomeFn right,
                  std::optional<LambdaDensity> density = std::nullopt);

  std::string name() const override { return name_; }
  HiddenVariable sample_lambda(Rng& rng) const override { return sampler_(rng); }
  Outcome outcome_left(MeasurementDirection a, HiddenVariable l) const override { return left_(a, l); }
  Outcome outcome_right(MeasurementDirection a, HiddenVariable l) const override { return right_(a, l); }
  std::optional<LambdaDensity> density() const override { return density_; }

private:
  std::string name_;
  Sampler sampler_;
  OutcomeFn left_;
  OutcomeFn right_;
  std::optional<LambdaDensity> density_;
};

/// Name -> factory table. The default registry knows "vector".
class ModelRegistry {
public:
  using Factory = std::function<LocalModelPtr()>;

  void register_model(const std::string& name, Factory factory);
  bool contains(std::string_view name) const;
  /// Throws NotFound for unknown names.
  LocalModelPtr create(std::string_view name) const;
  std::vector<std::string> names() const;

private:
  std::map<std::string, Factory, std::less<>> factories_;
};

ModelRegistry& model_registry();

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

/// Monte Carlo average of left(a, lambda) * right(b, lambda); trial i uses
/// stream.trial(i). Throws InvalidConfiguration when trials == 0.
McEstimate lhv_correlation_mc(const LocalModel& model, MeasurementDirection left,
                              MeasurementDirection right, std::uint64_t trials,
                              const RngStream& stream,
                              kernels::ExecutionPolicy policy = kernels::ExecutionPolicy::parallel);

/// Midpoint-rule integral of left * right * p(lambda), normalized by the same
/// rule applied to p(lambda). Throws QuadratureUnavailable when the model has
/// no density and InvalidConfiguration when resolution < 2.
double lhv_correlation_quadrature(const LocalModel& model, MeasurementDirection left,
                                  MeasurementDirection right, std::uint64_t resolution,
                                  kernels::ExecutionPolicy policy = kernels::ExecutionPolicy::parallel);

struct AnticorrelationCounterexample {
  MeasurementDirection angle;
  HiddenVariable lambda;
  Outcome left;
  Outcome right;
};

struct AnticorrelationReport {
  bool passed = true;
  std::uint64_t checks = 0;
  std::optional<AnticorrelationCounterexample> counterexample;
};

/// Checks right(theta, lambda) == -left(theta, lambda) over the grid and
/// sampled lambdas. Stops at the first counterexample.
AnticorrelationReport verify_anticorrelation(const LocalModel& model,
                                             std::span<const MeasurementDirection> angle_grid,
                                             std::uint64_t lambda_samples, const RngStream& stream);

/// Evenly spaced directions on [0, 2pi).
std::vector<MeasurementDirection> uniform_angle_grid(std::size_t count);

// Two successive measurements on one particle, where the second may depend on
// which angle was measured first.
class DisturbanceModel {
public:
  virtual ~DisturbanceModel() = default;

  virtual std::string name() const = 0;
  virtual HiddenVariable sample_lambda(Rng& rng) const = 0;
  /// Outcomes of measuring first at `first` and then at `second`.
  virtual std::pair<Outcome, Outcome> sequential_outcome(MeasurementDirection first,
                                                         MeasurementDirection second,
                                                         HiddenVariable lambda, Rng& rng) const = 0;
  /// The single-measurement model the first outcome must agree with.
  virtual const LocalModel& base_model() const = 0;
};

/// First outcome from the base model; the measurement then leaves the particle
/// in the eigenstate it reported, so the second outcome agrees with the first
/// with probability cos^2((second - first) / 2).
class QuantumRedrawDisturbance final : public DisturbanceModel {
public:
  explicit QuantumRedrawDisturbance(LocalModelPtr base);

  std::string name() const override;
  HiddenVariable sample_lambda(Rng& rng) const override { return base_->sample_lambda(rng); }
  std::pair<Outcome, Outcome> sequential_outcome(MeasurementDirection first, MeasurementDirection second,
                                                 HiddenVariable lambda, Rng& rng) const override;
  const LocalModel& base_model() const override { return *base_; }

private:
  LocalModelPtr base_;
};

}  // namespace bell
