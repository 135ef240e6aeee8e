#include "bell/lhv_models.hpp"

#include <cmath>
#include <numbers>

#include "bell/errors.hpp"

namespace bell {

namespace {

class VectorModel final : public LocalModel {
public:
  std::string name() const override { return "vector"; }

  HiddenVariable sample_lambda(Rng& rng) const override { return {kTwoPi * rng.uniform01()}; }

  Outcome outcome_left(MeasurementDirection angle, HiddenVariable lambda) const override {
    return std::cos(angle.radians() - lambda.value) >= 0.0 ? Outcome::plus : Outcome::minus;
  }

  Outcome outcome_right(MeasurementDirection angle, HiddenVariable lambda) const override {
    return negate(outcome_left(angle, lambda));
  }

  std::optional<LambdaDensity> density() const override {
    return LambdaDensity{0.0, kTwoPi, [](double) { return 1.0 / kTwoPi; }};
  }
};

}  // namespace

LocalModelPtr vector_model() {
  static const LocalModelPtr instance = std::make_shared<VectorModel>();
  return instance;
}

double vector_model_linear_law(double delta) {
  double d = normalize_angle(delta);
  if (d > std::numbers::pi) d = kTwoPi - d;
  return -1.0 + 2.0 * d / std::numbers::pi;
}

FunctionalModel::FunctionalModel(std::string name, Sampler sampler, OutcomeFn left, OutcomeFn right,
                                 std::optional<LambdaDensity> density)
    : name_(std::move(name)),
      sampler_(std::move(sampler)),
      left_(std::move(left)),
      right_(std::move(right)),
      density_(std::move(density)) {
  if (!sampler_ || !left_ || !right_)
    throw InvalidConfiguration("model '" + name_ + "' needs a sampler and both outcome functions");
}

void ModelRegistry::register_model(const std::string& name, Factory factory) {
  if (name.empty() || name == "quantum")
    throw InvalidConfiguration("invalid model name '" + name + "'");
  factories_[name] = std::move(factory);
}

bool ModelRegistry::contains(std::string_view name) const {
  return factories_.find(name) != factories_.end();
}

LocalModelPtr ModelRegistry::create(std::string_view name) const {
  auto it = factories_.find(name);
  if (it == factories_.end()) throw NotFound("unknown model '" + std::string(name) + "'");
  return it->second();
}

std::vector<std::string> ModelRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(factories_.size());
  for (const auto& [name, _] : factories_) out.push_back(name);
  return out;
}

ModelRegistry& model_registry() {
  static ModelRegistry registry = [] {
    ModelRegistry r;
    r.register_model("vector", [] { return vector_model(); });
    return r;
  }();
  return registry;
}

McEstimate lhv_correlation_mc(const LocalModel& model, MeasurementDirection left,
                              MeasurementDirection right, std::uint64_t trials,
                              const RngStream& stream, kernels::ExecutionPolicy policy) {
  if (trials == 0) throw InvalidConfiguration("trials must be at least 1");

  auto product = [&](std::uint64_t i) -> std::int64_t {
    Rng rng = stream.trial(i);
    const HiddenVariable lambda = model.sample_lambda(rng);
    return value(model.outcome_left(left, lambda)) * value(model.outcome_right(right, lambda));
  };
  const std::int64_t sum = policy == kernels::ExecutionPolicy::parallel
                               ? kernels::sum_integer(trials, product)
                               : kernels::serial::sum_integer(trials, product);

  const double n = static_cast<double>(trials);
  const double mean = static_cast<double>(sum) / n;
  // products are +-1, so the sample variance is (1 - mean^2) * n / (n - 1)
  double std_error = 0.0;
  if (trials > 1) {
    const double var = std::max(0.0, 1.0 - mean * mean) * n / (n - 1.0);
    std_error = std::sqrt(var / n);
  }
  return {mean, std_error, trials};
}

double lhv_correlation_quadrature(const LocalModel& model, MeasurementDirection left,
                                  MeasurementDirection right, std::uint64_t resolution,
                                  kernels::ExecutionPolicy policy) {
  const auto density = model.density();
  if (!density)
    throw QuadratureUnavailable("model '" + model.name() + "' has no closed-form lambda density");
  if (resolution < 2) throw InvalidConfiguration("quadrature resolution must be at least 2");

  const double lo = density->lower;
  const double h = (density->upper - lo) / static_cast<double>(resolution);
  auto node = [&](std::uint64_t i) { return lo + (static_cast<double>(i) + 0.5) * h; };
  auto weighted = [&](std::uint64_t i) {
    const HiddenVariable lambda{node(i)};
    const int s = value(model.outcome_left(left, lambda)) * value(model.outcome_right(right, lambda));
    return s * density->pdf(lambda.value);
  };
  auto weight = [&](std::uint64_t i) { return density->pdf(node(i)); };

  if (policy == kernels::ExecutionPolicy::parallel)
    return kernels::sum_blocked(resolution, weighted) / kernels::sum_blocked(resolution, weight);
  return kernels::serial::sum_plain(resolution, weighted) /
         kernels::serial::sum_plain(resolution, weight);
}

AnticorrelationReport verify_anticorrelation(const LocalModel& model,
                                             std::span<const MeasurementDirection> angle_grid,
                                             std::uint64_t lambda_samples, const RngStream& stream) {
  AnticorrelationReport report;
  for (std::uint64_t i = 0; i < lambda_samples; ++i) {
    Rng rng = stream.trial(i);
    const HiddenVariable lambda = model.sample_lambda(rng);
    for (const auto& angle : angle_grid) {
      const Outcome l = model.outcome_left(angle, lambda);
      const Outcome r = model.outcome_right(angle, lambda);
      ++report.checks;
      if (r != negate(l)) {
        report.passed = false;
        report.counterexample = AnticorrelationCounterexample{angle, lambda, l, r};
        return report;
      }
    }
  }
  return report;
}

std::vector<MeasurementDirection> uniform_angle_grid(std::size_t count) {
  std::vector<MeasurementDirection> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    grid.emplace_back(kTwoPi * static_cast<double>(i) / static_cast<double>(count));
  return grid;
}

QuantumRedrawDisturbance::QuantumRedrawDisturbance(LocalModelPtr base) : base_(std::move(base)) {
  if (!base_) throw InvalidConfiguration("disturbance model needs a base model");
}

std::string QuantumRedrawDisturbance::name() const { return base_->name() + "+quantum-redraw"; }

std::pair<Outcome, Outcome> QuantumRedrawDisturbance::sequential_outcome(MeasurementDirection first,
                                                                         MeasurementDirection second,
                                                                         HiddenVariable lambda,
                                                                         Rng& rng) const {
  const Outcome s1 = base_->outcome_left(first, lambda);
  // Eigenstate of the first setting; overlap with the same-sign eigenvector
  // of the second setting is cos^2 of half the gap.
  const double keep = antialignment_probability(second.radians() - first.radians());
  const Outcome s2 = rng.uniform01() < keep ? s1 : negate(s1);
  return {s1, s2};
}

}  // namespace bell
