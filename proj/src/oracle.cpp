#include "bell/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "bell/angle.hpp"
#include "bell/errors.hpp"

namespace bell {

DeterministicStrategy::DeterministicStrategy(std::vector<double> angles, std::uint32_t minus_mask)
    : angles_(std::move(angles)), mask_(minus_mask) {
  if (angles_.empty() || angles_.size() > kMaxStrategyAngles)
    throw InvalidConfiguration("strategy needs between 1 and " + std::to_string(kMaxStrategyAngles) +
                               " angles");
  if (angles_.size() < 32 && (mask_ >> angles_.size()) != 0)
    throw InvalidConfiguration("strategy mask has bits beyond the angle count");
}

std::string DeterministicStrategy::assignment() const {
  std::string out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(glyph(left(i)));
  return out;
}

std::vector<DeterministicStrategy> enumerate_strategies(std::span<const double> angles) {
  if (angles.empty()) throw InvalidConfiguration("angle set must not be empty");
  if (angles.size() > kMaxStrategyAngles)
    throw InvalidConfiguration("angle set of size " + std::to_string(angles.size()) +
                               " exceeds the enumeration limit of " + std::to_string(kMaxStrategyAngles));
  const std::vector<double> set(angles.begin(), angles.end());
  const std::uint32_t count = 1U << angles.size();
  std::vector<DeterministicStrategy> out;
  out.reserve(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) out.emplace_back(set, mask);
  return out;
}

int strategy_correlation(const DeterministicStrategy& s, std::size_t left_index, std::size_t right_index) {
  return value(s.left(left_index)) * value(s.right(right_index));
}

StrategyLhs strategy_bell_lhs(const DeterministicStrategy& s, const PairCorrelation& correlation) {
  if (s.size() != 3) throw InvalidConfiguration("Bell lhs needs a three-angle strategy");
  StrategyLhs r;
  r.c_phi = correlation(s, 0, 1);
  r.c_theta = correlation(s, 0, 2);
  r.c_diff = correlation(s, 1, 2);
  r.lhs = abs(r.c_phi - r.c_theta) - r.c_diff;
  return r;
}

bool derivation_chain_holds(const DeterministicStrategy& s) {
  if (s.size() != 3) throw InvalidConfiguration("derivation chain needs a three-angle strategy");
  const int ref = value(s.left(0)), phi = value(s.left(1)), theta = value(s.left(2));
  const int c_phi = strategy_correlation(s, 0, 1);
  const int c_theta = strategy_correlation(s, 0, 2);
  const int c_diff = strategy_correlation(s, 1, 2);

  // difference rewritten through right = -left at the same angle
  const bool difference = c_phi - c_theta == -ref * phi * (1 - phi * theta);
  const bool bounded = std::abs(c_phi - c_theta) <= 1 - phi * theta;
  const bool closes = 1 - phi * theta == 1 + c_diff;
  return difference && bounded && closes;
}

namespace {

void require_distinct_triple(std::span<const double> angles) {
  if (angles.size() != 3)
    throw InvalidConfiguration("Bell certification needs exactly three angles, got " +
                               std::to_string(angles.size()));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      const double gap = setting_distance(angles[i], angles[j]);
      if (gap < 1e-12) throw InvalidConfiguration("Bell certification needs three distinct angles");
    }
}

}  // namespace

Certification max_bell_lhs(std::span<const double> angles, const PairCorrelation& correlation) {
  require_distinct_triple(angles);
  Certification c;
  c.angles.assign(angles.begin(), angles.end());
  c.strategies = enumerate_strategies(angles);
  c.per_strategy.reserve(c.strategies.size());
  for (std::size_t i = 0; i < c.strategies.size(); ++i) {
    c.per_strategy.push_back(strategy_bell_lhs(c.strategies[i], correlation));
    if (i == 0 || c.per_strategy[i].lhs > c.max_lhs) {
      c.max_lhs = c.per_strategy[i].lhs;
      c.witness_index = i;
    }
  }
  return c;
}

Rational mixture_lhs(std::span<const DeterministicStrategy> strategies, std::span<const Rational> weights) {
  if (strategies.empty() || strategies.size() != weights.size())
    throw InvalidConfiguration("mixture needs one weight per strategy");
  Rational total;
  Rational c_phi, c_theta, c_diff;
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    if (weights[i] < Rational(0)) throw InvalidConfiguration("mixture weights must be non-negative");
    if (strategies[i].angles() != strategies[0].angles())
      throw InvalidConfiguration("mixture strategies must share one angle set");
    const StrategyLhs s = strategy_bell_lhs(strategies[i]);
    total += weights[i];
    c_phi += weights[i] * s.c_phi;
    c_theta += weights[i] * s.c_theta;
    c_diff += weights[i] * s.c_diff;
  }
  if (total != Rational(1)) throw InvalidConfiguration("mixture weights must sum to 1");
  return abs(c_phi - c_theta) - c_diff;
}

TripleGridReport certify_triple_grid(double step, kernels::ExecutionPolicy policy,
                                     const PairCorrelation& correlation) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidConfiguration("grid step must be positive");
  const auto n = static_cast<std::size_t>(std::ceil(kTwoPi / step - 1e-9));
  if (n < 3) throw InvalidConfiguration("grid step leaves fewer than three angles");

  std::vector<std::array<std::size_t, 3>> triples;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) triples.push_back({i, j, k});

  std::vector<Rational> maxima(triples.size());
  auto certify = [&](std::uint64_t t) {
    const auto& [i, j, k] = triples[t];
    const std::array<double, 3> set{static_cast<double>(i) * step, static_cast<double>(j) * step,
                                    static_cast<double>(k) * step};
    return max_bell_lhs(set, correlation).max_lhs;
  };
  std::span<Rational> out(maxima);
  if (policy == kernels::ExecutionPolicy::parallel)
    kernels::fill_indexed(out, certify);
  else
    kernels::serial::fill_indexed(out, certify);

  TripleGridReport report;
  report.step = step;
  report.triples = triples.size();
  report.strategies_checked = triples.size() * 8;
  if (!maxima.empty()) {
    report.overall_max = *std::max_element(maxima.begin(), maxima.end());
    report.overall_min_of_max = *std::min_element(maxima.begin(), maxima.end());
  }
  report.uncertified = static_cast<std::size_t>(
      std::count_if(maxima.begin(), maxima.end(), [](const Rational& m) { return m > Rational(1); }));
  return report;
}

}  // namespace bell
