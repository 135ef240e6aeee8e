#pragma once

// Exhaustive certification of the local bound.
//
// A deterministic local strategy fixes the left outcome at each of k angles;
// the right outcome at the same angle is the negation. Every local model is a
// mixture of such strategies, and the Bell left-hand side is convex in the
// correlations, so its maximum over mixtures is attained at a pure strategy.
// Enumerating the 2^k pure strategies in exact arithmetic is therefore a
// complete proof of the bound for a finite angle set.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bell/kernels.hpp"
#include "bell/quantum_core.hpp"
#include "bell/rational.hpp"

namespace bell {

inline constexpr std::size_t kMaxStrategyAngles = 20;

class DeterministicStrategy {
public:
  /// Bit i of `minus_mask` set means left(i) = -1.
  DeterministicStrategy(std::vector<double> angles, std::uint32_t minus_mask);

  std::size_t size() const { return angles_.size(); }
  const std::vector<double>& angles() const { return angles_; }
  std::uint32_t mask() const { return mask_; }

  Outcome left(std::size_t i) const { return (mask_ >> i) & 1U ? Outcome::minus : Outcome::plus; }
  Outcome right(std::size_t i) const { return negate(left(i)); }

  /// Left assignment as a string of '+' and '-'.
  std::string assignment() const;

private:
  std::vector<double> angles_;
  std::uint32_t mask_;
};

/// All 2^k strategies in mask order. Throws InvalidConfiguration unless
/// 1 <= k <= kMaxStrategyAngles.
std::vector<DeterministicStrategy> enumerate_strategies(std::span<const double> angles);

/// left(i) * right(j) for the strategy: -1 or +1.
int strategy_correlation(const DeterministicStrategy& s, std::size_t left_index, std::size_t right_index);

/// Correlation rule the oracle applies to a pure strategy. Replaceable so the
/// certification-failure path can be exercised.
using PairCorrelation = std::function<int(const DeterministicStrategy&, std::size_t, std::size_t)>;

struct StrategyLhs {
  Rational c_phi;    ///< left at angle 0 of the set, right at angle 1
  Rational c_theta;  ///< left at angle 0, right at angle 2
  Rational c_diff;   ///< left at angle 1, right at angle 2
  Rational lhs;
};

StrategyLhs strategy_bell_lhs(const DeterministicStrategy& s,
                              const PairCorrelation& correlation = strategy_correlation);

/// |C(phi) - C(theta)| <= 1 - left(phi) left(theta) == 1 + C(theta - phi),
/// checked in integers for one strategy on a three-angle set.
bool derivation_chain_holds(const DeterministicStrategy& s);

struct Certification {
  std::vector<double> angles;  ///< radians; angles[0] is the left reference
  std::vector<DeterministicStrategy> strategies;
  std::vector<StrategyLhs> per_strategy;
  Rational max_lhs;
  std::size_t witness_index = 0;  ///< lowest strategy index attaining max_lhs

  bool certified() const { return max_lhs <= Rational(1); }
  const DeterministicStrategy& witness() const { return strategies.at(witness_index); }
};

/// Maximum Bell lhs over all pure strategies on the angle set {ref, phi, theta}.
/// Throws InvalidConfiguration unless exactly three distinct angles are given.
Certification max_bell_lhs(std::span<const double> angles,
                           const PairCorrelation& correlation = strategy_correlation);

/// Exact lhs of a convex mixture of pure strategies sharing one angle set.
/// Weights must be non-negative and sum to exactly 1.
Rational mixture_lhs(std::span<const DeterministicStrategy> strategies, std::span<const Rational> weights);

struct TripleGridReport {
  double step = 0.0;
  std::size_t triples = 0;
  std::size_t strategies_checked = 0;
  Rational overall_max;
  Rational overall_min_of_max;  ///< smallest per-triple maximum
  std::size_t uncertified = 0;  ///< triples whose maximum exceeds 1

  bool certified() const { return uncertified == 0; }
};

/// max_bell_lhs for every triple i < j < k of grid angles {n * step} on [0, 2pi).
TripleGridReport certify_triple_grid(double step,
                                     kernels::ExecutionPolicy policy = kernels::ExecutionPolicy::parallel,
                                     const PairCorrelation& correlation = strategy_correlation);

}  // namespace bell
