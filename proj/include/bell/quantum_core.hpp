#pragma once

// Spin-1/2 algebra for the two-electron singlet.
//
// Units: hbar = 1 and sigma = 2S, so every spin-component operator has
// eigenvalues exactly +1 and -1. Measurement directions live in the x-z plane
// and are described by a single angle from the z-axis.
//
// Two-particle basis ordering: index = 2 * (left basis) + (right basis), with
// basis 0 = spin up along z and basis 1 = spin down. Particle 1 moves left.

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "bell/angle.hpp"
#include "bell/rng.hpp"

namespace bell {

using Complex = std::complex<double>;
using Spinor = std::array<Complex, 2>;

enum class Axis { x, y, z };

/// A 2x2 complex matrix representing a spin observable.
class SpinOperator {
public:
  using Entries = std::array<std::array<Complex, 2>, 2>;

  constexpr SpinOperator() = default;
  explicit constexpr SpinOperator(const Entries& e) : entries_(e) {}

  static SpinOperator identity();

  const Complex& operator()(int row, int col) const { return entries_[row][col]; }
  const Entries& entries() const { return entries_; }

  SpinOperator operator*(const SpinOperator& rhs) const;
  SpinOperator operator+(const SpinOperator& rhs) const;
  SpinOperator scaled(double factor) const;
  Spinor apply(const Spinor& v) const;

  bool is_hermitian(double tol = 1e-12) const;
  /// Largest entrywise deviation from another operator.
  double max_abs_diff(const SpinOperator& other) const;

private:
  Entries entries_{};
};

/// Outcome of a single spin-component measurement.
enum class Outcome : std::int8_t { plus = 1, minus = -1 };

constexpr int value(Outcome o) { return static_cast<int>(o); }
constexpr Outcome negate(Outcome o) { return o == Outcome::plus ? Outcome::minus : Outcome::plus; }
constexpr char glyph(Outcome o) { return o == Outcome::plus ? '+' : '-'; }

/// Converts +1/-1 to an Outcome; anything else throws std::invalid_argument.
Outcome outcome_from_int(int v);

struct OutcomePair {
  Outcome left = Outcome::plus;
  Outcome right = Outcome::minus;

  int product() const { return value(left) * value(right); }
  bool anti_aligned() const { return left != right; }

  friend bool operator==(const OutcomePair&, const OutcomePair&) = default;
};

/// Normalized 4-amplitude state over {|up up>, |up down>, |down up>, |down down>}.
class TwoQubitState {
public:
  using Amplitudes = std::array<Complex, 4>;

  /// Throws std::invalid_argument unless the amplitudes have unit norm (1e-12).
  explicit TwoQubitState(const Amplitudes& amps);

  const Amplitudes& amplitudes() const { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }
  double norm() const;

private:
  Amplitudes amps_;
};

SpinOperator pauli(Axis axis);

/// cos(theta) * sigma_z + sin(theta) * sigma_x.
SpinOperator spin_component(MeasurementDirection direction);

struct Eigenbasis {
  Spinor plus;   ///< eigenvalue +1: (cos(theta/2), sin(theta/2))
  Spinor minus;  ///< eigenvalue -1: (-sin(theta/2), cos(theta/2))
};

Eigenbasis eigenbasis(MeasurementDirection direction);

/// (|up down> - |down up>) / sqrt(2).
TwoQubitState singlet();

/// <psi| A (x) B |psi> by explicit 4x4 Kronecker product.
Complex expectation(const TwoQubitState& psi, const SpinOperator& left_op,
                    const SpinOperator& right_op);

/// Singlet correlation of the two spin components; equals -cos(left - right).
double correlation_qm(MeasurementDirection left, MeasurementDirection right);

/// Probability that the two outcomes differ for a setting gap delta: cos^2(delta/2).
double antialignment_probability(double delta);

/// Joint outcome probabilities ordered (+,+), (+,-), (-,+), (-,-).
struct JointDistribution {
  std::array<double, 4> p{};

  double operator[](std::size_t i) const { return p[i]; }
  double total() const { return p[0] + p[1] + p[2] + p[3]; }
  double product_expectation() const { return p[0] - p[1] - p[2] + p[3]; }
  double left_plus() const { return p[0] + p[1]; }
  double right_plus() const { return p[0] + p[2]; }
};

JointDistribution joint_distribution(MeasurementDirection left, MeasurementDirection right);

/// Draws one outcome pair from joint_distribution using a single uniform.
OutcomePair sample_pair(MeasurementDirection left, MeasurementDirection right, Rng& rng);

}  // namespace bell
