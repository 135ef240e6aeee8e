#include "bell/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bell {

SpinOperator SpinOperator::identity() {
  return SpinOperator(Entries{{{Complex{1, 0}, Complex{0, 0}}, {Complex{0, 0}, Complex{1, 0}}}});
}

SpinOperator SpinOperator::operator*(const SpinOperator& rhs) const {
  Entries out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out[i][j] = entries_[i][0] * rhs.entries_[0][j] + entries_[i][1] * rhs.entries_[1][j];
  return SpinOperator(out);
}

SpinOperator SpinOperator::operator+(const SpinOperator& rhs) const {
  Entries out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = entries_[i][j] + rhs.entries_[i][j];
  return SpinOperator(out);
}

SpinOperator SpinOperator::scaled(double factor) const {
  Entries out = entries_;
  for (auto& row : out)
    for (auto& e : row) e *= factor;
  return SpinOperator(out);
}

Spinor SpinOperator::apply(const Spinor& v) const {
  return {entries_[0][0] * v[0] + entries_[0][1] * v[1],
          entries_[1][0] * v[0] + entries_[1][1] * v[1]};
}

bool SpinOperator::is_hermitian(double tol) const {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (std::abs(entries_[i][j] - std::conj(entries_[j][i])) > tol) return false;
  return true;
}

double SpinOperator::max_abs_diff(const SpinOperator& other) const {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      worst = std::max(worst, std::abs(entries_[i][j] - other.entries_[i][j]));
  return worst;
}

Outcome outcome_from_int(int v) {
  if (v == 1) return Outcome::plus;
  if (v == -1) return Outcome::minus;
  throw std::invalid_argument("outcome must be +1 or -1, got " + std::to_string(v));
}

TwoQubitState::TwoQubitState(const Amplitudes& amps) : amps_(amps) {
  if (std::abs(norm() - 1.0) > 1e-12)
    throw std::invalid_argument("two-qubit state must be normalized");
}

double TwoQubitState::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

SpinOperator pauli(Axis axis) {
  using E = SpinOperator::Entries;
  const Complex o{0, 0}, one{1, 0}, i{0, 1};
  switch (axis) {
    case Axis::x: return SpinOperator(E{{{o, one}, {one, o}}});
    case Axis::y: return SpinOperator(E{{{o, -i}, {i, o}}});
    case Axis::z: return SpinOperator(E{{{one, o}, {o, -one}}});
  }
  throw std::invalid_argument("unknown axis");
}

SpinOperator spin_component(MeasurementDirection direction) {
  const double t = direction.radians();
  return pauli(Axis::z).scaled(std::cos(t)) + pauli(Axis::x).scaled(std::sin(t));
}

Eigenbasis eigenbasis(MeasurementDirection direction) {
  const double h = 0.5 * direction.radians();
  const double c = std::cos(h), s = std::sin(h);
  return {Spinor{Complex{c, 0}, Complex{s, 0}}, Spinor{Complex{-s, 0}, Complex{c, 0}}};
}

TwoQubitState singlet() {
  const double r = std::numbers::sqrt2 / 2.0;
  return TwoQubitState({Complex{0, 0}, Complex{r, 0}, Complex{-r, 0}, Complex{0, 0}});
}

Complex expectation(const TwoQubitState& psi, const SpinOperator& left_op,
                    const SpinOperator& right_op) {
  // K[2i+k][2j+l] = A[i][j] * B[k][l]
  std::array<std::array<Complex, 4>, 4> kron{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) kron[2 * i + k][2 * j + l] = left_op(i, j) * right_op(k, l);

  Complex acc{0, 0};
  for (int r = 0; r < 4; ++r) {
    Complex row{0, 0};
    for (int c = 0; c < 4; ++c) row += kron[r][c] * psi[c];
    acc += std::conj(psi[r]) * row;
  }
  return acc;
}

double correlation_qm(MeasurementDirection left, MeasurementDirection right) {
  static const TwoQubitState psi = singlet();
  return expectation(psi, spin_component(left), spin_component(right)).real();
}

double antialignment_probability(double delta) {
  const double c = std::cos(0.5 * delta);
  return c * c;
}

JointDistribution joint_distribution(MeasurementDirection left, MeasurementDirection right) {
  const double half = 0.5 * (left.radians() - right.radians());
  const double c2 = std::cos(half) * std::cos(half);
  const double s2 = std::sin(half) * std::sin(half);
  return {{0.5 * s2, 0.5 * c2, 0.5 * c2, 0.5 * s2}};
}

OutcomePair sample_pair(MeasurementDirection left, MeasurementDirection right, Rng& rng) {
  const JointDistribution d = joint_distribution(left, right);
  const double u = rng.uniform01();
  // cumulative over (+,+), (+,-), (-,+), (-,-)
  if (u < d[0]) return {Outcome::plus, Outcome::plus};
  if (u < d[0] + d[1]) return {Outcome::plus, Outcome::minus};
  if (u < d[0] + d[1] + d[2]) return {Outcome::minus, Outcome::plus};
  return {Outcome::minus, Outcome::minus};
}

}  // namespace bell
