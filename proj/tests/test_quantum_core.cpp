#include "bell/quantum_core.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace bell;

namespace {

constexpr double kTol = 1e-12;
const double kPi = std::numbers::pi;

void expect_op_near(const SpinOperator& a, const SpinOperator& b, double tol = kTol) {
  EXPECT_LE(a.max_abs_diff(b), tol);
}

// Born-rule oracle: |<u_s(L) (x) u_t(R) | psi>|^2 by explicit projection,
// independent of the closed form in joint_distribution.
std::array<double, 4> born_projection(double left, double right) {
  const TwoQubitState psi = singlet();
  const Eigenbasis l = eigenbasis(MeasurementDirection(left));
  const Eigenbasis r = eigenbasis(MeasurementDirection(right));
  const std::array<const Spinor*, 2> ls{&l.plus, &l.minus}, rs{&r.plus, &r.minus};
  std::array<double, 4> p{};
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2; ++t) {
      Complex amp{0, 0};
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) amp += std::conj((*ls[s])[i]) * std::conj((*rs[t])[k]) * psi[2 * i + k];
      p[2 * s + t] = std::norm(amp);
    }
  return p;
}

}  // namespace

TEST(Pauli, MatchesStandardMatrices) {
  const SpinOperator z = pauli(Axis::z);
  EXPECT_EQ(z(0, 0), Complex(1, 0));
  EXPECT_EQ(z(0, 1), Complex(0, 0));
  EXPECT_EQ(z(1, 0), Complex(0, 0));
  EXPECT_EQ(z(1, 1), Complex(-1, 0));

  const SpinOperator x = pauli(Axis::x);
  EXPECT_EQ(x(0, 0), Complex(0, 0));
  EXPECT_EQ(x(0, 1), Complex(1, 0));
  EXPECT_EQ(x(1, 0), Complex(1, 0));
  EXPECT_EQ(x(1, 1), Complex(0, 0));

  const SpinOperator y = pauli(Axis::y);
  EXPECT_EQ(y(0, 1), Complex(0, -1));
  EXPECT_EQ(y(1, 0), Complex(0, 1));
}

TEST(Pauli, SquaresToIdentityAndIsHermitian) {
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    const SpinOperator p = pauli(a);
    EXPECT_TRUE(p.is_hermitian());
    expect_op_near(p * p, SpinOperator::identity());
  }
}

TEST(SpinComponent, AxisCases) {
  expect_op_near(spin_component(MeasurementDirection(0.0)), pauli(Axis::z));
  expect_op_near(spin_component(MeasurementDirection(kPi / 2)), pauli(Axis::x));
}

TEST(SpinComponent, SixtyDegreeEigenvectors) {
  const SpinOperator s = spin_component(MeasurementDirection(kPi / 3));
  const double c30 = std::cos(kPi / 6), s30 = std::sin(kPi / 6);
  const Spinor up{Complex{c30, 0}, Complex{s30, 0}};
  const Spinor down{Complex{-s30, 0}, Complex{c30, 0}};
  const Spinor su = s.apply(up), sd = s.apply(down);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(std::abs(su[i] - up[i]), 0.0, kTol);
    EXPECT_NEAR(std::abs(sd[i] + down[i]), 0.0, kTol);
  }
}

TEST(SpinComponent, SquaresToIdentityForSampledAngles) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> angle(-4 * kPi, 4 * kPi);
  for (int i = 0; i < 1000; ++i) {
    const SpinOperator s = spin_component(MeasurementDirection(angle(gen)));
    EXPECT_TRUE(s.is_hermitian());
    expect_op_near(s * s, SpinOperator::identity());
  }
}

TEST(Eigenbasis, ZeroAndSixtyDegrees) {
  const Eigenbasis z = eigenbasis(MeasurementDirection(0.0));
  EXPECT_EQ(z.plus[0], Complex(1, 0));
  EXPECT_EQ(z.plus[1], Complex(0, 0));
  EXPECT_EQ(z.minus[0], Complex(0, 0));
  EXPECT_EQ(z.minus[1], Complex(1, 0));

  const Eigenbasis b = eigenbasis(MeasurementDirection(kPi / 3));
  EXPECT_NEAR(b.plus[0].real(), std::cos(kPi / 6), kTol);
  EXPECT_NEAR(b.plus[1].real(), 0.5, kTol);
  EXPECT_NEAR(b.minus[0].real(), -0.5, kTol);
  EXPECT_NEAR(b.minus[1].real(), std::cos(kPi / 6), kTol);
}

TEST(Eigenbasis, OrthonormalEigenvectorsForSampledAngles) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  for (int n = 0; n < 1000; ++n) {
    const MeasurementDirection d(angle(gen));
    const Eigenbasis e = eigenbasis(d);
    const SpinOperator s = spin_component(d);
    const Complex inner = std::conj(e.plus[0]) * e.minus[0] + std::conj(e.plus[1]) * e.minus[1];
    EXPECT_NEAR(std::abs(inner), 0.0, kTol);
    EXPECT_NEAR(std::norm(e.plus[0]) + std::norm(e.plus[1]), 1.0, kTol);
    EXPECT_NEAR(std::norm(e.minus[0]) + std::norm(e.minus[1]), 1.0, kTol);
    const Spinor sp = s.apply(e.plus), sm = s.apply(e.minus);
    for (int i = 0; i < 2; ++i) {
      EXPECT_NEAR(std::abs(sp[i] - e.plus[i]), 0.0, kTol);
      EXPECT_NEAR(std::abs(sm[i] + e.minus[i]), 0.0, kTol);
    }
  }
}

TEST(Singlet, NormalizedAmplitudes) {
  const TwoQubitState s = singlet();
  EXPECT_EQ(s[0], Complex(0, 0));
  EXPECT_DOUBLE_EQ(s[1].real(), 0.7071067811865476);
  EXPECT_DOUBLE_EQ(s[2].real(), -0.7071067811865476);
  EXPECT_EQ(s[3], Complex(0, 0));
  EXPECT_NEAR(s.norm(), 1.0, kTol);
}

TEST(TwoQubitState, RejectsUnnormalizedAmplitudes) {
  // the textbook form without the 1/sqrt(2) factor
  EXPECT_THROW(TwoQubitState({Complex{0, 0}, Complex{1, 0}, Complex{-1, 0}, Complex{0, 0}}),
               std::invalid_argument);
}

TEST(CorrelationQm, Examples) {
  const auto deg = MeasurementDirection::from_degrees;
  EXPECT_NEAR(correlation_qm(deg(0), deg(0)), -1.0, kTol);
  EXPECT_NEAR(correlation_qm(deg(0), deg(60)), -0.5, kTol);
  EXPECT_NEAR(correlation_qm(deg(0), deg(90)), 0.0, kTol);
}

TEST(CorrelationQm, TensorProductMatchesNegativeCosine) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  const TwoQubitState psi = singlet();
  for (int i = 0; i < 1000; ++i) {
    const double l = angle(gen), r = angle(gen);
    const Complex c = expectation(psi, spin_component(MeasurementDirection(l)), spin_component(MeasurementDirection(r)));
    EXPECT_NEAR(c.imag(), 0.0, kTol);
    EXPECT_NEAR(c.real(), -std::cos(l - r), kTol);
  }
}

TEST(CorrelationQm, InvariantUnderJointRotation) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  for (int i = 0; i < 200; ++i) {
    const double l = angle(gen), r = angle(gen), shift = angle(gen);
    EXPECT_NEAR(correlation_qm(MeasurementDirection(l + shift), MeasurementDirection(r + shift)),
                correlation_qm(MeasurementDirection(l), MeasurementDirection(r)), kTol);
  }
}

TEST(AntialignmentProbability, Examples) {
  EXPECT_DOUBLE_EQ(antialignment_probability(0.0), 1.0);
  EXPECT_NEAR(antialignment_probability(kPi / 3), 0.75, kTol);
  EXPECT_NEAR(antialignment_probability(2 * kPi / 3), 0.25, kTol);
}

TEST(JointDistribution, EqualAnglesAndSixtyDegrees) {
  const auto d0 = joint_distribution(MeasurementDirection(0.0), MeasurementDirection(0.0));
  EXPECT_DOUBLE_EQ(d0[0], 0.0);
  EXPECT_DOUBLE_EQ(d0[1], 0.5);
  EXPECT_DOUBLE_EQ(d0[2], 0.5);
  EXPECT_DOUBLE_EQ(d0[3], 0.0);

  // frozen from born_projection(0, pi/3): (0.125, 0.375, 0.375, 0.125)
  const auto born = born_projection(0.0, kPi / 3);
  EXPECT_NEAR(born[0], 0.125, kTol);
  EXPECT_NEAR(born[1], 0.375, kTol);
  const auto d60 = joint_distribution(MeasurementDirection(0.0), MeasurementDirection(kPi / 3));
  EXPECT_NEAR(d60[0], 0.125, kTol);
  EXPECT_NEAR(d60[1], 0.375, kTol);
  EXPECT_NEAR(d60[2], 0.375, kTol);
  EXPECT_NEAR(d60[3], 0.125, kTol);
}

TEST(JointDistribution, AgreesWithBornProjectionEverywhere) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  for (int i = 0; i < 1000; ++i) {
    const double l = angle(gen), r = angle(gen);
    const auto d = joint_distribution(MeasurementDirection(l), MeasurementDirection(r));
    const auto born = born_projection(l, r);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(d[k], born[k], kTol);
    EXPECT_NEAR(d.total(), 1.0, kTol);
    EXPECT_NEAR(d.left_plus(), 0.5, kTol);
    EXPECT_NEAR(d.right_plus(), 0.5, kTol);
    EXPECT_NEAR(d.product_expectation(), correlation_qm(MeasurementDirection(l), MeasurementDirection(r)), kTol);
  }
}

TEST(SamplePair, EqualAnglesAlwaysAntiAligned) {
  Rng rng(123);
  const MeasurementDirection a = MeasurementDirection::from_degrees(37.0);
  for (int i = 0; i < 10000; ++i) {
    const OutcomePair p = sample_pair(a, a, rng);
    EXPECT_EQ(p.left, negate(p.right));
  }
}

TEST(SamplePair, DeterministicForFixedSeed) {
  Rng a(42), b(42);
  const auto l = MeasurementDirection::from_degrees(0), r = MeasurementDirection::from_degrees(60);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_pair(l, r, a), sample_pair(l, r, b));
}

TEST(SamplePair, FrequenciesWithinThreeBinomialSigma) {
  constexpr int n = 100000;
  for (double gap_deg : {0.0, 60.0, 120.0}) {
    Rng rng(2718 + static_cast<std::uint64_t>(gap_deg));
    const auto l = MeasurementDirection::from_degrees(0), r = MeasurementDirection::from_degrees(gap_deg);
    int anti = 0;
    for (int i = 0; i < n; ++i) anti += sample_pair(l, r, rng).anti_aligned() ? 1 : 0;
    const double p = antialignment_probability(deg_to_rad(gap_deg));
    const double sigma = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(static_cast<double>(anti) / n, p, 3 * sigma + 1e-15) << "gap " << gap_deg;
  }
}

TEST(SamplePair, SixtyDegreeToleranceMatchesStatedBand) {
  // sqrt(0.75 * 0.25 / 1e5) * 3 = 0.0041; the stated band 0.013 is looser
  constexpr int n = 100000;
  Rng rng(1);
  const auto l = MeasurementDirection::from_degrees(0), r = MeasurementDirection::from_degrees(60);
  int anti = 0;
  for (int i = 0; i < n; ++i) anti += sample_pair(l, r, rng).anti_aligned() ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(anti) / n, 0.75, 0.013);
}

TEST(Outcome, IntegerConversion) {
  EXPECT_EQ(outcome_from_int(1), Outcome::plus);
  EXPECT_EQ(outcome_from_int(-1), Outcome::minus);
  EXPECT_THROW(outcome_from_int(0), std::invalid_argument);
}

TEST(MeasurementDirection, NormalizesIntoOneTurn) {
  EXPECT_NEAR(MeasurementDirection(-kPi / 2).radians(), 1.5 * kPi, kTol);
  EXPECT_NEAR(MeasurementDirection::from_degrees(720 + 60).degrees(), 60.0, 1e-9);
  EXPECT_DOUBLE_EQ(MeasurementDirection(-1e-300).radians(), 0.0);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> angle(-100.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double r = MeasurementDirection(angle(gen)).radians();
    EXPECT_GE(r, 0.0);
    EXPECT_LT(r, 2 * kPi);
  }
}
