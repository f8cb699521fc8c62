// Copyright 2026 The fibrecav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fibrecav/analytic.hpp"
#include "fibrecav/validation.hpp"
#include "reference.hpp"

namespace fibrecav {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

void expect_amplitude(Complex actual, Complex expected, double tol = 1e-12) {
  EXPECT_NEAR(actual.real(), expected.real(), tol);
  EXPECT_NEAR(actual.imag(), expected.imag(), tol);
}

TEST(ExactAmplitudes, MaximalEntanglementAtResonance) {
  const auto d = exact_amplitudes(1.0, std::sqrt(3.0), kPi / kSqrt2);
  for (std::size_t i = 0; i < 4; ++i) expect_amplitude(d[i], 0.0);
  expect_amplitude(d[4], 1.0 / kSqrt2);
  expect_amplitude(d[8], 1.0 / kSqrt2);
}

TEST(ExactAmplitudes, InitialCondition) {
  for (double nu : {0.0, 1.0, 7.5}) {
    const auto d = exact_amplitudes(1.0, nu, 0.0);
    expect_amplitude(d[0], 1.0);
    for (std::size_t i = 1; i < 9; ++i) expect_amplitude(d[i], 0.0);
  }
}

// Frozen values, cross-checked against a Taylor-series integration of the
// 11-state Hamiltonian from |e>_A (independent of the closed forms).
TEST(ExactAmplitudes, OffResonanceNuSqrt8) {
  const double t = kPi / kSqrt2;
  const auto d = exact_amplitudes(1.0, std::sqrt(8.0), t);
  expect_amplitude(d[0], -1.0 / 9.0);
  expect_amplitude(d[1], 0.0);
  expect_amplitude(d[2], -2.0 * kSqrt2 / 9.0);
  expect_amplitude(d[3], 0.0);
  expect_amplitude(d[4], 8.0 / (9.0 * kSqrt2));
  EXPECT_NEAR(d[4].real(), 0.62854, 1e-5);

  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(kDim);
  psi0(0) = 1.0;
  const Eigen::MatrixXcd h = build_exact(SystemParams(1.0, std::sqrt(8.0))).entries;
  const auto ref = testing::taylor_evolve(h, psi0, t);
  for (std::size_t i = 0; i < 9; ++i) expect_amplitude(d[i], ref(static_cast<Eigen::Index>(i)), 1e-11);
}

TEST(ExactAmplitudes, SymmetryAndPhasePattern) {
  for (int k = 0; k < 200; ++k) {
    const auto [u, v] = detail::halton2(k);
    const auto d = exact_amplitudes(1.0, 15.0 * u, 8.0 * v);
    for (std::size_t i = 1; i <= 4; ++i) EXPECT_EQ(d[i], d[i + 4]);
    EXPECT_EQ(d[0].imag(), 0.0);
    EXPECT_EQ(d[2].imag(), 0.0);
    EXPECT_EQ(d[4].imag(), 0.0);
    EXPECT_EQ(d[1].real(), 0.0);
    EXPECT_EQ(d[3].real(), 0.0);
  }
}

TEST(ExactAmplitudes, NormalizationIdentity) {
  EXPECT_LT(check_exact_normalization(exact_amplitudes), 1e-12);
  for (int k = 0; k < 1000; ++k) {
    const auto [u, v] = detail::halton2(k + 5000);
    const auto d = exact_amplitudes(1.0, 30.0 * u, 20.0 * v);
    const double n = std::norm(d[0]) + 2.0 * (std::norm(d[1]) + std::norm(d[2]) + std::norm(d[3]) + std::norm(d[4]));
    EXPECT_NEAR(n, 1.0, 1e-12);
  }
}

TEST(ExactAmplitudes, EntanglementConditionGrid) {
  for (int n : {2, 4, 6})
    for (int m : {1, 3}) {
      const auto d = exact_amplitudes(1.0, resonance_ratio(n), entanglement_time(1.0, m));
      EXPECT_LT(std::abs(2.0 * d[4].real() * d[4].real() - 1.0), 1e-12) << n << "," << m;
    }
}

TEST(ExactAmplitudes, ConvergesToEffective) {
  EXPECT_LT(exact_effective_gap(std::sqrt(120.0)), 0.05);
  EXPECT_LT(exact_effective_gap(100.0), 0.005);
  EXPECT_GT(exact_effective_gap(std::sqrt(8.0)), exact_effective_gap(std::sqrt(120.0)));
}

// Central differences of the closed forms satisfy i dpsi/dt = H psi with an
// O(h^2) residual.
TEST(ExactAmplitudes, SchrodingerResidualIsSecondOrder) {
  const double nu = std::sqrt(8.0);
  const auto h = build_exact(SystemParams(1.0, nu)).entries;
  auto residual = [&](double step) {
    double worst = 0.0;
    for (double t : {0.4, 1.3, 2.9}) {
      const StateVector::Vector deriv = (exact_amplitudes(1.0, nu, t + step).to_state().amplitudes() -
                          exact_amplitudes(1.0, nu, t - step).to_state().amplitudes()) /
                         (2.0 * step);
      const StateVector::Vector r = Complex{0.0, 1.0} * deriv - h * exact_amplitudes(1.0, nu, t).to_state().amplitudes();
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
    return worst;
  };
  const double coarse = residual(1e-2);
  const double fine = residual(5e-3);
  EXPECT_LT(coarse, 1e-2);
  EXPECT_NEAR(coarse / fine, 4.0, 0.1);
}

TEST(ExactAmplitudes, RejectsBadArguments) {
  EXPECT_THROW(exact_amplitudes(0.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(exact_amplitudes(1.0, -1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(exact_amplitudes(1.0, 1.0, -1.0), std::invalid_argument);
}

TEST(EffectiveAmplitudes, AtEntanglementTime) {
  const auto d = effective_amplitudes(1.0, kPi / kSqrt2);
  expect_amplitude(d[0], 0.0);
  expect_amplitude(d[1], 0.0);
  expect_amplitude(d[2], 0.0);
  expect_amplitude(d[3], 1.0 / kSqrt2);
  expect_amplitude(d[4], 1.0 / kSqrt2);
}

TEST(EffectiveAmplitudes, InitialCondition) {
  const auto d = effective_amplitudes(1.0, 0.0);
  expect_amplitude(d[0], 1.0);
  for (std::size_t i = 1; i < 5; ++i) expect_amplitude(d[i], 0.0);
}

// Frozen at t = pi/(2 sqrt2); confirmed by Taylor integration of the
// effective Hamiltonian, which also pins the sign of the B coupling.
TEST(EffectiveAmplitudes, QuarterPeriod) {
  const double t = kPi / (2.0 * kSqrt2);
  const auto d = effective_amplitudes(1.0, t);
  expect_amplitude(d[0], 0.5);
  expect_amplitude(d[1], Complex(0.0, -0.5));
  expect_amplitude(d[3], 1.0 / (2.0 * kSqrt2));

  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(kEffectiveDim);
  psi0(0) = 1.0;
  const auto ref = testing::taylor_evolve(build_effective(SystemParams(1.0, 0.0)).entries, psi0, t);
  for (std::size_t i = 0; i < 5; ++i) expect_amplitude(d[i], ref(static_cast<Eigen::Index>(i)), 1e-11);
}

TEST(EffectiveAmplitudes, Normalization) { EXPECT_LT(check_effective_normalization(), 1e-12); }

TEST(EntanglementTime, Values) {
  EXPECT_NEAR(entanglement_time(1.0, 1), 2.2214, 1e-4);
  EXPECT_DOUBLE_EQ(entanglement_time(1.0, 1), kPi / kSqrt2);
  EXPECT_DOUBLE_EQ(entanglement_time(2.0, 1), kPi / (2.0 * kSqrt2));
  EXPECT_DOUBLE_EQ(entanglement_time(1.0, 3), 3.0 * kPi / kSqrt2);
  EXPECT_THROW(entanglement_time(1.0, 2), std::invalid_argument);
  EXPECT_THROW(entanglement_time(1.0, 0), std::invalid_argument);
  EXPECT_THROW(entanglement_time(1.0, -1), std::invalid_argument);
}

TEST(ResonanceRatio, Values) {
  EXPECT_DOUBLE_EQ(resonance_ratio(2), std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(resonance_ratio(4), std::sqrt(15.0));
  EXPECT_DOUBLE_EQ(resonance_ratio(20), std::sqrt(399.0));
  EXPECT_THROW(resonance_ratio(3), std::invalid_argument);
  EXPECT_THROW(resonance_ratio(0), std::invalid_argument);
  EXPECT_THROW(resonance_ratio(-2), std::invalid_argument);
}

}  // namespace
}  // namespace fibrecav
