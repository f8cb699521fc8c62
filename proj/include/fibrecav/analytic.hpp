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

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

#include "fibrecav/basis.hpp"
#include "fibrecav/hamiltonian.hpp"
#include "fibrecav/state.hpp"

// Closed-form amplitudes for the balanced couplings lambda_A = lambda,
// lambda_B = sqrt2 lambda, equal nu on both polarizations, starting from
// |e>_A with all fields empty. These are the reference the numerical
// propagators are checked against.

namespace fibrecav {

/// d1..d9 in canonical order (index 0 holds d1).
struct ExactAmplitudes {
  std::array<Complex, 9> d{};

  Complex operator[](std::size_t i) const { return d.at(i); }

  StateVector to_state() const {
    StateVector::Vector v = StateVector::Vector::Zero();
    for (std::size_t i = 0; i < d.size(); ++i) v(static_cast<Eigen::Index>(i)) = d[i];
    return StateVector::unchecked(v);
  }
};

/// d~1..d~5 over the effective basis (index 0 holds d~1).
struct EffectiveAmplitudes {
  std::array<Complex, 5> d{};

  Complex operator[](std::size_t i) const { return d.at(i); }

  EffectiveState to_state() const {
    EffectiveState::Vector v;
    for (std::size_t i = 0; i < d.size(); ++i) v(static_cast<Eigen::Index>(i)) = d[i];
    return EffectiveState::unchecked(v);
  }
};

inline ExactAmplitudes exact_amplitudes(double lambda, double nu, double t) {
  if (!(lambda > 0.0)) throw std::invalid_argument("exact_amplitudes: lambda must be positive");
  if (!(nu >= 0.0)) throw std::invalid_argument("exact_amplitudes: nu must be >= 0");
  if (!(t >= 0.0)) throw std::invalid_argument("exact_amplitudes: t must be >= 0");

  using std::cos, std::sin, std::sqrt;
  constexpr double r2 = std::numbers::sqrt2;
  const Complex i{0.0, 1.0};
  const double s = lambda * lambda + nu * nu;
  const double slow = r2 * lambda * t;                                // sqrt2 lambda t
  const double fast = sqrt(1.0 + nu * nu / (lambda * lambda)) * slow;  // normal-mode splitting

  const double d1 = 0.5 * (cos(slow) + 1.0) + lambda * lambda / (2.0 * s) * (cos(fast) - 1.0);
  const Complex d2 = -i / (2.0 * r2) * (sin(slow) + lambda / sqrt(s) * sin(fast));
  const double d3 = lambda * nu / (2.0 * s) * (cos(fast) - 1.0);
  const Complex d4 = i / (2.0 * r2) * (sin(slow) - lambda / sqrt(s) * sin(fast));
  const double d5 = (nu * nu + lambda * lambda * cos(fast) - s * cos(slow)) / (2.0 * r2 * s);

  return ExactAmplitudes{{d1, d2, d3, d4, d5, d2, d3, d4, d5}};
}

inline EffectiveAmplitudes effective_amplitudes(double lambda, double t) {
  if (!(lambda > 0.0)) throw std::invalid_argument("effective_amplitudes: lambda must be positive");
  if (!(t >= 0.0)) throw std::invalid_argument("effective_amplitudes: t must be >= 0");
  constexpr double r2 = std::numbers::sqrt2;
  const double phase = r2 * lambda * t;
  const double c = std::cos(phase);
  const Complex d1 = 0.5 * (1.0 + c);
  const Complex d2 = Complex{0.0, -0.5 * std::sin(phase)};
  const Complex d4 = (1.0 - c) / (2.0 * r2);
  return EffectiveAmplitudes{{d1, d2, d2, d4, d4}};
}

/// m pi / (sqrt2 lambda) for odd m >= 1: the times at which the target state
/// is reached.
inline double entanglement_time(double lambda, int m) {
  if (!(lambda > 0.0)) throw std::invalid_argument("entanglement_time: lambda must be positive");
  if (m <= 0 || m % 2 == 0) throw std::invalid_argument("entanglement_time: m must be a positive odd integer");
  return double(m) * std::numbers::pi / (std::numbers::sqrt2 * lambda);
}

/// nu/lambda = sqrt(n^2 - 1) for even n >= 2, which makes the fast and slow
/// frequencies commensurate so the fibre empties exactly at the entanglement time.
inline double resonance_ratio(int n) {
  if (n <= 0 || n % 2 != 0) throw std::invalid_argument("resonance_ratio: n must be a positive even integer");
  return std::sqrt(double(n) * double(n) - 1.0);
}

/// Projection of an exact-model state onto the effective basis: the photon
/// amplitude is the overlap with c0 = (a_A - a_B)/sqrt2.
inline EffectiveAmplitudes project_to_effective(const StateVector& psi) {
  using namespace level;
  constexpr double r = 1.0 / std::numbers::sqrt2;
  return EffectiveAmplitudes{{
      psi[kAtomAExcited],
      r * (psi[kCavityAMinus] - psi[kCavityBMinus]),
      r * (psi[kCavityAPlus] - psi[kCavityBPlus]),
      psi[kAtomBMinus],
      psi[kAtomBPlus],
  }};
}

}  // namespace fibrecav
