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
#include <numbers>

#include "fibrecav/basis.hpp"
#include "fibrecav/hamiltonian.hpp"
#include "fibrecav/state.hpp"

namespace fibrecav {

/// (|g-1>|e-1> + |g+1>|e+1>)/sqrt2 with every field mode empty.
inline const StateVector& target_state() {
  static const StateVector target = [] {
    StateVector::Vector v = StateVector::Vector::Zero();
    v(level::kAtomBMinus) = 1.0 / std::numbers::sqrt2;
    v(level::kAtomBPlus) = 1.0 / std::numbers::sqrt2;
    return StateVector(v);
  }();
  return target;
}

/// Same target on the effective basis, with the normal mode c0 empty.
inline const EffectiveState& effective_target_state() {
  static const EffectiveState target = [] {
    EffectiveState::Vector v = EffectiveState::Vector::Zero();
    v(effective_level::kAtomBMinus) = 1.0 / std::numbers::sqrt2;
    v(effective_level::kAtomBPlus) = 1.0 / std::numbers::sqrt2;
    return EffectiveState(v);
  }();
  return target;
}

/// |<target|psi>|^2 for the exact model.
inline double fidelity_f1(const StateVector& psi) {
  return std::norm(target_state().amplitudes().dot(psi.amplitudes()));
}

/// |<target|psi>|^2 for the effective model.
inline double fidelity_f2(const EffectiveState& psi) {
  return std::norm(effective_target_state().amplitudes().dot(psi.amplitudes()));
}

/// <target|rho|target>.
inline double fidelity_f3(const DensityMatrix& rho) {
  const auto& v = target_state().amplitudes();
  return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

template <int N>
std::array<double, N> populations(const Ket<N>& psi) {
  std::array<double, N> p{};
  for (int i = 0; i < N; ++i) p[static_cast<std::size_t>(i)] = std::norm(psi.amplitudes()(i));
  return p;
}

inline std::array<double, kDim> populations(const DensityMatrix& rho) {
  std::array<double, kDim> p{};
  for (int i = 0; i < kDim; ++i) p[static_cast<std::size_t>(i)] = rho.matrix()(i, i).real();
  return p;
}

/// Total population of the single-excitation states (everything but the sinks).
inline double excited_population(const std::array<double, kDim>& p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < level::kSinkMinus; ++i) sum += p[i];
  return sum;
}

}  // namespace fibrecav
