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

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>

#include "fibrecav/basis.hpp"
#include "fibrecav/format.hpp"
#include "fibrecav/params.hpp"
#include "fibrecav/state.hpp"

namespace fibrecav {

enum class ModelTag { Exact11, Effective5 };

template <int N>
struct HamiltonianMatrix {
  ComplexMatrix<N> entries = ComplexMatrix<N>::Zero();
  ModelTag model_tag = N == kDim ? ModelTag::Exact11 : ModelTag::Effective5;

  static constexpr int dimension() { return N; }
};

using ExactHamiltonian = HamiltonianMatrix<kDim>;
using EffectiveHamiltonian = HamiltonianMatrix<kEffectiveDim>;

// Basis of the effective model, ordered as in the normal-mode expansion:
// |e,0_c,g>, |g-1,1c-1,g>, |g+1,1c+1,g>, |g-1,0_c,e-1>, |g+1,0_c,e+1>.
namespace effective_level {
inline constexpr std::size_t kAtomAExcited = 0;
inline constexpr std::size_t kModeMinus = 1;
inline constexpr std::size_t kModePlus = 2;
inline constexpr std::size_t kAtomBMinus = 3;
inline constexpr std::size_t kAtomBPlus = 4;
}  // namespace effective_level

namespace detail {

template <int N>
void set_coupling(ComplexMatrix<N>& h, std::size_t i, std::size_t j, double g) {
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  h(a, b) = g;
  h(b, a) = g;
}

}  // namespace detail

/// Resonant interaction-picture Hamiltonian on the 11-state basis. Every
/// coupling is real; the fibre phase is absorbed into cavity B's mode.
///
/// Each polarization forms a five-site chain hanging off |e>_A:
///   |e> -lambda_a- cavity A -nu- fibre -nu- cavity B -lambda_b- |e_j>_B
/// The two sinks have zero rows and columns.
inline ExactHamiltonian build_exact(const SystemParams& p) {
  using namespace level;
  ExactHamiltonian h;
  auto& m = h.entries;
  detail::set_coupling(m, kAtomAExcited, kCavityAMinus, p.lambda_a());
  detail::set_coupling(m, kAtomAExcited, kCavityAPlus, p.lambda_a());
  detail::set_coupling(m, kCavityAMinus, kFibreMinus, p.nu());
  detail::set_coupling(m, kFibreMinus, kCavityBMinus, p.nu());
  detail::set_coupling(m, kCavityBMinus, kAtomBMinus, p.lambda_b());
  detail::set_coupling(m, kCavityAPlus, kFibrePlus, p.nu());
  detail::set_coupling(m, kFibrePlus, kCavityBPlus, p.nu());
  detail::set_coupling(m, kCavityBPlus, kAtomBPlus, p.lambda_b());
  return h;
}

/// Large-nu limit in which only the fibre-free normal mode c0 = (a_A - a_B)/sqrt2
/// survives. Atom B couples to c0 with a minus sign.
inline EffectiveHamiltonian build_effective(const SystemParams& p) {
  using namespace effective_level;
  EffectiveHamiltonian h;
  auto& m = h.entries;
  const double ga = p.lambda_a() / std::numbers::sqrt2;
  const double gb = -p.lambda_b() / std::numbers::sqrt2;
  detail::set_coupling(m, kAtomAExcited, kModeMinus, ga);
  detail::set_coupling(m, kAtomAExcited, kModePlus, ga);
  detail::set_coupling(m, kModeMinus, kAtomBMinus, gb);
  detail::set_coupling(m, kModePlus, kAtomBPlus, gb);
  return h;
}

/// Per-polarization basis change from (a_A, a_B, b) to (c0, c+, c-).
struct NormalModeMap {
  Eigen::Matrix3cd coefficients;

  Eigen::Vector3cd apply(const Eigen::Vector3cd& modes) const { return coefficients * modes; }
};

/// Orthonormal normal modes: c0 = (a_A - a_B)/sqrt2, c+- = (a_A + a_B +- sqrt2 b)/2.
inline NormalModeMap normal_mode_map() {
  const double r = 1.0 / std::numbers::sqrt2;
  NormalModeMap map;
  // clang-format off
  map.coefficients <<
      r,   -r,   0.0,
      0.5,  0.5, r,
      0.5,  0.5, -r;
  // clang-format on
  return map;
}

/// Row-major text dump, one row per line, entries written as `re+im i`.
template <int N>
std::string format_matrix(const HamiltonianMatrix<N>& h) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) {
      const Complex z = h.entries(i, j);
      if (j > 0) out << ' ';
      out << format_double(z.real()) << (std::signbit(z.imag()) ? "-" : "+") << format_double(std::abs(z.imag()))
          << 'i';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace fibrecav
