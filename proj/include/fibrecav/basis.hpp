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
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fibrecav {

using Complex = std::complex<double>;

/// Dimension of the truncated (N <= 1) Hilbert space of the exact model.
inline constexpr int kDim = 11;
/// Dimension of the normal-mode effective model.
inline constexpr int kEffectiveDim = 5;

/// Thrown when a fixed-step integration fails its step-halving check.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double coarse, double fine)
      : std::runtime_error(what), coarse_(coarse), fine_(fine) {}

  double coarse_estimate() const noexcept { return coarse_; }
  double fine_estimate() const noexcept { return fine_; }

 private:
  double coarse_;
  double fine_;
};

enum class AtomA { Excited, GroundMinus, GroundPlus };
enum class Mode { Vacuum, PhotonMinus, PhotonPlus };
enum class AtomB { Ground, ExcitedMinus, ExcitedPlus };

/// Product state |atom A>|cavity A>|fibre>|cavity B>|atom B>.
struct BasisState {
  AtomA atom_a = AtomA::Excited;
  Mode cavity_a = Mode::Vacuum;
  Mode fibre = Mode::Vacuum;
  Mode cavity_b = Mode::Vacuum;
  AtomB atom_b = AtomB::Ground;

  friend constexpr bool operator==(const BasisState&, const BasisState&) = default;
};

// Canonical 0-based indices. Entries 0..8 hold the amplitudes d1..d9, the
// last two are the excitation-free sinks reached only through decay.
namespace level {
inline constexpr std::size_t kAtomAExcited = 0;
inline constexpr std::size_t kCavityAMinus = 1;
inline constexpr std::size_t kFibreMinus = 2;
inline constexpr std::size_t kCavityBMinus = 3;
inline constexpr std::size_t kAtomBMinus = 4;
inline constexpr std::size_t kCavityAPlus = 5;
inline constexpr std::size_t kFibrePlus = 6;
inline constexpr std::size_t kCavityBPlus = 7;
inline constexpr std::size_t kAtomBPlus = 8;
inline constexpr std::size_t kSinkMinus = 9;
inline constexpr std::size_t kSinkPlus = 10;
}  // namespace level

constexpr int photon_count(Mode m) { return m == Mode::Vacuum ? 0 : 1; }

constexpr int excitation_number(const BasisState& s) {
  return (s.atom_a == AtomA::Excited ? 1 : 0) + photon_count(s.cavity_a) + photon_count(s.fibre) +
         photon_count(s.cavity_b) + (s.atom_b == AtomB::Ground ? 0 : 1);
}

/// True when the state lies in the truncated space: N <= 1 and every photon or
/// B excitation carries the polarization of atom A's ground sublevel.
constexpr bool is_valid(const BasisState& s) {
  const int n = excitation_number(s);
  if (n > 1) return false;
  if (s.atom_a == AtomA::Excited) return n == 1;
  const bool minus = s.atom_a == AtomA::GroundMinus;
  const Mode photon = minus ? Mode::PhotonMinus : Mode::PhotonPlus;
  const AtomB excited = minus ? AtomB::ExcitedMinus : AtomB::ExcitedPlus;
  auto mode_ok = [&](Mode m) { return m == Mode::Vacuum || m == photon; };
  return mode_ok(s.cavity_a) && mode_ok(s.fibre) && mode_ok(s.cavity_b) &&
         (s.atom_b == AtomB::Ground || s.atom_b == excited);
}

constexpr std::array<BasisState, kDim> enumerate_basis() {
  using enum Mode;
  const auto chain = [](AtomA a, Mode photon, AtomB excited) {
    return std::array<BasisState, 4>{{
        {a, photon, Vacuum, Vacuum, AtomB::Ground},
        {a, Vacuum, photon, Vacuum, AtomB::Ground},
        {a, Vacuum, Vacuum, photon, AtomB::Ground},
        {a, Vacuum, Vacuum, Vacuum, excited},
    }};
  };
  const auto minus = chain(AtomA::GroundMinus, PhotonMinus, AtomB::ExcitedMinus);
  const auto plus = chain(AtomA::GroundPlus, PhotonPlus, AtomB::ExcitedPlus);
  return {{
      {AtomA::Excited, Vacuum, Vacuum, Vacuum, AtomB::Ground},
      minus[0], minus[1], minus[2], minus[3],
      plus[0], plus[1], plus[2], plus[3],
      {AtomA::GroundMinus, Vacuum, Vacuum, Vacuum, AtomB::Ground},
      {AtomA::GroundPlus, Vacuum, Vacuum, Vacuum, AtomB::Ground},
  }};
}

/// Canonical index of a basis state, or nullopt if it is outside the space.
constexpr std::optional<std::size_t> index_of(const BasisState& s) {
  constexpr auto basis = enumerate_basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i] == s) return i;
  }
  return std::nullopt;
}

constexpr int excitation_number(std::size_t index) { return excitation_number(enumerate_basis().at(index)); }

/// CSV column name for a canonical index: d1..d9, s10, s11.
inline std::string amplitude_column(std::size_t index) {
  if (index >= static_cast<std::size_t>(kDim)) throw std::out_of_range("basis index out of range");
  return (index < level::kSinkMinus ? "d" : "s") + std::to_string(index + 1);
}

/// Ket label such as "|g-1,1,0,0,g>".
inline std::string ket_label(const BasisState& s) {
  auto mode = [](Mode m) { return m == Mode::Vacuum ? "0" : "1"; };
  std::string a = s.atom_a == AtomA::Excited ? "e" : (s.atom_a == AtomA::GroundMinus ? "g-1" : "g+1");
  std::string b = s.atom_b == AtomB::Ground ? "g" : (s.atom_b == AtomB::ExcitedMinus ? "e-1" : "e+1");
  return "|" + a + "," + mode(s.cavity_a) + "," + mode(s.fibre) + "," + mode(s.cavity_b) + "," + b + ">";
}

}  // namespace fibrecav
