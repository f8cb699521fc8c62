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
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibrecav/basis.hpp"

namespace fibrecav {

template <int N>
using ComplexVector = Eigen::Matrix<Complex, N, 1>;
template <int N>
using ComplexMatrix = Eigen::Matrix<Complex, N, N>;

/// Pure state over an N-dimensional canonical basis.
template <int N>
class Ket {
 public:
  using Vector = ComplexVector<N>;

  /// Tolerance on | ||psi|| - 1 | accepted at construction.
  static constexpr double kNormTolerance = 1e-6;

  explicit Ket(const Vector& amplitudes) : amps_(amplitudes) {
    if (std::abs(amps_.norm() - 1.0) > kNormTolerance) throw std::invalid_argument("state vector is not normalized");
  }

  /// Wraps amplitudes without the norm check; for propagator output and tests
  /// that need to probe rejection paths.
  static Ket unchecked(const Vector& amplitudes) {
    Ket k;
    k.amps_ = amplitudes;
    return k;
  }

  static Ket basis(std::size_t index) {
    if (index >= static_cast<std::size_t>(N)) throw std::out_of_range("basis index out of range");
    Vector v = Vector::Zero();
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return Ket(v);
  }

  const Vector& amplitudes() const noexcept { return amps_; }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }
  double norm() const { return amps_.norm(); }
  static constexpr int dimension() { return N; }

 private:
  Ket() = default;
  Vector amps_ = Vector::Zero();
};

using StateVector = Ket<kDim>;
using EffectiveState = Ket<kEffectiveDim>;

struct DensityDiagnostics {
  double hermiticity_deviation = 0.0;  ///< max |rho - rho^dagger| element
  double trace_deviation = 0.0;        ///< |tr rho - 1|
  double min_eigenvalue = 0.0;         ///< of the Hermitian part
};

/// Density matrix over the 11-state basis.
class DensityMatrix {
 public:
  using Matrix = ComplexMatrix<kDim>;

  static constexpr double kHermiticityTolerance = 1e-10;
  static constexpr double kTraceTolerance = 1e-8;
  static constexpr double kEigenvalueFloor = -1e-8;

  /// Throws std::invalid_argument unless the matrix is Hermitian, unit trace
  /// and positive semidefinite within the class tolerances.
  static DensityMatrix validated(const Matrix& m) {
    const auto d = diagnose(m);
    if (d.hermiticity_deviation >= kHermiticityTolerance)
      throw std::invalid_argument("density matrix is not Hermitian");
    if (d.trace_deviation > kTraceTolerance) throw std::invalid_argument("density matrix trace is not 1");
    if (d.min_eigenvalue < kEigenvalueFloor) throw std::invalid_argument("density matrix is not positive semidefinite");
    return DensityMatrix(m);
  }

  static DensityMatrix unchecked(const Matrix& m) { return DensityMatrix(m); }

  static DensityDiagnostics diagnose(const Matrix& m) {
    DensityDiagnostics d;
    d.hermiticity_deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
    d.trace_deviation = std::abs(m.trace() - 1.0);
    const Matrix hermitian_part = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = solver.eigenvalues().minCoeff();
    return d;
  }

  DensityDiagnostics diagnose() const { return diagnose(rho_); }

  const Matrix& matrix() const noexcept { return rho_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// Uniform mixture over all basis states.
  static DensityMatrix maximally_mixed() { return DensityMatrix(Matrix::Identity() / double(kDim)); }

 private:
  explicit DensityMatrix(const Matrix& m) : rho_(m) {}
  Matrix rho_;
};

/// |psi><psi|. Rejects a state whose norm is off by more than 1e-6.
inline DensityMatrix pure_density(const StateVector& psi) {
  if (std::abs(psi.norm() - 1.0) > StateVector::kNormTolerance)
    throw std::invalid_argument("pure_density: state vector is not normalized");
  const auto& v = psi.amplitudes();
  return DensityMatrix::unchecked(v * v.adjoint());
}

/// Time series of snapshots with named derived series.
template <class Snapshot>
struct Trajectory {
  std::vector<double> times;
  std::vector<Snapshot> snapshots;
  std::map<std::string, std::vector<double>> observables;

  void push(double t, Snapshot s) {
    if (!times.empty() && !(t > times.back())) throw std::invalid_argument("trajectory times must be strictly increasing");
    times.push_back(t);
    snapshots.push_back(std::move(s));
  }

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
};

/// Checks that a requested time grid is nonnegative and strictly increasing.
inline void require_time_grid(const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0) throw std::invalid_argument("times must be finite and >= 0");
    if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("times must be strictly increasing");
  }
}

/// Evenly spaced samples on [0, t_max]; a single sample at 0 when t_max == 0.
inline std::vector<double> uniform_times(double t_max, int samples) {
  if (!std::isfinite(t_max) || t_max < 0.0) throw std::invalid_argument("t_max must be finite and >= 0");
  if (t_max == 0.0) return {0.0};
  if (samples < 2) throw std::invalid_argument("need at least 2 time samples");
  std::vector<double> t(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) t[static_cast<std::size_t>(i)] = t_max * double(i) / double(samples - 1);
  t.back() = t_max;
  return t;
}

}  // namespace fibrecav
