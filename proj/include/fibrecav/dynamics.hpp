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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibrecav/basis.hpp"
#include "fibrecav/format.hpp"
#include "fibrecav/hamiltonian.hpp"
#include "fibrecav/observables.hpp"
#include "fibrecav/params.hpp"
#include "fibrecav/state.hpp"

namespace fibrecav {

// ---------------------------------------------------------------------------
// Closed evolution
// ---------------------------------------------------------------------------

/// Spectral propagator exp(-iHt) = V exp(-i Lambda t) V^dagger.
template <int N>
class Propagator {
 public:
  using Matrix = ComplexMatrix<N>;
  using Vector = ComplexVector<N>;

  static constexpr double kHermiticityTolerance = 1e-12;
  static constexpr double kReconstructionTolerance = 1e-10;

  explicit Propagator(const HamiltonianMatrix<N>& h) : hamiltonian_(h) {
    const double asym = (h.entries - h.entries.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermiticityTolerance) throw std::invalid_argument("Propagator: Hamiltonian is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.entries);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Propagator: eigendecomposition failed");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
    const Matrix rebuilt = eigenvectors_ * eigenvalues_.template cast<Complex>().asDiagonal() * eigenvectors_.adjoint();
    reconstruction_error_ = (rebuilt - h.entries).cwiseAbs().maxCoeff();
    if (reconstruction_error_ >= kReconstructionTolerance)
      throw std::runtime_error("Propagator: spectral reconstruction error too large");
  }

  Ket<N> evolve(const Ket<N>& psi0, double t) const {
    if (t == 0.0) return psi0;
    Vector coeffs = eigenvectors_.adjoint() * psi0.amplitudes();
    for (Eigen::Index k = 0; k < N; ++k) coeffs(k) *= std::polar(1.0, -eigenvalues_(k) * t);
    return Ket<N>::unchecked(eigenvectors_ * coeffs);
  }

  const HamiltonianMatrix<N>& hamiltonian() const noexcept { return hamiltonian_; }
  const Eigen::Matrix<double, N, 1>& eigenvalues() const noexcept { return eigenvalues_; }
  const Matrix& eigenvectors() const noexcept { return eigenvectors_; }
  double reconstruction_error() const noexcept { return reconstruction_error_; }

 private:
  HamiltonianMatrix<N> hamiltonian_;
  Eigen::Matrix<double, N, 1> eigenvalues_;
  Matrix eigenvectors_;
  double reconstruction_error_ = 0.0;
};

/// Exact evolution sampled at `times`. Records "F1" (or "F2" for the effective
/// model) and "trace_dev" = | ||psi||^2 - 1 |.
template <int N>
Trajectory<Ket<N>> evolve_closed(const HamiltonianMatrix<N>& h, const Ket<N>& psi0, const std::vector<double>& times) {
  if (std::abs(psi0.norm() - 1.0) > Ket<N>::kNormTolerance) throw std::invalid_argument("evolve_closed: psi0 not normalized");
  require_time_grid(times);
  const Propagator<N> propagator(h);
  Trajectory<Ket<N>> traj;
  const std::string fidelity = N == kDim ? "F1" : "F2";
  auto& f = traj.observables[fidelity];
  auto& dev = traj.observables["trace_dev"];
  for (double t : times) {
    Ket<N> psi = propagator.evolve(psi0, t);
    if constexpr (N == kDim) {
      f.push_back(fidelity_f1(psi));
    } else if constexpr (N == kEffectiveDim) {
      f.push_back(fidelity_f2(psi));
    }
    dev.push_back(std::abs(psi.amplitudes().squaredNorm() - 1.0));
    traj.push(t, std::move(psi));
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Dissipation
// ---------------------------------------------------------------------------

enum class ChannelLabel {
  CavityAMinus,
  CavityAPlus,
  CavityBMinus,
  CavityBPlus,
  FibreMinus,
  FibrePlus,
  AtomAMinus,
  AtomAPlus,
  AtomBMinus,
  AtomBPlus,
};

inline std::string channel_name(ChannelLabel label) {
  switch (label) {
    case ChannelLabel::CavityAMinus: return "cavityA-";
    case ChannelLabel::CavityAPlus: return "cavityA+";
    case ChannelLabel::CavityBMinus: return "cavityB-";
    case ChannelLabel::CavityBPlus: return "cavityB+";
    case ChannelLabel::FibreMinus: return "fibre-";
    case ChannelLabel::FibrePlus: return "fibre+";
    case ChannelLabel::AtomAMinus: return "atomA-";
    case ChannelLabel::AtomAPlus: return "atomA+";
    case ChannelLabel::AtomBMinus: return "atomB-";
    case ChannelLabel::AtomBPlus: return "atomB+";
  }
  return "?";
}

struct LindbladChannel {
  ComplexMatrix<kDim> jump = ComplexMatrix<kDim>::Zero();
  double rate = 0.0;
  ChannelLabel label = ChannelLabel::CavityAMinus;
};

/// Ten decay channels: photon loss from each cavity and the fibre, and
/// spontaneous emission of both atoms, once per polarization. In the N <= 1
/// space every jump is a single matrix element from a chain state to the sink
/// of the same polarization.
inline std::array<LindbladChannel, 10> build_channels(const SystemParams& p) {
  using namespace level;
  struct Spec {
    ChannelLabel label;
    std::size_t from;
    std::size_t to;
    double rate;
  };
  const std::array<Spec, 10> specs{{
      {ChannelLabel::CavityAMinus, kCavityAMinus, kSinkMinus, p.gamma_c()},
      {ChannelLabel::CavityAPlus, kCavityAPlus, kSinkPlus, p.gamma_c()},
      {ChannelLabel::CavityBMinus, kCavityBMinus, kSinkMinus, p.gamma_c()},
      {ChannelLabel::CavityBPlus, kCavityBPlus, kSinkPlus, p.gamma_c()},
      {ChannelLabel::FibreMinus, kFibreMinus, kSinkMinus, p.gamma_f()},
      {ChannelLabel::FibrePlus, kFibrePlus, kSinkPlus, p.gamma_f()},
      {ChannelLabel::AtomAMinus, kAtomAExcited, kSinkMinus, p.kappa_a()},
      {ChannelLabel::AtomAPlus, kAtomAExcited, kSinkPlus, p.kappa_a()},
      {ChannelLabel::AtomBMinus, kAtomBMinus, kSinkMinus, p.kappa_a()},
      {ChannelLabel::AtomBPlus, kAtomBPlus, kSinkPlus, p.kappa_a()},
  }};
  std::array<LindbladChannel, 10> channels;
  for (std::size_t c = 0; c < specs.size(); ++c) {
    channels[c].label = specs[c].label;
    channels[c].rate = specs[c].rate;
    channels[c].jump(static_cast<Eigen::Index>(specs[c].to), static_cast<Eigen::Index>(specs[c].from)) = 1.0;
  }
  return channels;
}

/// Right-hand side of the master equation
///   drho/dt = -i[H, rho] + sum_k g_k (L_k rho L_k^dag - {L_k^dag L_k, rho}/2)
/// written as -i(H_eff rho - rho H_eff^dag) + sum_k g_k L_k rho L_k^dag with
/// H_eff = H - (i/2) sum_k g_k L_k^dag L_k. Single-element jumps take a
/// scalar fast path.
class LindbladGenerator {
 public:
  using Matrix = ComplexMatrix<kDim>;

  LindbladGenerator(const ExactHamiltonian& h, const std::vector<LindbladChannel>& channels) {
    if ((h.entries - h.entries.adjoint()).cwiseAbs().maxCoeff() > Propagator<kDim>::kHermiticityTolerance)
      throw std::invalid_argument("LindbladGenerator: Hamiltonian is not Hermitian");
    Matrix decay = Matrix::Zero();
    for (const auto& ch : channels) {
      if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate)) throw std::invalid_argument("channel rate must be >= 0");
      if (ch.rate == 0.0) continue;
      decay += ch.rate * ch.jump.adjoint() * ch.jump;
      Eigen::Index row = -1, col = -1, nonzeros = 0;
      for (Eigen::Index i = 0; i < kDim; ++i)
        for (Eigen::Index j = 0; j < kDim; ++j)
          if (ch.jump(i, j) != Complex{}) {
            row = i;
            col = j;
            ++nonzeros;
          }
      if (nonzeros == 0) continue;
      if (nonzeros == 1) {
        single_.push_back({row, col, ch.rate * std::norm(ch.jump(row, col))});
      } else {
        dense_.push_back({ch.jump, ch.rate});
      }
    }
    h_eff_ = h.entries - Complex{0.0, 0.5} * decay;
  }

  void apply(const Matrix& rho, Matrix& out) const {
    const Complex minus_i{0.0, -1.0};
    out.noalias() = minus_i * (h_eff_ * rho);
    out.noalias() -= minus_i * (rho * h_eff_.adjoint());
    for (const auto& s : single_) out(s.to, s.to) += s.weight * rho(s.from, s.from);
    for (const auto& d : dense_) out.noalias() += d.rate * (d.jump * rho * d.jump.adjoint());
  }

  Matrix operator()(const Matrix& rho) const {
    Matrix out;
    apply(rho, out);
    return out;
  }

 private:
  struct SingleJump {
    Eigen::Index to;
    Eigen::Index from;
    double weight;
  };
  struct DenseJump {
    Matrix jump;
    double rate;
  };
  Matrix h_eff_;
  std::vector<SingleJump> single_;
  std::vector<DenseJump> dense_;
};

/// Fixed-step settings for the open-system integrator.
class IntegratorConfig {
 public:
  static constexpr double kDefaultStepScale = 0.02;
  static constexpr double kMaxStepScale = 0.1;
  // For checks against the spectral propagator at the 1e-8 level.
  static constexpr double kFineStepScale = 0.005;
  static constexpr double kDefaultTolerance = 1e-8;
  static constexpr int kDefaultMaxHalvings = 4;

  /// dt must satisfy 0 < dt <= 0.1 / max(lambda, nu).
  IntegratorConfig(double dt, double t_max, double convergence_tol, int max_halvings, double max_coupling)
      : dt_(dt), t_max_(t_max), tol_(convergence_tol), max_halvings_(max_halvings) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (!(max_coupling > 0.0)) throw std::invalid_argument("max coupling must be positive");
    if (dt > kMaxStepScale / max_coupling)
      throw std::invalid_argument("dt exceeds the stability bound 0.1/max(lambda, nu) = " +
                                  format_double(kMaxStepScale / max_coupling));
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("t_max must be >= 0");
    if (!(convergence_tol > 0.0)) throw std::invalid_argument("convergence_tol must be positive");
    if (max_halvings < 0) throw std::invalid_argument("max_halvings must be >= 0");
  }

  /// dt = step_scale / max(lambda, nu).
  static IntegratorConfig defaults(const SystemParams& p, double t_max, double step_scale = kDefaultStepScale) {
    return {step_scale / p.max_coupling(), t_max, kDefaultTolerance, kDefaultMaxHalvings, p.max_coupling()};
  }

  double dt() const noexcept { return dt_; }
  double t_max() const noexcept { return t_max_; }
  double convergence_tol() const noexcept { return tol_; }
  int max_halvings() const noexcept { return max_halvings_; }

 private:
  double dt_;
  double t_max_;
  double tol_;
  int max_halvings_;
};

struct IntegratorDiagnostics {
  double dt_used = 0.0;
  int halvings = 0;
  double final_f3 = 0.0;          ///< at dt_used
  double final_f3_refined = 0.0;  ///< at dt_used / 2
  double max_trace_deviation = 0.0;
};

struct OpenEvolution {
  Trajectory<DensityMatrix> trajectory;
  IntegratorDiagnostics diagnostics;
};

namespace detail {

inline void rk4_step(const LindbladGenerator& gen, ComplexMatrix<kDim>& rho, double h) {
  using Matrix = ComplexMatrix<kDim>;
  Matrix k1, k2, k3, k4, tmp;
  gen.apply(rho, k1);
  tmp = rho + (0.5 * h) * k1;
  gen.apply(tmp, k2);
  tmp = rho + (0.5 * h) * k2;
  gen.apply(tmp, k3);
  tmp = rho + h * k3;
  gen.apply(tmp, k4);
  rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integrates from t = 0 and samples at `times`. Each interval between
/// consecutive samples is split into ceil(interval/dt) equal steps, so every
/// sample time is hit exactly.
inline std::vector<ComplexMatrix<kDim>> integrate_rk4(const LindbladGenerator& gen, const ComplexMatrix<kDim>& rho0,
                                                      const std::vector<double>& times, double dt) {
  std::vector<ComplexMatrix<kDim>> out;
  out.reserve(times.size());
  ComplexMatrix<kDim> rho = rho0;
  double t = 0.0;
  for (double target : times) {
    const double span = target - t;
    if (span > 0.0) {
      const auto steps = static_cast<long>(std::ceil(span / dt - 1e-9));
      const double h = span / double(std::max(steps, 1L));
      for (long s = 0; s < std::max(steps, 1L); ++s) rk4_step(gen, rho, h);
    }
    t = target;
    out.push_back(rho);
  }
  return out;
}

inline double target_overlap(const ComplexMatrix<kDim>& rho) {
  const auto& v = target_state().amplitudes();
  return (v.adjoint() * rho * v)(0, 0).real();
}

}  // namespace detail

/// Integrates the master equation with classical RK4 and checks the result by
/// step halving: the final-time F3 at dt and dt/2 must agree within
/// config.convergence_tol(). On disagreement dt is halved and the check is
/// repeated, at most config.max_halvings() times, before ConvergenceError.
/// The returned trajectory is the one computed at diagnostics.dt_used.
template <class Channels>
OpenEvolution evolve_open(const ExactHamiltonian& h, const Channels& channels, const DensityMatrix& rho0,
                          const IntegratorConfig& config, const std::vector<double>& times) {
  const auto d0 = rho0.diagnose();
  if (d0.hermiticity_deviation >= DensityMatrix::kHermiticityTolerance || d0.trace_deviation > DensityMatrix::kTraceTolerance ||
      d0.min_eigenvalue < DensityMatrix::kEigenvalueFloor)
    throw std::invalid_argument("evolve_open: rho0 is not a valid density matrix");
  require_time_grid(times);
  if (times.empty()) throw std::invalid_argument("evolve_open: no sample times");
  if (times.back() > config.t_max() * (1.0 + 1e-12)) throw std::invalid_argument("evolve_open: sample time beyond t_max");

  const LindbladGenerator gen(h, std::vector<LindbladChannel>(std::begin(channels), std::end(channels)));

  double dt = config.dt();
  auto coarse = detail::integrate_rk4(gen, rho0.matrix(), times, dt);
  int halvings = 0;
  for (;;) {
    auto fine = detail::integrate_rk4(gen, rho0.matrix(), times, dt / 2.0);
    const double f_coarse = detail::target_overlap(coarse.back());
    const double f_fine = detail::target_overlap(fine.back());
    if (std::abs(f_coarse - f_fine) < config.convergence_tol()) {
      OpenEvolution result;
      result.diagnostics = {dt, halvings, f_coarse, f_fine, 0.0};
      auto& f3 = result.trajectory.observables["F3"];
      auto& dev = result.trajectory.observables["trace_dev"];
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double trace_dev = std::abs(coarse[i].trace() - 1.0);
        result.diagnostics.max_trace_deviation = std::max(result.diagnostics.max_trace_deviation, trace_dev);
        f3.push_back(detail::target_overlap(coarse[i]));
        dev.push_back(trace_dev);
        result.trajectory.push(times[i], DensityMatrix::unchecked(coarse[i]));
      }
      return result;
    }
    if (halvings >= config.max_halvings())
      throw ConvergenceError("evolve_open: final F3 changed by " + format_double(std::abs(f_coarse - f_fine)) +
                                 " under dt halving (dt=" + format_double(dt) + ", coarse=" + format_double(f_coarse) +
                                 ", fine=" + format_double(f_fine) + ")",
                             f_coarse, f_fine);
    dt /= 2.0;
    ++halvings;
    coarse = std::move(fine);
  }
}

struct TraceReport {
  double max_trace_deviation = 0.0;
  double max_hermiticity_deviation = 0.0;
  double min_eigenvalue = 0.0;
};

/// Worst-case density-matrix invariants over a trajectory.
inline TraceReport steady_trace_check(const Trajectory<DensityMatrix>& traj) {
  if (traj.empty()) throw std::invalid_argument("steady_trace_check: empty trajectory");
  TraceReport r;
  r.min_eigenvalue = 1.0;
  for (const auto& rho : traj.snapshots) {
    const auto d = rho.diagnose();
    r.max_trace_deviation = std::max(r.max_trace_deviation, d.trace_deviation);
    r.max_hermiticity_deviation = std::max(r.max_hermiticity_deviation, d.hermiticity_deviation);
    r.min_eigenvalue = std::min(r.min_eigenvalue, d.min_eigenvalue);
  }
  return r;
}

}  // namespace fibrecav
