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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fibrecav {

/// Decay rates in units of lambda.
struct DecayRates {
  double gamma_f = 0.0;  ///< fibre photon decay
  double gamma_c = 0.0;  ///< cavity photon decay, both cavities
  double kappa_a = 0.0;  ///< spontaneous emission, both atoms
};

/// Couplings and decay rates in units of the atom-A coupling. Atom B's
/// coupling is always sqrt(2) times atom A's; that balance is what makes the
/// transfer complete, so it is not a free parameter.
class SystemParams {
 public:
  using Rates = DecayRates;

  /// Throws std::invalid_argument on a nonpositive lambda or negative nu/rates.
  SystemParams(double lambda_a, double nu, Rates rates = {})
      : lambda_a_(lambda_a), nu_(nu), rates_(rates) {
    auto bad = [](double x) { return !std::isfinite(x) || x < 0.0; };
    if (!std::isfinite(lambda_a) || lambda_a <= 0.0) throw std::invalid_argument("lambda_a must be positive");
    if (bad(nu)) throw std::invalid_argument("nu must be finite and >= 0");
    if (bad(rates.gamma_f)) throw std::invalid_argument("gamma_f must be finite and >= 0");
    if (bad(rates.gamma_c)) throw std::invalid_argument("gamma_c must be finite and >= 0");
    if (bad(rates.kappa_a)) throw std::invalid_argument("kappa_a must be finite and >= 0");
  }

  /// lambda = 1 units with nu given through nu^2, so sqrt(3), sqrt(399), ...
  /// are entered as integers.
  static SystemParams from_nu_squared(double nu_squared, Rates rates = {}) {
    if (!std::isfinite(nu_squared) || nu_squared < 0.0) throw std::invalid_argument("nu^2 must be finite and >= 0");
    return SystemParams(1.0, std::sqrt(nu_squared), rates);
  }

  double lambda_a() const noexcept { return lambda_a_; }
  double lambda_b() const noexcept { return std::numbers::sqrt2 * lambda_a_; }
  double nu() const noexcept { return nu_; }
  double gamma_f() const noexcept { return rates_.gamma_f; }
  double gamma_c() const noexcept { return rates_.gamma_c; }
  double kappa_a() const noexcept { return rates_.kappa_a; }
  const Rates& rates() const noexcept { return rates_; }

  bool is_closed() const noexcept { return rates_.gamma_f == 0.0 && rates_.gamma_c == 0.0 && rates_.kappa_a == 0.0; }

  /// Largest coherent coupling; sets the integrator step scale.
  double max_coupling() const noexcept { return std::max(lambda_a_, nu_); }

 private:
  double lambda_a_;
  double nu_;
  Rates rates_;
};

}  // namespace fibrecav
