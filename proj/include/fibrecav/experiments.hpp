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
#include <atomic>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <future>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fibrecav/analytic.hpp"
#include "fibrecav/dynamics.hpp"
#include "fibrecav/format.hpp"
#include "fibrecav/hamiltonian.hpp"
#include "fibrecav/observables.hpp"
#include "fibrecav/params.hpp"
#include "fibrecav/state.hpp"

namespace fibrecav {

enum class Model { Exact, Effective, Open };

inline std::string model_name(Model m) {
  switch (m) {
    case Model::Exact: return "exact";
    case Model::Effective: return "effective";
    case Model::Open: return "open";
  }
  return "?";
}

inline Model parse_model(const std::string& s) {
  if (s == "exact") return Model::Exact;
  if (s == "effective") return Model::Effective;
  if (s == "open") return Model::Open;
  throw std::invalid_argument("unknown model '" + s + "' (expected exact, effective or open)");
}

/// Fidelity reported by each model.
inline std::string observable_name(Model m) {
  switch (m) {
    case Model::Exact: return "F1";
    case Model::Effective: return "F2";
    case Model::Open: return "F3";
  }
  return "?";
}

/// pi/sqrt2 in units of 1/lambda.
inline double t_star() { return entanglement_time(1.0, 1); }

/// Optional integrator overrides; unset fields take IntegratorConfig defaults.
struct IntegratorOverrides {
  std::optional<double> dt;
  std::optional<double> convergence_tol;
  std::optional<int> max_halvings;

  IntegratorConfig resolve(const SystemParams& p, double t_max) const {
    const auto d = IntegratorConfig::defaults(p, t_max);
    return {dt.value_or(d.dt()), t_max, convergence_tol.value_or(d.convergence_tol()),
            max_halvings.value_or(d.max_halvings()), p.max_coupling()};
  }
};

/// One parameter point evaluated over a time grid.
struct RunRecord {
  Model model = Model::Exact;
  double nu = 0.0;  ///< nu / lambda
  SystemParams::Rates rates;
  std::vector<double> times;
  std::vector<double> fidelity;
  std::vector<std::vector<double>> populations;  ///< per time, one entry per basis state
  std::vector<double> trace_dev;
  std::optional<IntegratorDiagnostics> diagnostics;  ///< open model only

  SystemParams params() const { return SystemParams(1.0, nu, rates); }
};

/// Evaluates one model at one parameter point. Exact and effective models are
/// closed; passing nonzero rates to them is an error.
inline RunRecord run_point(Model model, double nu, const SystemParams::Rates& rates, const std::vector<double>& times,
                           const IntegratorOverrides& overrides = {}) {
  const SystemParams p(1.0, nu, rates);
  if (model != Model::Open && !p.is_closed())
    throw std::invalid_argument("decay rates require model 'open' (got '" + model_name(model) + "')");
  RunRecord rec;
  rec.model = model;
  rec.nu = nu;
  rec.rates = rates;
  rec.times = times;
  switch (model) {
    case Model::Exact: {
      const auto traj = evolve_closed(build_exact(p), StateVector::basis(level::kAtomAExcited), times);
      rec.fidelity = traj.observables.at("F1");
      rec.trace_dev = traj.observables.at("trace_dev");
      for (const auto& psi : traj.snapshots) {
        const auto pop = populations(psi);
        rec.populations.emplace_back(pop.begin(), pop.end());
      }
      break;
    }
    case Model::Effective: {
      const auto traj = evolve_closed(build_effective(p), EffectiveState::basis(effective_level::kAtomAExcited), times);
      rec.fidelity = traj.observables.at("F2");
      rec.trace_dev = traj.observables.at("trace_dev");
      for (const auto& psi : traj.snapshots) {
        const auto pop = populations(psi);
        rec.populations.emplace_back(pop.begin(), pop.end());
      }
      break;
    }
    case Model::Open: {
      const double t_max = times.empty() ? 0.0 : times.back();
      const auto config = overrides.resolve(p, t_max);
      const auto channels = build_channels(p);
      const auto result =
          evolve_open(build_exact(p), channels, pure_density(StateVector::basis(level::kAtomAExcited)), config, times);
      rec.fidelity = result.trajectory.observables.at("F3");
      rec.trace_dev = result.trajectory.observables.at("trace_dev");
      for (const auto& rho : result.trajectory.snapshots) {
        const auto pop = populations(rho);
        rec.populations.emplace_back(pop.begin(), pop.end());
      }
      rec.diagnostics = result.diagnostics;
      break;
    }
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepSpec {
  std::vector<Model> models;
  std::vector<double> nu_values;  ///< nu / lambda
  std::vector<double> gamma_f_values{0.0};
  std::vector<double> gamma_c_values{0.0};
  std::vector<double> kappa_a_values{0.0};
  double t_max = 0.0;
  int n_time_samples = 2;
  std::string output_path;
  IntegratorOverrides integrator;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const {
    auto nonempty = [](const auto& v, const char* name) {
      if (v.empty()) throw std::invalid_argument(std::string("sweep: '") + name + "' list is empty");
    };
    nonempty(models, "model");
    nonempty(nu_values, "nu");
    nonempty(gamma_f_values, "gamma_f");
    nonempty(gamma_c_values, "gamma_c");
    nonempty(kappa_a_values, "kappa_a");
    for (double nu : nu_values)
      if (!std::isfinite(nu) || nu < 0.0) throw std::invalid_argument("sweep: nu values must be >= 0");
    bool any_rate = false;
    for (const auto* list : {&gamma_f_values, &gamma_c_values, &kappa_a_values})
      for (double r : *list) {
        if (!std::isfinite(r) || r < 0.0) throw std::invalid_argument("sweep: rates must be >= 0");
        any_rate = any_rate || r != 0.0;
      }
    const bool closed_model = std::any_of(models.begin(), models.end(), [](Model m) { return m != Model::Open; });
    if (any_rate && closed_model) throw std::invalid_argument("sweep: nonzero decay rates require model 'open' only");
    if (n_time_samples < 2) throw std::invalid_argument("sweep: samples must be >= 2");
    if (!std::isfinite(t_max) || !(t_max > 0.0)) throw std::invalid_argument("sweep: t_max must be > 0");
  }

  std::vector<double> times() const { return uniform_times(t_max, n_time_samples); }
};

struct SweepPreset {
  std::string name;
  std::string description;
  SweepSpec spec;
};

namespace detail {

inline std::vector<double> sqrt_all(std::initializer_list<double> squares) {
  std::vector<double> out;
  for (double s : squares) out.push_back(std::sqrt(s));
  return out;
}

}  // namespace detail

/// Built-in parameter grids fig2, fig3 and fig4. All run to
/// t = 3 pi/sqrt2 (the first two entanglement times) on 301 samples.
inline std::vector<SweepPreset> presets() {
  const double t_max = 3.0 * t_star();
  const int samples = 301;
  std::vector<SweepPreset> out;
  {
    SweepSpec s;
    s.models = {Model::Exact, Model::Effective};
    s.nu_values = detail::sqrt_all({8, 24, 80, 120});
    s.t_max = t_max;
    s.n_time_samples = samples;
    out.push_back({"fig2", "closed dynamics: F1 (exact) and F2 (effective), nu^2 in {8,24,80,120}", s});
  }
  {
    SweepSpec s;
    s.models = {Model::Open};
    s.nu_values = detail::sqrt_all({3, 8, 99, 120});
    s.gamma_f_values = {0.0, 0.001, 0.01, 0.1, 1.0};
    s.t_max = t_max;
    s.n_time_samples = samples;
    out.push_back({"fig3", "fibre loss: F3, nu^2 in {3,8,99,120}, gamma_f in {0,0.001,0.01,0.1,1}, kappa_a=gamma_c=0", s});
  }
  {
    SweepSpec s;
    s.models = {Model::Open};
    s.nu_values = detail::sqrt_all({399});
    s.gamma_c_values = {0.001, 0.01, 0.1, 1.0};
    s.kappa_a_values = {0.001, 0.01, 0.1, 1.0};
    s.t_max = t_max;
    s.n_time_samples = samples;
    out.push_back({"fig4",
                   "cavity loss and spontaneous emission: F3, nu^2=399, gamma_f=0, full grid gamma_c x kappa_a over "
                   "{0.001,0.01,0.1,1} (panel value read as gamma_c, curves over kappa_a; both readings are in the grid)",
                   s});
  }
  return out;
}

inline SweepPreset find_preset(const std::string& name) {
  for (auto& p : presets())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown preset '" + name + "'");
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty entry in list '" + s + "'");
    out.push_back(item);
  }
  return out;
}

/// Number, `tstar`, or `<k>*tstar`.
inline double parse_time(const std::string& s) {
  const auto star = s.find("tstar");
  if (star == std::string::npos) return parse_double(s);
  if (star + 5 != s.size()) throw std::invalid_argument("bad time '" + s + "'");
  if (star == 0) return t_star();
  const auto prefix = trim(s.substr(0, star));
  if (prefix.empty() || prefix.back() != '*') throw std::invalid_argument("bad time '" + s + "'");
  return parse_double(trim(prefix.substr(0, prefix.size() - 1))) * t_star();
}

}  // namespace detail

/// Parses the flat `key = value` sweep format. Lists are comma separated and
/// `#` starts a comment. Keys: model, nu_sq | nu, gamma_f, gamma_c, kappa_a,
/// t_max, samples, output, dt, convergence_tol, max_halvings.
inline SweepSpec parse_sweep_config(std::istream& in) {
  SweepSpec spec;
  spec.n_time_samples = 0;
  std::map<std::string, std::string> seen;
  std::string line;
  int lineno = 0;
  auto numbers = [](const std::string& v) {
    std::vector<double> out;
    for (const auto& item : detail::split_list(v)) out.push_back(parse_double(item));
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (value.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    if (!seen.emplace(key, value).second) throw std::invalid_argument("config: duplicate key '" + key + "'");
    try {
      if (key == "model") {
        for (const auto& m : detail::split_list(value)) spec.models.push_back(parse_model(m));
      } else if (key == "nu_sq") {
        for (double s : numbers(value)) {
          if (s < 0.0) throw std::invalid_argument("nu_sq must be >= 0");
          spec.nu_values.push_back(std::sqrt(s));
        }
      } else if (key == "nu") {
        spec.nu_values = numbers(value);
      } else if (key == "gamma_f") {
        spec.gamma_f_values = numbers(value);
      } else if (key == "gamma_c") {
        spec.gamma_c_values = numbers(value);
      } else if (key == "kappa_a") {
        spec.kappa_a_values = numbers(value);
      } else if (key == "t_max") {
        spec.t_max = detail::parse_time(value);
      } else if (key == "samples") {
        spec.n_time_samples = parse_int(value);
      } else if (key == "output") {
        spec.output_path = value;
      } else if (key == "dt") {
        spec.integrator.dt = parse_double(value);
      } else if (key == "convergence_tol") {
        spec.integrator.convergence_tol = parse_double(value);
      } else if (key == "max_halvings") {
        spec.integrator.max_halvings = parse_int(value);
      } else {
        throw std::invalid_argument("unknown key");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + " ('" + key + "'): " + e.what());
    }
  }
  if (seen.count("nu_sq") && seen.count("nu")) throw std::invalid_argument("config: give either nu_sq or nu, not both");
  spec.validate();
  return spec;
}

inline const char* sweep_csv_header() { return "nu_over_lambda,gamma_f,gamma_c,kappa_a,t,F,observable"; }

/// Runs every point of the Cartesian product (nu, gamma_f, gamma_c, kappa_a,
/// model), possibly concurrently, and returns the records in that nested
/// order regardless of completion order.
inline std::vector<RunRecord> run_sweep(const SweepSpec& spec, unsigned threads = 0) {
  spec.validate();
  struct Point {
    Model model;
    double nu;
    SystemParams::Rates rates;
  };
  std::vector<Point> points;
  for (double nu : spec.nu_values)
    for (double gf : spec.gamma_f_values)
      for (double gc : spec.gamma_c_values)
        for (double ka : spec.kappa_a_values)
          for (Model m : spec.models) points.push_back({m, nu, {gf, gc, ka}});

  const auto times = spec.times();
  std::vector<RunRecord> records(points.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(points.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++)
      records[i] = run_point(points[i].model, points[i].nu, points[i].rates, times, spec.integrator);
  };
  std::vector<std::future<void>> pool;
  for (unsigned k = 1; k < threads; ++k) pool.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pool) f.get();
  return records;
}

/// One row per (record, time); numbers in shortest round-trip form.
inline void write_sweep_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << sweep_csv_header() << '\n';
  for (const auto& r : records) {
    const std::string prefix = format_double(r.nu) + ',' + format_double(r.rates.gamma_f) + ',' +
                               format_double(r.rates.gamma_c) + ',' + format_double(r.rates.kappa_a) + ',';
    const std::string obs = observable_name(r.model);
    for (std::size_t i = 0; i < r.times.size(); ++i)
      out << prefix << format_double(r.times[i]) << ',' << format_double(r.fidelity[i]) << ',' << obs << '\n';
  }
}

/// Header for single-run output: t, the model's fidelity, optional
/// populations p1..pN, trace_dev.
inline std::string evolve_csv_header(Model model, bool with_populations) {
  std::string h = "t," + observable_name(model);
  if (with_populations) {
    const int n = model == Model::Effective ? kEffectiveDim : kDim;
    for (int i = 1; i <= n; ++i) h += ",p" + std::to_string(i);
  }
  return h + ",trace_dev";
}

inline void write_evolve_csv(std::ostream& out, const RunRecord& r, bool with_populations) {
  out << evolve_csv_header(r.model, with_populations) << '\n';
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    out << format_double(r.times[i]) << ',' << format_double(r.fidelity[i]);
    if (with_populations)
      for (double p : r.populations[i]) out << ',' << format_double(p);
    out << ',' << format_double(r.trace_dev[i]) << '\n';
  }
}

/// `# key = value` lines echoing every input of a run, enough to rerun it.
inline std::string parameter_echo(const RunRecord& r) {
  std::ostringstream out;
  out << "# model = " << model_name(r.model) << '\n'
      << "# nu_over_lambda = " << format_double(r.nu) << '\n'
      << "# gamma_f = " << format_double(r.rates.gamma_f) << '\n'
      << "# gamma_c = " << format_double(r.rates.gamma_c) << '\n'
      << "# kappa_a = " << format_double(r.rates.kappa_a) << '\n'
      << "# t_max = " << format_double(r.times.empty() ? 0.0 : r.times.back()) << '\n'
      << "# samples = " << r.times.size() << '\n';
  if (r.diagnostics) {
    out << "# dt_used = " << format_double(r.diagnostics->dt_used) << '\n'
        << "# halvings = " << r.diagnostics->halvings << '\n'
        << "# final_f3_refined = " << format_double(r.diagnostics->final_f3_refined) << '\n'
        << "# max_trace_deviation = " << format_double(r.diagnostics->max_trace_deviation) << '\n';
  }
  return out.str();
}

}  // namespace fibrecav
