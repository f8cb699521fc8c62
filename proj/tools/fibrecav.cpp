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

// fibrecav: command-line front end for single runs, figure sweeps and the
// validation gate.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "fibrecav/fibrecav.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Output sink: a file, or stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw UsageError("cannot open output file '" + path + "' for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close(const std::string& path) {
    if (!file_) return;
    file_->close();
    if (!*file_) throw std::runtime_error("failed writing '" + path + "'");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct EvolveArgs {
  std::string model = "exact";
  std::optional<double> nu_sq;
  std::optional<double> gamma_f, gamma_c, kappa_a;
  std::optional<double> t_max;
  bool t_star = false;
  int samples = 201;
  std::optional<double> dt;
  std::string out = "evolve.csv";
  bool populations = false;
  bool seedless = false;
};

int run_evolve(const EvolveArgs& a) {
  using namespace fibrecav;
  if (a.seedless) throw UsageError("--seedless is reserved: no randomness exists in this program");
  const Model model = parse_model(a.model);
  if (model != Model::Open) {
    if (a.gamma_f || a.gamma_c || a.kappa_a)
      throw UsageError("decay rates are only meaningful with --model open");
    if (a.dt) throw UsageError("--dt is only meaningful with --model open");
  }
  if (model == Model::Effective && a.nu_sq) throw UsageError("--nu-sq has no effect on the effective model");
  if (model != Model::Effective && !a.nu_sq) throw UsageError("--nu-sq is required for model '" + a.model + "'");
  if (!a.t_max && !a.t_star) throw UsageError("give --t-max or --t-star");
  const double t_max = a.t_star ? t_star() : *a.t_max;
  if (a.nu_sq && *a.nu_sq < 0.0) throw UsageError("--nu-sq must be >= 0");

  const double nu = a.nu_sq ? std::sqrt(*a.nu_sq) : 0.0;
  const SystemParams::Rates rates{a.gamma_f.value_or(0.0), a.gamma_c.value_or(0.0), a.kappa_a.value_or(0.0)};
  IntegratorOverrides overrides;
  overrides.dt = a.dt;
  std::vector<double> times;
  try {
    times = uniform_times(t_max, a.samples);
    SystemParams(1.0, nu, rates);
    if (model == Model::Open) overrides.resolve(SystemParams(1.0, nu, rates), t_max);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  Output out(a.out);
  const RunRecord rec = run_point(model, nu, rates, times, overrides);
  write_evolve_csv(out.stream(), rec, a.populations);
  out.close(a.out);

  std::ostream& log = a.out == "-" ? std::cerr : std::cout;
  log << parameter_echo(rec);
  const std::string f = observable_name(model);
  char line[128];
  std::snprintf(line, sizeof line, "%s(t=%s) = %.6f\n", f.c_str(), format_double(rec.times.back()).c_str(),
                rec.fidelity.back());
  log << line;
  const double ts = t_star();
  if (ts <= t_max && rec.times.back() != ts) {
    const RunRecord at_star = run_point(model, nu, rates, {ts}, overrides);
    std::snprintf(line, sizeof line, "%s(t*=pi/sqrt2) = %.6f\n", f.c_str(), at_star.fidelity.back());
    log << line;
  }
  return 0;
}

struct SweepArgs {
  std::string preset;
  std::string config;
  std::string out;
  unsigned threads = 0;
  bool seedless = false;
};

int run_sweep_cmd(const SweepArgs& a) {
  using namespace fibrecav;
  if (a.seedless) throw UsageError("--seedless is reserved: no randomness exists in this program");
  SweepSpec spec;
  std::string default_out;
  try {
    if (!a.preset.empty()) {
      spec = find_preset(a.preset).spec;
      default_out = a.preset + ".csv";
    } else {
      std::ifstream in(a.config);
      if (!in) throw std::invalid_argument("cannot read config '" + a.config + "'");
      spec = parse_sweep_config(in);
      default_out = spec.output_path.empty() ? "sweep.csv" : spec.output_path;
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::string path = a.out.empty() ? default_out : a.out;
  Output out(path);
  const auto records = run_sweep(spec, a.threads);
  write_sweep_csv(out.stream(), records);
  out.close(path);
  std::ostream& log = path == "-" ? std::cerr : std::cout;
  std::size_t rows = 0;
  for (const auto& r : records) rows += r.times.size();
  log << "wrote " << rows << " rows (" << records.size() << " parameter points) to " << path << '\n';
  return 0;
}

int run_validate(std::optional<double> tolerance) {
  using namespace fibrecav;
  ValidationOptions options;
  options.tolerance_override = tolerance;
  bool ok = true;
  for (const auto& r : run_validation(options)) {
    char line[256];
    std::snprintf(line, sizeof line, "%s %-32s measured=%.3e tol=%.3e\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                  r.measured, r.tolerance);
    std::cout << line;
    ok = ok && r.passed;
  }
  std::cout << (ok ? "all checks passed\n" : "validation FAILED\n");
  return ok ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fibre-coupled two-cavity entanglement simulator"};
  app.require_subcommand(1);

  EvolveArgs ev;
  auto* evolve = app.add_subcommand("evolve", "Evolve one parameter point and write a fidelity time series");
  evolve->add_option("--model", ev.model, "exact | effective | open")->check(CLI::IsMember({"exact", "effective", "open"}));
  evolve->add_option("--nu-sq", ev.nu_sq, "(nu/lambda)^2");
  evolve->add_option("--gamma-f", ev.gamma_f, "fibre decay rate / lambda");
  evolve->add_option("--gamma-c", ev.gamma_c, "cavity decay rate / lambda");
  evolve->add_option("--kappa-a", ev.kappa_a, "spontaneous emission rate / lambda");
  auto* tmax = evolve->add_option("--t-max", ev.t_max, "final time in units of 1/lambda");
  evolve->add_flag("--t-star", ev.t_star, "final time pi/sqrt2")->excludes(tmax);
  evolve->add_option("--samples", ev.samples, "number of time samples")->check(CLI::PositiveNumber);
  evolve->add_option("--dt", ev.dt, "RK4 step for --model open");
  evolve->add_option("--out", ev.out, "CSV output path, '-' for stdout");
  evolve->add_flag("--populations", ev.populations, "add p1..pN columns");
  evolve->add_flag("--seedless", ev.seedless, "reserved; rejected");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a preset or config file");
  auto* preset = sweep->add_option("--preset", sw.preset, "built-in preset name (see `presets`)");
  auto* config = sweep->add_option("--config", sw.config, "key = value sweep file");
  preset->excludes(config);
  sweep->add_option("--out", sw.out, "CSV output path, '-' for stdout");
  sweep->add_option("--threads", sw.threads, "worker threads (0 = hardware)");
  sweep->add_flag("--seedless", sw.seedless, "reserved; rejected");

  std::optional<double> tolerance;
  auto* validate = app.add_subcommand("validate", "Check propagators against the closed-form solutions");
  validate->add_option("--tolerance", tolerance, "override every check tolerance");

  auto* list = app.add_subcommand("presets", "List built-in sweep presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*evolve) return run_evolve(ev);
    if (*sweep) {
      if (sw.preset.empty() && sw.config.empty()) throw UsageError("sweep needs --preset or --config");
      return run_sweep_cmd(sw);
    }
    if (*validate) return run_validate(tolerance);
    if (*list) {
      for (const auto& p : fibrecav::presets()) std::cout << p.name << "  " << p.description << '\n';
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fibrecav::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
