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
#include <sstream>

#include "fibrecav/experiments.hpp"

namespace fibrecav {
namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

SweepSpec small_open_spec() {
  SweepSpec s;
  s.models = {Model::Open};
  s.nu_values = {std::sqrt(3.0), std::sqrt(8.0)};
  s.gamma_f_values = {0.0, 0.05};
  s.kappa_a_values = {0.01};
  s.t_max = 1.0;
  s.n_time_samples = 5;
  return s;
}

TEST(FormatDouble, RoundTripsAndIsPlain) {
  for (double x : {0.1, 1.0 / 3.0, std::sqrt(399.0), 1e-300, 123456789.0, -2.5}) {
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_THROW(parse_double("1,5"), std::invalid_argument);
  EXPECT_THROW(parse_double(""), std::invalid_argument);
  EXPECT_THROW(parse_int("3.5"), std::invalid_argument);
}

TEST(Presets, CoverPublishedParameterValues) {
  const auto fig2 = find_preset("fig2").spec;
  EXPECT_EQ(fig2.models, (std::vector<Model>{Model::Exact, Model::Effective}));
  EXPECT_EQ(fig2.nu_values, (std::vector<double>{std::sqrt(8.0), std::sqrt(24.0), std::sqrt(80.0), std::sqrt(120.0)}));

  const auto fig3 = find_preset("fig3").spec;
  EXPECT_EQ(fig3.models, std::vector<Model>{Model::Open});
  EXPECT_EQ(fig3.nu_values, (std::vector<double>{std::sqrt(3.0), std::sqrt(8.0), std::sqrt(99.0), std::sqrt(120.0)}));
  EXPECT_DOUBLE_EQ(fig3.nu_values[1], 2.0 * std::numbers::sqrt2);
  EXPECT_EQ(fig3.gamma_c_values, std::vector<double>{0.0});
  EXPECT_EQ(fig3.kappa_a_values, std::vector<double>{0.0});

  const auto fig4 = find_preset("fig4").spec;
  EXPECT_EQ(fig4.nu_values, std::vector<double>{std::sqrt(399.0)});
  EXPECT_EQ(fig4.gamma_f_values, std::vector<double>{0.0});
  EXPECT_EQ(fig4.gamma_c_values, (std::vector<double>{0.001, 0.01, 0.1, 1.0}));

  for (const auto& p : presets()) EXPECT_NO_THROW(p.spec.validate()) << p.name;
  EXPECT_THROW(find_preset("fig9"), std::invalid_argument);
}

TEST(SweepConfig, ParsesAllKeys) {
  std::istringstream in(R"(
# fibre loss scan
model = open
nu_sq = 3, 8      # sqrt3 and 2 sqrt2
gamma_f = 0, 0.05
gamma_c = 0
kappa_a = 0.01
t_max = 2*tstar
samples = 11
output = scan.csv
dt = 0.005
convergence_tol = 1e-9
max_halvings = 3
)");
  const auto s = parse_sweep_config(in);
  EXPECT_EQ(s.models, std::vector<Model>{Model::Open});
  EXPECT_EQ(s.nu_values, (std::vector<double>{std::sqrt(3.0), std::sqrt(8.0)}));
  EXPECT_EQ(s.gamma_f_values, (std::vector<double>{0.0, 0.05}));
  EXPECT_DOUBLE_EQ(s.t_max, 2.0 * t_star());
  EXPECT_EQ(s.n_time_samples, 11);
  EXPECT_EQ(s.output_path, "scan.csv");
  EXPECT_EQ(s.integrator.dt, 0.005);
  EXPECT_EQ(s.integrator.convergence_tol, 1e-9);
  EXPECT_EQ(s.integrator.max_halvings, 3);
}

TEST(SweepConfig, RejectsBadInput) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_sweep_config(in);
  };
  const std::string base = "model = exact\nnu_sq = 3\nt_max = 1\nsamples = 4\n";
  EXPECT_NO_THROW(parse(base));
  EXPECT_THROW(parse(base + "colour = blue\n"), std::invalid_argument);
  EXPECT_THROW(parse(base + "model = open\n"), std::invalid_argument);  // duplicate
  EXPECT_THROW(parse("model = exact\nnu_sq = 3\nt_max = 1\nsamples = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse("model = exact\nnu_sq = 3\nt_max = 0\nsamples = 4\n"), std::invalid_argument);
  EXPECT_THROW(parse("model = exact\nt_max = 1\nsamples = 4\n"), std::invalid_argument);  // no nu
  EXPECT_THROW(parse(base + "gamma_f = 0.1\n"), std::invalid_argument);  // rates need open
  EXPECT_THROW(parse(base + "nu = 2\n"), std::invalid_argument);         // nu and nu_sq
  EXPECT_THROW(parse("model = open\nnu_sq = 3\nt_max = 1\nsamples = 4\nkappa_a = -1\n"), std::invalid_argument);
  EXPECT_THROW(parse("model = warp\nnu_sq = 3\nt_max = 1\nsamples = 4\n"), std::invalid_argument);
  EXPECT_THROW(parse("model exact\n"), std::invalid_argument);
  EXPECT_THROW(parse(base + "gamma_c = 1,,2\n"), std::invalid_argument);
}

TEST(Sweep, EmptyTimeGridRejected) {
  auto s = small_open_spec();
  s.n_time_samples = 0;
  EXPECT_THROW(run_sweep(s), std::invalid_argument);
  s = small_open_spec();
  s.t_max = 0.0;
  EXPECT_THROW(run_sweep(s), std::invalid_argument);
  s = small_open_spec();
  s.gamma_c_values.clear();
  EXPECT_THROW(run_sweep(s), std::invalid_argument);
}

TEST(Sweep, RowOrderAndHeader) {
  const auto records = run_sweep(small_open_spec(), 3);
  ASSERT_EQ(records.size(), 4u);
  EXPECT_EQ(records[0].nu, std::sqrt(3.0));
  EXPECT_EQ(records[0].rates.gamma_f, 0.0);
  EXPECT_EQ(records[1].rates.gamma_f, 0.05);
  EXPECT_EQ(records[2].nu, std::sqrt(8.0));
  std::ostringstream out;
  write_sweep_csv(out, records);
  const auto rows = parse_csv(out.str());
  ASSERT_EQ(rows.size(), 1u + 4u * 5u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"nu_over_lambda", "gamma_f", "gamma_c", "kappa_a", "t", "F", "observable"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 7u);
    EXPECT_EQ(rows[i][6], "F3");
  }
}

TEST(Sweep, ThreadCountDoesNotChangeOutput) {
  std::ostringstream a, b;
  write_sweep_csv(a, run_sweep(small_open_spec(), 1));
  write_sweep_csv(b, run_sweep(small_open_spec(), 4));
  EXPECT_EQ(a.str(), b.str());
}

// Every row's printed parameters, rerun as a single point on the same grid,
// reproduce the printed F within 1e-12.
TEST(Sweep, RowsReproduceFromTheirParameters) {
  SweepSpec closed;
  closed.models = {Model::Exact, Model::Effective};
  closed.nu_values = {std::sqrt(8.0), std::sqrt(120.0)};
  closed.t_max = 3.0;
  closed.n_time_samples = 7;
  for (const auto& spec : {closed, small_open_spec()}) {
    std::ostringstream out;
    write_sweep_csv(out, run_sweep(spec));
    const auto rows = parse_csv(out.str());
    const auto times = spec.times();
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& r = rows[i];
      const Model m = r[6] == "F1" ? Model::Exact : r[6] == "F2" ? Model::Effective : Model::Open;
      const double t = parse_double(r[4]);
      const auto it = std::find(times.begin(), times.end(), t);
      ASSERT_NE(it, times.end());
      const auto rec = run_point(m, parse_double(r[0]), {parse_double(r[1]), parse_double(r[2]), parse_double(r[3])},
                                 times, spec.integrator);
      EXPECT_NEAR(rec.fidelity[static_cast<std::size_t>(it - times.begin())], parse_double(r[5]), 1e-12);
    }
  }
}

TEST(RunPoint, ClosedModelsRejectRates) {
  EXPECT_THROW(run_point(Model::Exact, 1.0, {0.1, 0.0, 0.0}, {0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(run_point(Model::Effective, 1.0, {0.0, 0.0, 0.1}, {0.0, 1.0}), std::invalid_argument);
}

TEST(RunPoint, EvolveCsvColumns) {
  const auto rec = run_point(Model::Effective, 0.0, {}, {0.0});
  std::ostringstream out;
  write_evolve_csv(out, rec, false);
  EXPECT_EQ(out.str(), "t,F2,trace_dev\n0,0,0\n");
  std::ostringstream with_pop;
  write_evolve_csv(with_pop, run_point(Model::Exact, 2.0, {}, {0.0, 1.0}), true);
  const auto rows = parse_csv(with_pop.str());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].size(), 14u);
  EXPECT_EQ(rows[0][2], "p1");
  EXPECT_EQ(rows[0][12], "p11");
  EXPECT_EQ(rows[0][13], "trace_dev");
}

TEST(RunPoint, ParameterEchoIsLossless) {
  IntegratorOverrides o;
  const auto rec = run_point(Model::Open, std::sqrt(99.0), {0.01, 0.002, 0.003}, uniform_times(1.0, 3), o);
  const auto echo = parameter_echo(rec);
  EXPECT_NE(echo.find("# nu_over_lambda = " + format_double(std::sqrt(99.0))), std::string::npos);
  ASSERT_TRUE(rec.diagnostics.has_value());
  const auto pos = echo.find("# dt_used = ");
  ASSERT_NE(pos, std::string::npos);
  const double dt = parse_double(echo.substr(pos + 12, echo.find('\n', pos) - pos - 12));
  o.dt = dt;
  const auto again = run_point(Model::Open, parse_double(format_double(std::sqrt(99.0))), {0.01, 0.002, 0.003},
                               uniform_times(1.0, 3), o);
  EXPECT_EQ(again.fidelity, rec.fidelity);
}

}  // namespace
}  // namespace fibrecav
