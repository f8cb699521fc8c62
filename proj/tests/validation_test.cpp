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

#include <algorithm>

#include "fibrecav/validation.hpp"

namespace fibrecav {
namespace {

const CheckResult& find(const std::vector<CheckResult>& results, const std::string& name) {
  const auto it = std::find_if(results.begin(), results.end(), [&](const auto& r) { return r.name == name; });
  if (it == results.end()) throw std::logic_error("no check named " + name);
  return *it;
}

TEST(Validation, AllChecksPass) {
  const auto results = run_validation();
  EXPECT_GE(results.size(), 10u);
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name << " measured " << r.measured << " tol " << r.tolerance;
}

// Mutation: flipping the sign of d3 (and d7) must trip the Schrodinger residual.
TEST(Validation, DetectsSignErrorInFibreAmplitude) {
  const ExactOracle mutated = [](double lambda, double nu, double t) {
    auto d = exact_amplitudes(lambda, nu, t);
    d.d[level::kFibreMinus] = -d.d[level::kFibreMinus];
    d.d[level::kFibrePlus] = -d.d[level::kFibrePlus];
    return d;
  };
  const auto results = run_validation({}, mutated);
  EXPECT_FALSE(find(results, "schrodinger_residual").passed);
  EXPECT_FALSE(find(results, "closed_propagator_vs_oracle").passed);
  // the mutation preserves the norm, so this check alone would miss it
  EXPECT_TRUE(find(results, "oracle_normalization_exact").passed);
}

TEST(Validation, TightToleranceReportsFailuresWithoutThrowing) {
  ValidationOptions options;
  options.tolerance_override = 1e-15;
  std::vector<CheckResult> results;
  ASSERT_NO_THROW(results = run_validation(options));
  const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
  EXPECT_GT(failed, 0);
  for (const auto& r : results) EXPECT_EQ(r.tolerance, 1e-15);
}

}  // namespace
}  // namespace fibrecav
