// Copyright 2026 The gridsec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include "doctest.h"
#include "gridsec/error.h"
#include "gridsec/lp.h"
#include "oracles.h"

namespace gridsec::lp {
namespace {

// d(objective)/d(rhs) implied by a row's shadow price.
double RhsDerivative(const LpProblem& p, int r, double dual) {
  if (p.rows[r].type == RowType::kEqual) return dual;
  const bool le = p.rows[r].type == RowType::kLessEqual;
  const bool min = p.sense == Sense::kMinimize;
  return (le == min) ? -dual : dual;
}

LpProblem RandomProblem(std::mt19937_64& rng, bool finite_bounds) {
  std::uniform_int_distribution<int> nvars(1, 3);
  std::uniform_int_distribution<int> nrows(1, 4);
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> point(0.0, 4.0);
  std::uniform_real_distribution<double> slack(0.0, 3.0);
  const int n = nvars(rng);
  LpProblem p(n, kind(rng) % 2 == 0 ? Sense::kMinimize : Sense::kMaximize);
  std::vector<double> x0(n);
  for (int j = 0; j < n; ++j) {
    p.cost[j] = coef(rng);
    x0[j] = point(rng);
    if (finite_bounds) p.SetBounds(j, 0.0, 10.0);
  }
  const int m = nrows(rng);
  for (int r = 0; r < m; ++r) {
    std::vector<double> a(n);
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) {
      a[j] = coef(rng);
      lhs += a[j] * x0[j];
    }
    const int k = kind(rng);
    if (k == 0) {
      p.AddRow(a, RowType::kEqual, lhs);
    } else if (k <= 2) {
      p.AddRow(a, RowType::kGreaterEqual, lhs - slack(rng));
    } else {
      p.AddRow(a, RowType::kLessEqual, lhs + slack(rng));
    }
  }
  if (!finite_bounds) {
    for (int j = 0; j < n; ++j) {
      std::vector<double> e(n, 0.0);
      e[j] = 1.0;
      p.AddRow(e, RowType::kLessEqual, 10.0);
    }
  }
  return p;
}

TEST_CASE("box maximization") {
  LpProblem p(2, Sense::kMaximize);
  p.cost = {1.0, 1.0};
  p.AddRow({1.0, 0.0}, RowType::kLessEqual, 1.0);
  p.AddRow({0.0, 1.0}, RowType::kLessEqual, 1.0);
  const LpSolution s = SolveLp(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(1.0));
  CHECK(s.objective == doctest::Approx(2.0));
  CHECK(s.duals[0] == doctest::Approx(1.0));
  CHECK(s.duals[1] == doctest::Approx(1.0));
}

TEST_CASE("simplex minimum picks the cheapest element") {
  LpProblem p(3);
  p.cost = {3.0, 1.0, 2.0};
  p.AddRow({1.0, 1.0, 1.0}, RowType::kEqual, 1.0);
  const LpSolution s = SolveLp(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.x[0] == doctest::Approx(0.0));
  CHECK(s.x[1] == doctest::Approx(1.0));
  CHECK(s.x[2] == doctest::Approx(0.0));
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(s.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("contradictory rows are infeasible") {
  LpProblem p(1);
  p.cost = {1.0};
  p.AddRow({1.0}, RowType::kGreaterEqual, 2.0);
  p.AddRow({1.0}, RowType::kLessEqual, 1.0);
  CHECK(SolveLp(p).status == Status::kInfeasible);
}

TEST_CASE("unbounded ray is reported") {
  LpProblem p(2, Sense::kMaximize);
  p.cost = {1.0, 0.0};
  p.AddRow({1.0, -1.0}, RowType::kLessEqual, 1.0);
  CHECK(SolveLp(p).status == Status::kUnbounded);
}

TEST_CASE("free and upper-bounded variables") {
  LpProblem p(2);
  p.cost = {1.0, -1.0};
  p.SetBounds(0, -kInfinity, kInfinity);
  p.SetBounds(1, -kInfinity, 3.0);
  p.AddRow({1.0, 0.0}, RowType::kGreaterEqual, -4.0);
  const LpSolution s = SolveLp(p);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.x[0] == doctest::Approx(-4.0));
  CHECK(s.x[1] == doctest::Approx(3.0));
  CHECK(s.objective == doctest::Approx(-7.0));
}

TEST_CASE("dimension mismatch is an input error") {
  LpProblem p(2);
  p.rows.push_back({{1.0}, RowType::kLessEqual, 1.0});
  CHECK_THROWS_AS(SolveLp(p), InputError);
  LpProblem q(1);
  q.SetBounds(0, 2.0, 1.0);
  CHECK_THROWS_AS(SolveLp(q), InputError);
}

TEST_CASE("random LPs match vertex enumeration") {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const LpProblem p = RandomProblem(rng, true);
    const std::optional<double> expected = oracle::VertexEnumeration(p);
    const LpSolution s = SolveLp(p);
    if (!expected) {
      CHECK(s.status == Status::kInfeasible);
      continue;
    }
    REQUIRE(s.status == Status::kOptimal);
    CHECK(std::abs(s.objective - *expected) <= 1e-8 * (1.0 + std::abs(*expected)));
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("strong duality and complementary slackness") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const LpProblem p = RandomProblem(rng, false);
    const LpSolution s = SolveLp(p);
    REQUIRE(s.status == Status::kOptimal);
    double dual_obj = 0.0;
    for (int r = 0; r < p.num_rows(); ++r) {
      const Row& row = p.rows[r];
      dual_obj += RhsDerivative(p, r, s.duals[r]) * row.rhs;
      double lhs = 0.0;
      for (int j = 0; j < p.num_vars(); ++j) lhs += row.coeffs[j] * s.x[j];
      if (row.type != RowType::kEqual) {
        CHECK(s.duals[r] >= -kFeasibilityTol);
        CHECK(std::abs(s.duals[r] * (row.rhs - lhs)) <= 1e-6);
      }
    }
    CHECK(std::abs(s.objective - dual_obj) <=
          kFeasibilityTol * (1.0 + std::abs(s.objective)));
  }
}

TEST_CASE("identical input gives bitwise-identical output") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const LpProblem p = RandomProblem(rng, true);
    const LpSolution a = SolveLp(p);
    const LpSolution b = SolveLp(p);
    CHECK(a.status == b.status);
    CHECK(a.x == b.x);
    CHECK(a.duals == b.duals);
    CHECK(a.iterations == b.iterations);
  }
}

}  // namespace
}  // namespace gridsec::lp
