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

#ifndef GRIDSEC_LP_H_
#define GRIDSEC_LP_H_

#include <limits>
#include <string_view>
#include <vector>

namespace gridsec::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Feasibility, complementary-slackness and duality-gap tolerance.
inline constexpr double kFeasibilityTol = 1e-8;
// Entries smaller than this are never used as pivots.
inline constexpr double kPivotTol = 1e-10;

enum class Sense { kMinimize, kMaximize };
enum class RowType { kLessEqual, kGreaterEqual, kEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded };

std::string_view ToString(Status status);

struct Row {
  std::vector<double> coeffs;
  RowType type = RowType::kLessEqual;
  double rhs = 0.0;
};

// A dense linear program
//
//   min/max  c'x
//   s.t.     a_r'x {<=,>=,=} b_r   for every row r
//            lower <= x <= upper
//
// Bounds default to [0, +inf). A lower bound of -inf is allowed; free
// variables are split internally.
struct LpProblem {
  Sense sense = Sense::kMinimize;
  std::vector<double> cost;
  std::vector<Row> rows;
  std::vector<double> lower;
  std::vector<double> upper;

  LpProblem() = default;
  explicit LpProblem(int num_vars, Sense s = Sense::kMinimize)
      : sense(s),
        cost(num_vars, 0.0),
        lower(num_vars, 0.0),
        upper(num_vars, kInfinity) {}

  int num_vars() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  // Returns the index of the new row.
  int AddRow(std::vector<double> coeffs, RowType type, double rhs);
  void SetBounds(int var, double lo, double hi);

  // Throws InputError on inconsistent dimensions, non-finite data, or
  // lower > upper.
  void Validate() const;
};

// Dual values use the shadow-price convention: dual[r] is the improvement
// of the optimal objective per unit relaxation of row r. Inequality duals
// are therefore >= 0 at an optimum for both senses. For an equality row the
// value is d(objective)/d(rhs).
struct LpSolution {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::vector<double> duals;
  int iterations = 0;
};

// Two-phase dense-tableau primal simplex. Entering variable: most negative
// reduced cost, smallest index on ties; after a run of degenerate pivots it
// switches to Bland's rule. Leaving variable: minimum ratio, smallest basic
// index on ties. Identical input gives bitwise-identical output.
LpSolution SolveLp(const LpProblem& problem);

}  // namespace gridsec::lp

#endif  // GRIDSEC_LP_H_
