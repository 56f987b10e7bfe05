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

#include "gridsec/lp.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "gridsec/error.h"

namespace gridsec::lp {

std::string_view ToString(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

int LpProblem::AddRow(std::vector<double> coeffs, RowType type, double rhs) {
  rows.push_back(Row{std::move(coeffs), type, rhs});
  return num_rows() - 1;
}

void LpProblem::SetBounds(int var, double lo, double hi) {
  if (var < 0 || var >= num_vars()) {
    throw InputError("lp: bound index " + std::to_string(var) +
                     " out of range");
  }
  lower[var] = lo;
  upper[var] = hi;
}

void LpProblem::Validate() const {
  const int n = num_vars();
  if (static_cast<int>(lower.size()) != n ||
      static_cast<int>(upper.size()) != n) {
    throw InputError("lp: bound vectors do not match the variable count");
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(cost[j])) {
      throw InputError("lp: non-finite cost at variable " + std::to_string(j));
    }
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
        lower[j] == kInfinity || upper[j] == -kInfinity) {
      throw InputError("lp: invalid bounds at variable " + std::to_string(j));
    }
  }
  for (int r = 0; r < num_rows(); ++r) {
    const Row& row = rows[r];
    if (static_cast<int>(row.coeffs.size()) != n) {
      throw InputError("lp: row " + std::to_string(r) + " has " +
                       std::to_string(row.coeffs.size()) +
                       " coefficients, expected " + std::to_string(n));
    }
    if (!std::isfinite(row.rhs)) {
      throw InputError("lp: non-finite rhs at row " + std::to_string(r));
    }
    for (double a : row.coeffs) {
      if (!std::isfinite(a)) {
        throw InputError("lp: non-finite coefficient at row " +
                         std::to_string(r));
      }
    }
  }
}

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr int kDegenerateRunBeforeBland = 20;
constexpr int kMaxIterations = 100000;

// x_orig = offset + sum(coef * p_col) with p >= 0.
struct VarMap {
  double offset = 0.0;
  std::vector<std::pair<int, double>> terms;
};

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), data_((cols + 1) * rows, 0.0),
        basis_(rows, -1) {}

  double& at(int r, int c) { return data_[r * (cols_ + 1) + c]; }
  double at(int r, int c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  double rhs(int r) const { return at(r, cols_); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::vector<int>& basis() { return basis_; }
  const std::vector<int>& basis() const { return basis_; }

  void Pivot(int pr, int pc) {
    const int width = cols_ + 1;
    double* prow = &data_[pr * width];
    const double inv = 1.0 / prow[pc];
    for (int c = 0; c < width; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      double* row = &data_[r * width];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int c = 0; c < width; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
      if (row[cols_] < 0.0 && row[cols_] > -kPivotTol) row[cols_] = 0.0;
    }
    basis_[pr] = pc;
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
  std::vector<int> basis_;
};

enum class PhaseResult { kOptimal, kUnbounded };

// Minimizes cost'p over the current tableau. Columns with allowed[c] false
// never enter the basis.
PhaseResult RunPhase(Tableau& t, const std::vector<double>& cost,
                     const std::vector<char>& allowed, int& iterations) {
  const int m = t.rows();
  const int n = t.cols();
  std::vector<double> reduced(n);
  int degenerate_run = 0;
  bool bland = false;
  for (;;) {
    if (++iterations > kMaxIterations) {
      throw NumericalError("lp: iteration limit exceeded");
    }
    for (int c = 0; c < n; ++c) {
      double d = cost[c];
      for (int r = 0; r < m; ++r) d -= cost[t.basis()[r]] * t.at(r, c);
      reduced[c] = d;
    }
    int enter = -1;
    double best = -kReducedCostTol;
    for (int c = 0; c < n; ++c) {
      if (!allowed[c] || reduced[c] >= -kReducedCostTol) continue;
      if (bland) {
        enter = c;
        break;
      }
      if (reduced[c] < best) {
        best = reduced[c];
        enter = c;
      }
    }
    if (enter < 0) return PhaseResult::kOptimal;

    int leave = -1;
    double best_ratio = kInfinity;
    for (int r = 0; r < m; ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = t.rhs(r) / a;
      if (leave < 0 || ratio < best_ratio - 1e-12) {
        leave = r;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + 1e-12 &&
                 t.basis()[r] < t.basis()[leave]) {
        leave = r;
      }
    }
    if (leave < 0) return PhaseResult::kUnbounded;

    if (best_ratio <= 1e-12) {
      if (++degenerate_run > kDegenerateRunBeforeBland) bland = true;
    } else {
      degenerate_run = 0;
    }
    t.Pivot(leave, enter);
  }
}

}  // namespace

LpSolution SolveLp(const LpProblem& problem) {
  problem.Validate();
  const int n = problem.num_vars();
  const int m_user = problem.num_rows();

  // Map user variables onto nonnegative standard columns.
  std::vector<VarMap> vars(n);
  int num_std = 0;
  struct UpperRow {
    int col;
    double bound;
  };
  std::vector<UpperRow> upper_rows;
  for (int j = 0; j < n; ++j) {
    const double lo = problem.lower[j];
    const double hi = problem.upper[j];
    if (std::isfinite(lo)) {
      vars[j].offset = lo;
      vars[j].terms.push_back({num_std, 1.0});
      if (std::isfinite(hi)) upper_rows.push_back({num_std, hi - lo});
      ++num_std;
    } else if (std::isfinite(hi)) {
      vars[j].offset = hi;
      vars[j].terms.push_back({num_std++, -1.0});
    } else {
      vars[j].terms.push_back({num_std++, 1.0});
      vars[j].terms.push_back({num_std++, -1.0});
    }
  }

  // Standard-form rows: user rows first, then internal upper-bound rows.
  const int m = m_user + static_cast<int>(upper_rows.size());
  std::vector<std::vector<double>> a(m, std::vector<double>(num_std, 0.0));
  std::vector<double> b(m, 0.0);
  std::vector<RowType> type(m, RowType::kLessEqual);
  for (int r = 0; r < m_user; ++r) {
    const Row& row = problem.rows[r];
    double rhs = row.rhs;
    for (int j = 0; j < n; ++j) {
      const double coef = row.coeffs[j];
      if (coef == 0.0) continue;
      rhs -= coef * vars[j].offset;
      for (auto [col, sign] : vars[j].terms) a[r][col] += coef * sign;
    }
    b[r] = rhs;
    type[r] = row.type;
  }
  for (size_t k = 0; k < upper_rows.size(); ++k) {
    const int r = m_user + static_cast<int>(k);
    a[r][upper_rows[k].col] = 1.0;
    b[r] = upper_rows[k].bound;
  }

  // Nonnegative right-hand sides.
  std::vector<double> flip(m, 1.0);
  for (int r = 0; r < m; ++r) {
    if (b[r] < 0.0) {
      flip[r] = -1.0;
      b[r] = -b[r];
      for (double& v : a[r]) v = -v;
      if (type[r] == RowType::kLessEqual) {
        type[r] = RowType::kGreaterEqual;
      } else if (type[r] == RowType::kGreaterEqual) {
        type[r] = RowType::kLessEqual;
      }
    }
  }

  // Column layout: standard vars | slack/surplus per inequality | artificials.
  std::vector<int> slack_col(m, -1);
  std::vector<int> art_col(m, -1);
  int cols = num_std;
  for (int r = 0; r < m; ++r) {
    if (type[r] != RowType::kEqual) slack_col[r] = cols++;
  }
  const int first_art = cols;
  for (int r = 0; r < m; ++r) {
    if (type[r] != RowType::kLessEqual) art_col[r] = cols++;
  }

  Tableau t(m, cols);
  std::vector<int> identity_col(m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < num_std; ++c) t.at(r, c) = a[r][c];
    t.rhs(r) = b[r];
    if (type[r] == RowType::kLessEqual) {
      t.at(r, slack_col[r]) = 1.0;
      identity_col[r] = slack_col[r];
    } else {
      if (type[r] == RowType::kGreaterEqual) t.at(r, slack_col[r]) = -1.0;
      t.at(r, art_col[r]) = 1.0;
      identity_col[r] = art_col[r];
    }
    t.basis()[r] = identity_col[r];
  }

  LpSolution sol;
  std::vector<char> allowed(cols, 1);

  if (first_art < cols) {
    std::vector<double> phase1(cols, 0.0);
    for (int c = first_art; c < cols; ++c) phase1[c] = 1.0;
    RunPhase(t, phase1, allowed, sol.iterations);
    double infeas = 0.0;
    double scale = 1.0;
    for (int r = 0; r < m; ++r) {
      if (t.basis()[r] >= first_art) infeas += t.rhs(r);
      scale = std::max(scale, std::abs(b[r]));
    }
    if (infeas > kFeasibilityTol * scale) {
      sol.status = Status::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible; rows
    // where that fails are redundant and stay inert.
    for (int r = 0; r < m; ++r) {
      if (t.basis()[r] < first_art) continue;
      for (int c = 0; c < first_art; ++c) {
        if (std::abs(t.at(r, c)) > kPivotTol) {
          t.Pivot(r, c);
          break;
        }
      }
    }
    for (int c = first_art; c < cols; ++c) allowed[c] = 0;
  }

  const double sense_sign = problem.sense == Sense::kMinimize ? 1.0 : -1.0;
  std::vector<double> phase2(cols, 0.0);
  for (int j = 0; j < n; ++j) {
    for (auto [col, sign] : vars[j].terms) {
      phase2[col] += sense_sign * problem.cost[j] * sign;
    }
  }
  if (RunPhase(t, phase2, allowed, sol.iterations) == PhaseResult::kUnbounded) {
    sol.status = Status::kUnbounded;
    return sol;
  }

  std::vector<double> p(cols, 0.0);
  for (int r = 0; r < m; ++r) p[t.basis()[r]] = t.rhs(r);
  sol.x.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double v = vars[j].offset;
    for (auto [col, sign] : vars[j].terms) v += sign * p[col];
    sol.x[j] = v;
  }
  sol.objective = 0.0;
  for (int j = 0; j < n; ++j) sol.objective += problem.cost[j] * sol.x[j];

  // pi = c_B B^-1; B^-1 lives in the columns of the starting identity basis.
  sol.duals.assign(m_user, 0.0);
  for (int r = 0; r < m_user; ++r) {
    double pi = 0.0;
    for (int i = 0; i < m; ++i) {
      pi += phase2[t.basis()[i]] * t.at(i, identity_col[r]);
    }
    // d(user objective)/d(user rhs).
    const double grad = sense_sign * flip[r] * pi;
    const bool minimize = problem.sense == Sense::kMinimize;
    switch (problem.rows[r].type) {
      case RowType::kLessEqual:
        sol.duals[r] = minimize ? -grad : grad;
        break;
      case RowType::kGreaterEqual:
        sol.duals[r] = minimize ? grad : -grad;
        break;
      case RowType::kEqual:
        sol.duals[r] = grad;
        break;
    }
    if (sol.duals[r] == 0.0) sol.duals[r] = 0.0;  // normalize -0.0
  }
  sol.status = Status::kOptimal;
  return sol;
}

}  // namespace gridsec::lp
