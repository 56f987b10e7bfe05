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

#include "gridsec/game.h"

#include <algorithm>
#include <cmath>
#include <exception>

#include "gridsec/error.h"
#include "gridsec/lp.h"

namespace gridsec {

std::vector<std::vector<int>> Combinations(const std::vector<int>& items,
                                           int k) {
  const int n = static_cast<int>(items.size());
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> pos(k);
  for (int i = 0; i < k; ++i) pos[i] = i;
  for (;;) {
    std::vector<int> set(k);
    for (int i = 0; i < k; ++i) set[i] = items[pos[i]];
    out.push_back(std::move(set));
    int i = k - 1;
    while (i >= 0 && pos[i] == n - k + i) --i;
    if (i < 0) break;
    ++pos[i];
    for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
  return out;
}

std::string PayoffMatrix::Label(const std::vector<int>& set) {
  std::string s;
  for (int k : set) s += "z" + std::to_string(k + 1);
  return s.empty() ? "none" : s;
}

namespace {

void CheckSpec(const GameSpec& spec, int m) {
  for (int k : spec.insecure) {
    if (k < 0 || k >= m) throw InputError("game: insecure index out of range");
  }
  const int n = static_cast<int>(spec.insecure.size());
  if (spec.attack_size < 1 || spec.attack_size > n) {
    throw InputError("game: attacker set size must be in [1, " +
                     std::to_string(n) + "]");
  }
  if (spec.defend_size < 1 || spec.defend_size > n) {
    throw InputError("game: defender set size must be in [1, " +
                     std::to_string(n) + "]");
  }
}

PayoffMatrix Skeleton(const GameSpec& spec, const AttackContext& context) {
  CheckSpec(spec, static_cast<int>(context.sensitivity.q.size()));
  PayoffMatrix out;
  out.defender_sets = Combinations(spec.insecure, spec.defend_size);
  out.attacker_sets = Combinations(spec.insecure, spec.attack_size);
  out.a = Eigen::MatrixXd::Zero(out.defender_sets.size(),
                                out.attacker_sets.size());
  return out;
}

double SolveCell(const AttackContext& context, const std::vector<int>& defended,
                 const std::vector<int>& attacked) {
  AttackSettings settings = context.base;
  settings.secure.insert(settings.secure.end(), defended.begin(),
                         defended.end());
  settings.attackable.clear();
  for (int k : attacked) {
    if (std::find(defended.begin(), defended.end(), k) == defended.end()) {
      settings.attackable.push_back(k);
    }
  }
  const AttackVector av =
      SynthesizeAttack(context.sensitivity, context.residual_operator, settings);
  return std::abs(av.flow_change);
}

std::string CellError(const PayoffMatrix& p, int s, int t, const char* what) {
  return "game: cell (defend " + PayoffMatrix::Label(p.defender_sets[s]) +
         ", attack " + PayoffMatrix::Label(p.attacker_sets[t]) + "): " + what;
}

}  // namespace

PayoffMatrix BuildPayoffMatrixSerial(const GameSpec& spec,
                                     const AttackContext& context) {
  PayoffMatrix out = Skeleton(spec, context);
  for (int s = 0; s < out.a.rows(); ++s) {
    for (int t = 0; t < out.a.cols(); ++t) {
      try {
        out.a(s, t) =
            SolveCell(context, out.defender_sets[s], out.attacker_sets[t]);
      } catch (const NumericalError& e) {
        throw NumericalError(CellError(out, s, t, e.what()));
      }
    }
  }
  return out;
}

PayoffMatrix BuildPayoffMatrix(const GameSpec& spec,
                               const AttackContext& context) {
  PayoffMatrix out = Skeleton(spec, context);
  const int rows = static_cast<int>(out.a.rows());
  const int cols = static_cast<int>(out.a.cols());
  const int cells = rows * cols;
  std::vector<std::string> errors(cells);
  std::vector<char> numerical(cells, 0);
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < cells; ++c) {
    const int s = c / cols;
    const int t = c % cols;
    try {
      out.a(s, t) =
          SolveCell(context, out.defender_sets[s], out.attacker_sets[t]);
    } catch (const NumericalError& e) {
      errors[c] = e.what();
      numerical[c] = 1;
    } catch (const std::exception& e) {
      errors[c] = e.what();
    }
  }
  for (int c = 0; c < cells; ++c) {
    if (errors[c].empty()) continue;
    const std::string msg = CellError(out, c / cols, c % cols, errors[c].c_str());
    if (numerical[c]) throw NumericalError(msg);
    throw InputError(msg);
  }
  return out;
}

SecurityLevels PureSecurityLevels(const Eigen::MatrixXd& a) {
  if (a.size() == 0) throw InputError("game: empty payoff matrix");
  return {a.rowwise().maxCoeff().minCoeff(), a.colwise().minCoeff().maxCoeff()};
}

std::optional<std::pair<int, int>> FindPureSaddle(const Eigen::MatrixXd& a) {
  if (a.size() == 0) throw InputError("game: empty payoff matrix");
  for (int i = 0; i < a.rows(); ++i) {
    const double row_max = a.row(i).maxCoeff();
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) == row_max && a(i, j) == a.col(j).minCoeff()) {
        return std::make_pair(i, j);
      }
    }
  }
  return std::nullopt;
}

MixedSolution SolveMixed(const Eigen::MatrixXd& a) {
  if (a.size() == 0) throw InputError("game: empty payoff matrix");
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  MixedSolution out;
  out.saddle = FindPureSaddle(a);
  out.levels = PureSecurityLevels(a);
  const double lo = a.minCoeff();
  out.shift = lo <= 0.0 ? 1.0 - lo : 0.0;
  const Eigen::MatrixXd shifted = a.array() + out.shift;

  lp::LpProblem defender(m, lp::Sense::kMaximize);
  std::fill(defender.cost.begin(), defender.cost.end(), 1.0);
  for (int j = 0; j < n; ++j) {
    std::vector<double> row(m);
    for (int i = 0; i < m; ++i) row[i] = shifted(i, j);
    defender.AddRow(std::move(row), lp::RowType::kLessEqual, 1.0);
  }
  lp::LpProblem attacker(n, lp::Sense::kMinimize);
  std::fill(attacker.cost.begin(), attacker.cost.end(), 1.0);
  for (int i = 0; i < m; ++i) {
    std::vector<double> row(n);
    for (int j = 0; j < n; ++j) row[j] = shifted(i, j);
    attacker.AddRow(std::move(row), lp::RowType::kGreaterEqual, 1.0);
  }
  const lp::LpSolution ds = lp::SolveLp(defender);
  const lp::LpSolution as = lp::SolveLp(attacker);
  if (ds.status != lp::Status::kOptimal || as.status != lp::Status::kOptimal ||
      !(ds.objective > 0.0) || !(as.objective > 0.0)) {
    throw NumericalError("game: mixed-strategy LPs failed (defender " +
                         std::string(lp::ToString(ds.status)) + ", attacker " +
                         std::string(lp::ToString(as.status)) + ")");
  }
  const double v_def = 1.0 / ds.objective;
  const double v_att = 1.0 / as.objective;
  out.y = Eigen::Map<const Eigen::VectorXd>(ds.x.data(), m) * v_def;
  out.w = Eigen::Map<const Eigen::VectorXd>(as.x.data(), n) * v_att;
  out.defender_value = v_def - out.shift;
  out.attacker_value = v_att - out.shift;
  if (std::abs(out.defender_value - out.attacker_value) > 1e-6) {
    throw NumericalError("game: defender and attacker values disagree");
  }
  out.value = out.defender_value;
  return out;
}

}  // namespace gridsec
