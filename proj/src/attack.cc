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

#include "gridsec/attack.h"

#include <algorithm>
#include <string>

#include "gridsec/error.h"
#include "gridsec/estimation.h"
#include "gridsec/lp.h"

namespace gridsec {

FlowSensitivity ComputeSensitivity(const GridNetwork& network,
                                   const Eigen::MatrixXd& gain, int from,
                                   int to) {
  const LineRef ref = network.RequireLine(from, to);
  const Eigen::MatrixXd padded = PaddedGain(network, gain);
  FlowSensitivity s;
  s.from = from;
  s.to = to;
  s.q = (padded.row(from - 1) - padded.row(to - 1)).transpose() *
        (network.base_mva / network.lines[ref.index].reactance);
  for (int k = 0; k < s.q.size(); ++k) {
    if (s.q(k) > kSensitivityZeroTol) {
      s.raising.push_back(k);
    } else if (s.q(k) < -kSensitivityZeroTol) {
      s.lowering.push_back(k);
    }
  }
  return s;
}

std::string_view ToString(AttackDirection d) {
  return d == AttackDirection::kIncrease ? "increase" : "decrease";
}

AttackDirection ParseDirection(std::string_view text) {
  if (text == "increase") return AttackDirection::kIncrease;
  if (text == "decrease") return AttackDirection::kDecrease;
  throw InputError("direction: expected 'increase' or 'decrease', got '" +
                   std::string(text) + "'");
}

AttackVector SynthesizeAttack(const FlowSensitivity& sensitivity,
                              const Eigen::MatrixXd& residual_operator,
                              const AttackSettings& settings) {
  const int m = static_cast<int>(sensitivity.q.size());
  if (residual_operator.rows() != m || residual_operator.cols() != m) {
    throw InputError("attack: residual operator does not match measurements");
  }
  if (static_cast<int>(settings.xi.size()) != m) {
    throw InputError("attack: xi has " + std::to_string(settings.xi.size()) +
                     " entries, expected " + std::to_string(m));
  }
  for (int k = 0; k < m; ++k) {
    if (settings.xi[k] < 0.0) {
      throw InputError("attack: xi[" + std::to_string(k) + "] is negative");
    }
  }
  if (settings.z_max < 0.0) throw InputError("attack: z_max is negative");

  std::vector<char> is_secure(m, 0);
  for (int k : settings.secure) {
    if (k < 0 || k >= m) throw InputError("attack: secure index out of range");
    is_secure[k] = 1;
  }
  std::vector<char> is_attacked(m, 0);
  for (int k : settings.attackable) {
    if (k < 0 || k >= m) {
      throw InputError("attack: attackable index out of range");
    }
    if (!is_secure[k]) is_attacked[k] = 1;
  }

  AttackVector out;
  out.xi = settings.xi;
  for (int k = 0; k < m; ++k) {
    if (is_attacked[k]) out.attacked.push_back(k);
  }
  out.za = Eigen::VectorXd::Zero(m);
  if (out.attacked.empty()) return out;

  const double d = settings.direction == AttackDirection::kIncrease ? 1.0 : -1.0;
  lp::LpProblem problem(m, lp::Sense::kMaximize);
  for (int k = 0; k < m; ++k) {
    const double q = sensitivity.q(k);
    if (is_attacked[k]) {
      if (q > kSensitivityZeroTol) {
        problem.cost[k] = d;
      } else if (q < -kSensitivityZeroTol) {
        problem.cost[k] = -d;
      }
      problem.SetBounds(k, -settings.z_max, settings.z_max);
    } else {
      problem.SetBounds(k, 0.0, 0.0);
    }
  }
  for (int r = 0; r < m; ++r) {
    std::vector<double> coeffs(m);
    for (int k = 0; k < m; ++k) coeffs[k] = residual_operator(r, k);
    problem.AddRow(coeffs, lp::RowType::kLessEqual, settings.xi[r]);
    problem.AddRow(std::move(coeffs), lp::RowType::kGreaterEqual,
                   -settings.xi[r]);
  }
  const lp::LpSolution sol = lp::SolveLp(problem);
  if (sol.status != lp::Status::kOptimal) {
    throw NumericalError("attack: stealth LP is " +
                         std::string(lp::ToString(sol.status)));
  }
  for (int k = 0; k < m; ++k) out.za(k) = is_attacked[k] ? sol.x[k] : 0.0;
  out.objective = sol.objective;
  out.flow_change = FlowChange(sensitivity, out.za);
  return out;
}

double FlowChange(const FlowSensitivity& sensitivity, const Eigen::VectorXd& za) {
  if (za.size() != sensitivity.q.size()) {
    throw InputError("flow change: attack vector has wrong length");
  }
  return sensitivity.q.dot(za);
}

}  // namespace gridsec
