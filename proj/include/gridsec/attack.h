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

#ifndef GRIDSEC_ATTACK_H_
#define GRIDSEC_ATTACK_H_

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gridsec/grid.h"

namespace gridsec {

// Per-MW influence of each measurement on the estimated flow of one line.
// Measurement indices are 0-based.
struct FlowSensitivity {
  int from = 0;
  int to = 0;
  Eigen::VectorXd q;
  std::vector<int> raising;   // q_k > 0
  std::vector<int> lowering;  // q_k < 0
};

// Coefficients with |q_k| below this belong to neither group.
inline constexpr double kSensitivityZeroTol = 1e-9;

FlowSensitivity ComputeSensitivity(const GridNetwork& network,
                                   const Eigen::MatrixXd& gain, int from,
                                   int to);

enum class AttackDirection { kIncrease, kDecrease };

std::string_view ToString(AttackDirection d);
AttackDirection ParseDirection(std::string_view text);

struct AttackSettings {
  AttackDirection direction = AttackDirection::kIncrease;
  std::vector<double> xi;        // stealth budget per measurement, MW
  std::vector<int> secure;       // never modified
  std::vector<int> attackable;   // candidates; secure entries are removed
  double z_max = 50.0;           // |z^a_k| bound, MW
};

struct AttackVector {
  Eigen::VectorXd za;          // MW per measurement
  std::vector<double> xi;
  std::vector<int> attacked;   // attackable minus secure, sorted
  double objective = 0.0;      // LP objective in the chosen direction
  double flow_change = 0.0;    // q' z^a, MW
};

// Solves
//   max  d * (sum_{k in raising} z_k - sum_{k in lowering} z_k)
//   s.t. |((I - H M) z)_k| <= xi_k          for every k
//        z_k = 0                            off the attacked set
//        |z_k| <= z_max
// with d = +1 to raise the estimated flow and -1 to lower it. Throws
// InputError for negative xi and NumericalError on LP failure.
AttackVector SynthesizeAttack(const FlowSensitivity& sensitivity,
                              const Eigen::MatrixXd& residual_operator,
                              const AttackSettings& settings);

// q' z^a; positive means the estimated flow (from -> to) increases.
double FlowChange(const FlowSensitivity& sensitivity, const Eigen::VectorXd& za);

}  // namespace gridsec

#endif  // GRIDSEC_ATTACK_H_
