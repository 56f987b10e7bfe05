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

#ifndef GRIDSEC_GAME_H_
#define GRIDSEC_GAME_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gridsec/attack.h"

namespace gridsec {

// Attacker picks `attack_size` of the insecure measurements, defender
// protects `defend_size` of them. Indices are 0-based.
struct GameSpec {
  std::vector<int> insecure;
  int attack_size = 1;
  int defend_size = 1;
};

// All k-subsets of `items` in lexicographic order of position.
std::vector<std::vector<int>> Combinations(const std::vector<int>& items, int k);

// Everything a cell solve needs besides the strategy pair. `base.attackable`
// is ignored; `base.secure` is extended with the defended set per cell.
struct AttackContext {
  FlowSensitivity sensitivity;
  Eigen::MatrixXd residual_operator;
  AttackSettings base;
};

// Rows are defender strategies, columns attacker strategies; entries are
// |estimated flow change| in MW.
struct PayoffMatrix {
  Eigen::MatrixXd a;
  std::vector<std::vector<int>> defender_sets;
  std::vector<std::vector<int>> attacker_sets;

  // "z1z4"-style label (1-based) for a strategy.
  static std::string Label(const std::vector<int>& set);
};

// Cell (s, t) solves the stealth LP over t \ s with s added to the secure
// set. The parallel builder spreads cells over OpenMP threads and returns a
// bitwise-identical matrix to the serial one.
PayoffMatrix BuildPayoffMatrixSerial(const GameSpec& spec,
                                     const AttackContext& context);
PayoffMatrix BuildPayoffMatrix(const GameSpec& spec,
                               const AttackContext& context);

struct SecurityLevels {
  double min_row_max = 0.0;  // defender's pure security level
  double max_col_min = 0.0;  // attacker's pure security level
};

SecurityLevels PureSecurityLevels(const Eigen::MatrixXd& a);

// (row, col) with a(row, j) <= a(row, col) <= a(i, col) for all i, j, or
// nothing. Ties resolve to the smallest row, then column.
std::optional<std::pair<int, int>> FindPureSaddle(const Eigen::MatrixXd& a);

struct MixedSolution {
  Eigen::VectorXd y;  // defender (row) distribution
  Eigen::VectorXd w;  // attacker (column) distribution
  double value = 0.0;
  double defender_value = 0.0;  // from the defender LP
  double attacker_value = 0.0;  // from the attacker LP
  double shift = 0.0;           // constant added before solving
  std::optional<std::pair<int, int>> saddle;
  SecurityLevels levels;
};

// Mixed equilibrium through the two reciprocal LPs
//   defender: max 1'u  s.t. A'u <= 1, u >= 0;  y = u / 1'u
//   attacker: min 1'v  s.t. A v >= 1, v >= 0;  w = v / 1'v
// on A + shift (shift = 1 - min A when min A <= 0). Value is reported in
// the original units. Throws NumericalError if the LPs disagree by more
// than 1e-6.
MixedSolution SolveMixed(const Eigen::MatrixXd& a);

}  // namespace gridsec

#endif  // GRIDSEC_GAME_H_
