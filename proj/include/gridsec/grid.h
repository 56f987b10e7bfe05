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

#ifndef GRIDSEC_GRID_H_
#define GRIDSEC_GRID_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gridsec {

// Buses are identified by 1-based ids; vectors indexed by bus use id - 1.
struct Line {
  std::string name;
  int from = 0;
  int to = 0;
  double reactance = 0.0;  // per unit on the network base
  double limit_mw = 0.0;
};

struct Generator {
  std::string name;
  int bus = 0;
  double cost = 0.0;     // day-ahead offer, $/MWh
  double rt_cost = 0.0;  // real-time offer, $/MWh
  double pmin = 0.0;
  double pmax = 0.0;
  bool qualified = true;
  double delta_min = 0.0;  // real-time increment range, MW
  double delta_max = 0.0;
};

struct Load {
  int bus = 0;
  double demand = 0.0;
  bool dispatchable = false;
  double delta_min = 0.0;
  double delta_max = 0.0;
};

// A directed reference to a line: `index` into GridNetwork::lines, and
// `sign` = +1 when the requested (from, to) matches the stored orientation.
struct LineRef {
  int index = -1;
  double sign = 1.0;
};

struct GridNetwork {
  int num_buses = 0;
  int reference_bus = 1;
  double base_mva = 100.0;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  std::vector<Load> loads;

  int num_lines() const { return static_cast<int>(lines.size()); }
  bool HasBus(int id) const { return id >= 1 && id <= num_buses; }

  // Finds the line joining buses i and j in either orientation.
  std::optional<LineRef> FindLine(int i, int j) const;
  // Throws InputError when no line joins i and j.
  LineRef RequireLine(int i, int j) const;

  // Demand per bus (MW), indexed by id - 1.
  Eigen::VectorXd DemandByBus() const;

  // Checks reactances, limits, generator ranges, capacity and connectivity.
  // Throws InputError naming the offending field.
  void Validate() const;
};

// Generation shift factors: rows are lines (stored orientation), columns
// are buses. Entry (k, i) is the MW change on line k per MW injected at bus
// i and withdrawn at the reference bus.
struct GsfMatrix {
  Eigen::MatrixXd factors;

  double at(int line, int bus_id) const { return factors(line, bus_id - 1); }
  // Flow on every line for a balanced nodal injection vector.
  Eigen::VectorXd Flows(const Eigen::VectorXd& injections) const {
    return factors * injections;
  }
};

struct PowerFlowResult {
  Eigen::VectorXd theta;  // rad, reference bus at 0
  Eigen::VectorXd flows;  // MW, stored line orientation
};

// Nodal susceptance matrix in per unit, (n x n).
Eigen::MatrixXd SusceptanceMatrix(const GridNetwork& network);

GsfMatrix ComputeGsf(const GridNetwork& network);

// `injections` are MW per bus and must sum to zero within 1e-6 MW.
PowerFlowResult DcPowerFlow(const GridNetwork& network,
                            std::span<const double> injections);

}  // namespace gridsec

#endif  // GRIDSEC_GRID_H_
