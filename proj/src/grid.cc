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

#include "gridsec/grid.h"

#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "gridsec/error.h"

namespace gridsec {

namespace {

std::string Field(const char* section, size_t i, const char* name) {
  return std::string(section) + "[" + std::to_string(i) + "]." + name;
}

// Inverse of the susceptance matrix with the reference row/column removed,
// re-embedded as an n x n matrix with zeros on the reference row/column.
Eigen::MatrixXd ReducedInverse(const GridNetwork& network) {
  const int n = network.num_buses;
  const int ref = network.reference_bus - 1;
  const Eigen::MatrixXd b = SusceptanceMatrix(network);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  if (n == 1) return x;
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (i != ref) keep.push_back(i);
  }
  Eigen::MatrixXd reduced(n - 1, n - 1);
  for (int r = 0; r < n - 1; ++r) {
    for (int c = 0; c < n - 1; ++c) reduced(r, c) = b(keep[r], keep[c]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(reduced);
  if (lu.rank() < n - 1) {
    throw NumericalError(
        "reduced susceptance matrix is singular (network disconnected)");
  }
  const Eigen::MatrixXd inv = lu.inverse();
  for (int r = 0; r < n - 1; ++r) {
    for (int c = 0; c < n - 1; ++c) x(keep[r], keep[c]) = inv(r, c);
  }
  return x;
}

}  // namespace

std::optional<LineRef> GridNetwork::FindLine(int i, int j) const {
  for (int k = 0; k < num_lines(); ++k) {
    if (lines[k].from == i && lines[k].to == j) return LineRef{k, 1.0};
    if (lines[k].from == j && lines[k].to == i) return LineRef{k, -1.0};
  }
  return std::nullopt;
}

LineRef GridNetwork::RequireLine(int i, int j) const {
  auto ref = FindLine(i, j);
  if (!ref) {
    throw InputError("no line between bus " + std::to_string(i) + " and bus " +
                     std::to_string(j));
  }
  return *ref;
}

Eigen::VectorXd GridNetwork::DemandByBus() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(num_buses);
  for (const Load& load : loads) d(load.bus - 1) += load.demand;
  return d;
}

void GridNetwork::Validate() const {
  if (num_buses < 1) throw InputError("buses: at least one bus is required");
  if (!HasBus(reference_bus)) {
    throw InputError("reference_bus: bus " + std::to_string(reference_bus) +
                     " does not exist");
  }
  if (!(base_mva > 0.0)) throw InputError("base_mva: must be positive");
  for (size_t k = 0; k < lines.size(); ++k) {
    const Line& l = lines[k];
    if (!HasBus(l.from)) throw InputError(Field("lines", k, "from") + ": unknown bus");
    if (!HasBus(l.to)) throw InputError(Field("lines", k, "to") + ": unknown bus");
    if (l.from == l.to) {
      throw InputError(Field("lines", k, "to") + ": line endpoints coincide");
    }
    if (!(l.reactance > 0.0)) {
      throw InputError(Field("lines", k, "x") + ": reactance must be positive");
    }
    if (!(l.limit_mw > 0.0)) {
      throw InputError(Field("lines", k, "limit") +
                       ": thermal limit must be positive");
    }
  }
  double capacity = 0.0;
  for (size_t g = 0; g < generators.size(); ++g) {
    const Generator& gen = generators[g];
    if (!HasBus(gen.bus)) {
      throw InputError(Field("generators", g, "bus") + ": unknown bus");
    }
    if (gen.pmin > gen.pmax) {
      throw InputError(Field("generators", g, "pmin") + ": exceeds pmax");
    }
    if (gen.delta_min > gen.delta_max) {
      throw InputError(Field("generators", g, "delta_min") +
                       ": exceeds delta_max");
    }
    capacity += gen.pmax;
  }
  double demand = 0.0;
  for (size_t d = 0; d < loads.size(); ++d) {
    const Load& load = loads[d];
    if (!HasBus(load.bus)) {
      throw InputError(Field("loads", d, "bus") + ": unknown bus");
    }
    if (load.delta_min > load.delta_max) {
      throw InputError(Field("loads", d, "delta_min") + ": exceeds delta_max");
    }
    demand += load.demand;
  }
  if (capacity < demand) {
    throw InputError("generators: total capacity " + std::to_string(capacity) +
                     " MW is below total demand " + std::to_string(demand) +
                     " MW");
  }

  std::vector<std::vector<int>> adj(num_buses);
  for (const Line& l : lines) {
    adj[l.from - 1].push_back(l.to - 1);
    adj[l.to - 1].push_back(l.from - 1);
  }
  std::vector<char> seen(num_buses, 0);
  std::queue<int> frontier;
  frontier.push(reference_bus - 1);
  seen[reference_bus - 1] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  if (reached != num_buses) {
    for (int i = 0; i < num_buses; ++i) {
      if (!seen[i]) {
        throw InputError("lines: network is disconnected (bus " +
                         std::to_string(i + 1) +
                         " unreachable from the reference bus)");
      }
    }
  }
}

Eigen::MatrixXd SusceptanceMatrix(const GridNetwork& network) {
  const int n = network.num_buses;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (const Line& l : network.lines) {
    const int f = l.from - 1;
    const int t = l.to - 1;
    const double y = 1.0 / l.reactance;
    b(f, f) += y;
    b(t, t) += y;
    b(f, t) -= y;
    b(t, f) -= y;
  }
  return b;
}

GsfMatrix ComputeGsf(const GridNetwork& network) {
  const Eigen::MatrixXd x = ReducedInverse(network);
  GsfMatrix gsf;
  gsf.factors.resize(network.num_lines(), network.num_buses);
  for (int k = 0; k < network.num_lines(); ++k) {
    const Line& l = network.lines[k];
    gsf.factors.row(k) = (x.row(l.from - 1) - x.row(l.to - 1)) / l.reactance;
  }
  return gsf;
}

PowerFlowResult DcPowerFlow(const GridNetwork& network,
                            std::span<const double> injections) {
  const int n = network.num_buses;
  if (static_cast<int>(injections.size()) != n) {
    throw InputError("dc power flow: expected " + std::to_string(n) +
                     " injections, got " + std::to_string(injections.size()));
  }
  const double total = std::accumulate(injections.begin(), injections.end(), 0.0);
  if (std::abs(total) > 1e-6) {
    throw InputError("dc power flow: injections are unbalanced by " +
                     std::to_string(total) + " MW");
  }
  const Eigen::MatrixXd x = ReducedInverse(network);
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) p(i) = injections[i] / network.base_mva;
  PowerFlowResult result;
  result.theta = x * p;
  result.flows.resize(network.num_lines());
  for (int k = 0; k < network.num_lines(); ++k) {
    const Line& l = network.lines[k];
    result.flows(k) = network.base_mva *
                      (result.theta(l.from - 1) - result.theta(l.to - 1)) /
                      l.reactance;
  }
  return result;
}

}  // namespace gridsec
