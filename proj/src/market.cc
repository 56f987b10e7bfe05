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

#include "gridsec/market.h"

#include <cmath>
#include <string>

#include "gridsec/error.h"
#include "gridsec/lp.h"

namespace gridsec {

std::string_view ToString(MarketKind kind) {
  return kind == MarketKind::kDayAhead ? "day-ahead" : "real-time";
}

namespace {

void PriceBuses(const GsfMatrix& gsf, MarketOutcome& out) {
  out.congestion = -(gsf.factors.transpose() * out.mu);
  out.lmp = out.congestion.array() + out.lambda;
}

}  // namespace

MarketOutcome SolveDayAhead(const GridNetwork& network, const GsfMatrix& gsf) {
  const int ng = static_cast<int>(network.generators.size());
  const int nl = network.num_lines();
  if (ng == 0) throw InputError("day-ahead: network has no generators");
  const Eigen::VectorXd demand = network.DemandByBus();

  lp::LpProblem problem(ng, lp::Sense::kMinimize);
  for (int g = 0; g < ng; ++g) {
    const Generator& gen = network.generators[g];
    problem.cost[g] = gen.cost;
    problem.SetBounds(g, gen.pmin, gen.pmax);
  }
  problem.AddRow(std::vector<double>(ng, 1.0), lp::RowType::kEqual,
                 demand.sum());
  for (int k = 0; k < nl; ++k) {
    std::vector<double> row(ng);
    for (int g = 0; g < ng; ++g) {
      row[g] = gsf.at(k, network.generators[g].bus);
    }
    const double load_flow = gsf.factors.row(k).dot(demand);
    const double limit = network.lines[k].limit_mw;
    problem.AddRow(row, lp::RowType::kLessEqual, limit + load_flow);
    problem.AddRow(std::move(row), lp::RowType::kGreaterEqual,
                   -limit + load_flow);
  }

  const lp::LpSolution sol = lp::SolveLp(problem);
  if (sol.status != lp::Status::kOptimal) {
    throw NumericalError("day-ahead: dispatch LP is " +
                         std::string(lp::ToString(sol.status)));
  }

  MarketOutcome out;
  out.kind = MarketKind::kDayAhead;
  out.dispatch = Eigen::Map<const Eigen::VectorXd>(sol.x.data(), ng);
  out.load_delta = Eigen::VectorXd::Zero(network.loads.size());
  out.cost = sol.objective;
  out.lambda = sol.duals[0];
  out.mu.resize(nl);
  for (int k = 0; k < nl; ++k) {
    out.mu(k) = sol.duals[1 + 2 * k] - sol.duals[2 + 2 * k];
  }
  Eigen::VectorXd injection = -demand;
  for (int g = 0; g < ng; ++g) {
    injection(network.generators[g].bus - 1) += out.dispatch(g);
  }
  out.flows = gsf.Flows(injection);
  for (int k = 0; k < nl; ++k) {
    const bool at_limit = std::abs(out.flows(k)) >=
                          network.lines[k].limit_mw - kBindingTolMw;
    if (at_limit && std::abs(out.mu(k)) > lp::kFeasibilityTol) {
      out.congested.push_back(k);
    }
  }
  PriceBuses(gsf, out);
  return out;
}

MarketOutcome SolveRealTime(const GridNetwork& network, const GsfMatrix& gsf,
                            const Eigen::VectorXd& estimated_flows,
                            const MarketOutcome& day_ahead,
                            const RealTimeSettings& settings) {
  const int ng = static_cast<int>(network.generators.size());
  const int nl = network.num_lines();
  if (estimated_flows.size() != nl) {
    throw InputError("real-time: expected " + std::to_string(nl) +
                     " estimated flows");
  }
  if (day_ahead.kind != MarketKind::kDayAhead || day_ahead.lmp.size() == 0) {
    throw InputError("real-time: a priced day-ahead outcome is required");
  }

  std::vector<int> flexible_loads;
  for (int d = 0; d < static_cast<int>(network.loads.size()); ++d) {
    if (network.loads[d].dispatchable) flexible_loads.push_back(d);
  }
  const int nv = ng + static_cast<int>(flexible_loads.size());

  lp::LpProblem problem(nv, lp::Sense::kMinimize);
  std::vector<double> balance(nv, 0.0);
  for (int g = 0; g < ng; ++g) {
    const Generator& gen = network.generators[g];
    problem.cost[g] = gen.rt_cost;
    if (gen.qualified) {
      problem.SetBounds(g, gen.delta_min, gen.delta_max);
    } else {
      problem.SetBounds(g, 0.0, 0.0);
    }
    balance[g] = 1.0;
  }
  for (size_t j = 0; j < flexible_loads.size(); ++j) {
    const Load& load = network.loads[flexible_loads[j]];
    problem.SetBounds(ng + static_cast<int>(j), load.delta_min, load.delta_max);
    balance[ng + j] = -1.0;
  }
  problem.AddRow(std::move(balance), lp::RowType::kEqual, 0.0);

  MarketOutcome out;
  out.kind = MarketKind::kRealTime;
  out.flows = estimated_flows;
  std::vector<double> direction;
  for (int k = 0; k < nl; ++k) {
    const double f = estimated_flows(k);
    if (std::abs(f) < network.lines[k].limit_mw - settings.tol_cl) continue;
    const double s = f >= 0.0 ? 1.0 : -1.0;
    std::vector<double> row(nv, 0.0);
    for (int g = 0; g < ng; ++g) {
      row[g] = s * gsf.at(k, network.generators[g].bus);
    }
    for (size_t j = 0; j < flexible_loads.size(); ++j) {
      row[ng + j] = -s * gsf.at(k, network.loads[flexible_loads[j]].bus);
    }
    problem.AddRow(std::move(row), lp::RowType::kLessEqual, 0.0);
    out.congested.push_back(k);
    direction.push_back(s);
  }

  const lp::LpSolution sol = lp::SolveLp(problem);
  if (sol.status != lp::Status::kOptimal) {
    throw NumericalError("real-time: incremental dispatch LP is " +
                         std::string(lp::ToString(sol.status)));
  }
  out.dispatch = Eigen::Map<const Eigen::VectorXd>(sol.x.data(), ng);
  out.load_delta = Eigen::VectorXd::Zero(network.loads.size());
  for (size_t j = 0; j < flexible_loads.size(); ++j) {
    out.load_delta(flexible_loads[j]) = sol.x[ng + j];
  }
  out.cost = sol.objective;
  out.lambda = sol.duals[0];
  out.mu = Eigen::VectorXd::Zero(nl);
  for (size_t c = 0; c < out.congested.size(); ++c) {
    out.mu(out.congested[c]) = direction[c] * sol.duals[1 + c];
  }
  PriceBuses(gsf, out);
  return out;
}

double CongestionPrice(const MarketOutcome& outcome, int from_bus, int to_bus) {
  const auto n = outcome.lmp.size();
  if (from_bus < 1 || from_bus > n || to_bus < 1 || to_bus > n) {
    throw InputError("congestion price: unknown bus");
  }
  return outcome.lmp(to_bus - 1) - outcome.lmp(from_bus - 1);
}

double VirtualTradeProfit(const MarketOutcome& day_ahead,
                          const MarketOutcome& real_time, int buy_bus,
                          int sell_bus, double quantity_mw) {
  return (CongestionPrice(day_ahead, buy_bus, sell_bus) -
          CongestionPrice(real_time, buy_bus, sell_bus)) *
         quantity_mw;
}

}  // namespace gridsec
