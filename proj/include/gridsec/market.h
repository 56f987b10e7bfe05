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

#ifndef GRIDSEC_MARKET_H_
#define GRIDSEC_MARKET_H_

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gridsec/grid.h"

namespace gridsec {

enum class MarketKind { kDayAhead, kRealTime };

std::string_view ToString(MarketKind kind);

// Prices follow LMP_i = lambda - sum_k GSF(k, i) * mu_k, where mu_k is the
// shadow price of line k's limit in its stored orientation: positive when
// the line is held at +F_max, negative when held at -F_max, zero otherwise.
struct MarketOutcome {
  MarketKind kind = MarketKind::kDayAhead;
  Eigen::VectorXd dispatch;    // per generator: G (day-ahead) or dG
  Eigen::VectorXd load_delta;  // per load: dD (zero in day-ahead)
  double lambda = 0.0;         // energy component, $/MWh
  Eigen::VectorXd mu;          // per line, $/MWh
  Eigen::VectorXd lmp;         // per bus, $/MWh
  Eigen::VectorXd congestion;  // per bus congestion component, $/MWh
  std::vector<int> congested;  // 0-based line indices
  Eigen::VectorXd flows;       // per line, MW (day-ahead: scheduled flows;
                               // real-time: flows used to pick CL)
  double cost = 0.0;           // objective value, $/h
};

// Binding tolerance for day-ahead congestion detection, MW.
inline constexpr double kBindingTolMw = 1e-6;

// Least-cost dispatch subject to balance, GSF line limits and generator
// bounds. Throws NumericalError if the dispatch LP is infeasible.
MarketOutcome SolveDayAhead(const GridNetwork& network, const GsfMatrix& gsf);

struct RealTimeSettings {
  // A line is treated as congested iff |estimated flow| >= F_max - tol_cl.
  double tol_cl = 0.5;
};

// Incremental ex-post dispatch around the day-ahead schedule. Lines in the
// congested set (picked from `estimated_flows`) may not load further in
// their congested direction. Non-qualified generators and non-dispatchable
// loads are frozen.
MarketOutcome SolveRealTime(const GridNetwork& network, const GsfMatrix& gsf,
                            const Eigen::VectorXd& estimated_flows,
                            const MarketOutcome& day_ahead,
                            const RealTimeSettings& settings = {});

// LMP_j - LMP_i. Throws InputError for unknown buses.
double CongestionPrice(const MarketOutcome& outcome, int from_bus, int to_bus);

// [(LMP_j^DA - LMP_i^DA) - (LMP_j^RT - LMP_i^RT)] * quantity, $/h, for a
// position that buys at bus i and sells at bus j day-ahead.
double VirtualTradeProfit(const MarketOutcome& day_ahead,
                          const MarketOutcome& real_time, int buy_bus,
                          int sell_bus, double quantity_mw);

}  // namespace gridsec

#endif  // GRIDSEC_MARKET_H_
