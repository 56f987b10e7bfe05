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

#ifndef GRIDSEC_SCENARIO_H_
#define GRIDSEC_SCENARIO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "gridsec/attack.h"
#include "gridsec/estimation.h"
#include "gridsec/fixture.h"
#include "gridsec/game.h"
#include "gridsec/grid.h"
#include "gridsec/market.h"

namespace gridsec {

enum class Stage { kGsf, kEstimate, kAttack, kDcopf, kExpost, kGame };

std::string_view ToString(Stage stage);
// Throws InputError for unknown names.
Stage ParseStage(std::string_view name);
// Stages whose records a full run of `stage` also reports, in run order.
std::vector<Stage> StageWithPrerequisites(Stage stage);

using Json = nlohmann::ordered_json;

struct Report {
  Json doc;
  std::vector<std::pair<std::string, std::string>> tables;  // file, CSV text
};

// Lazily evaluated end-to-end pipeline over one fixture. Each piece is
// computed at most once; stage records only read from the cache, so a full
// scenario report is the union of the individual stage records.
class Pipeline {
 public:
  explicit Pipeline(Fixture fixture,
                    std::optional<std::uint64_t> seed = std::nullopt);

  const Fixture& fixture() const { return fixture_; }
  std::uint64_t seed() const { return seed_; }

  const GsfMatrix& Gsf();
  const MarketOutcome& DayAhead();
  const PowerFlowResult& ActualState();
  const Eigen::MatrixXd& Jacobian();
  const Eigen::MatrixXd& Gain();
  const Eigen::MatrixXd& Residual();
  double Gamma();
  const Eigen::VectorXd& CleanMeasurements();
  const FlowSensitivity& Sensitivity();
  const AttackVector& Attack();
  const EstimationResult& CleanEstimate();
  const EstimationResult& AttackedEstimate();
  const MarketOutcome& RealTimeClean();
  const MarketOutcome& RealTimeAttacked();
  const PayoffMatrix& Payoff();
  const MixedSolution& Mixed();
  std::optional<double> Profit();

  Report RunStage(Stage stage);
  Report RunStages(const std::vector<Stage>& stages);
  Report RunScenario();

 private:
  void Record(Stage stage, Report& report);
  void RequireTarget();

  Fixture fixture_;
  std::uint64_t seed_;
  std::optional<GsfMatrix> gsf_;
  std::optional<MarketOutcome> day_ahead_;
  std::optional<PowerFlowResult> actual_;
  std::optional<Eigen::MatrixXd> jacobian_;
  std::optional<Eigen::MatrixXd> gain_;
  std::optional<Eigen::MatrixXd> residual_;
  std::optional<double> gamma_;
  std::optional<Eigen::VectorXd> z0_;
  std::optional<FlowSensitivity> sensitivity_;
  std::optional<AttackVector> attack_;
  std::optional<EstimationResult> clean_;
  std::optional<EstimationResult> attacked_;
  std::optional<MarketOutcome> rt_clean_;
  std::optional<MarketOutcome> rt_attacked_;
  std::optional<PayoffMatrix> payoff_;
  std::optional<MixedSolution> mixed_;
};

// Writes report.json and every table into `out_dir`, creating it if needed.
void WriteReport(const Report& report, const std::string& out_dir);

// Canonical text of the report document.
std::string SerializeReport(const Report& report);

}  // namespace gridsec

#endif  // GRIDSEC_SCENARIO_H_
