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

#ifndef GRIDSEC_FIXTURE_H_
#define GRIDSEC_FIXTURE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridsec/attack.h"
#include "gridsec/estimation.h"
#include "gridsec/grid.h"

namespace gridsec {

inline constexpr int kFixtureSchemaVersion = 1;

// Scenario section of a fixture. Measurement indices are 0-based here and
// 1-based in the file.
struct ScenarioSettings {
  int target_from = 0;
  int target_to = 0;
  AttackDirection direction = AttackDirection::kDecrease;
  std::vector<double> xi;  // one entry per measurement, MW
  double z_max = 50.0;
  std::vector<int> attack_set;
  std::vector<int> insecure;
  int n_attack = 1;
  int n_defend = 1;
  double tol_cl = 0.5;
  std::optional<double> gamma;  // default: 3 sigma of the worst residual
  bool noise = false;
  std::uint64_t seed = 1;
  int mc_draws = 10000;
  int trade_buy = 0;
  int trade_sell = 0;
  double trade_mw = 0.0;
};

struct Fixture {
  std::string source;  // path or label, for diagnostics
  GridNetwork network;
  MeasurementPlan plan;
  ScenarioSettings scenario;
};

// Parses a YAML fixture document. A document without a `lines` section is a
// scenario-only config: its `scenario.network` names the fixture (relative to
// `base_dir`) supplying the network and measurements, and its scenario keys
// override that fixture's. Throws InputError with the offending field path.
Fixture ParseFixture(const std::string& text, const std::string& source,
                     const std::string& base_dir = ".");

// Reads and parses a fixture file. Throws InputError if it cannot be read.
Fixture LoadFixture(const std::string& path);

}  // namespace gridsec

#endif  // GRIDSEC_FIXTURE_H_
