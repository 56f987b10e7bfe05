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

// Command-line front end: runs one pipeline stage or the full scenario on a
// fixture and writes report.json plus CSV tables.
//
// Exit codes: 0 success, 1 usage or config error, 2 numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "gridsec/error.h"
#include "gridsec/fixture.h"
#include "gridsec/scenario.h"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool stage_only = false;
};

int Run(const std::string& command, const Options& opt) {
  gridsec::Pipeline pipeline(gridsec::LoadFixture(opt.config), opt.seed);
  gridsec::Report report;
  if (command == "scenario") {
    report = pipeline.RunScenario();
  } else {
    const gridsec::Stage stage = gridsec::ParseStage(command);
    report = opt.stage_only
                 ? pipeline.RunStage(stage)
                 : pipeline.RunStages(gridsec::StageWithPrerequisites(stage));
  }
  if (opt.out.empty()) {
    std::cout << gridsec::SerializeReport(report);
  } else {
    gridsec::WriteReport(report, opt.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid state-estimation attack and market simulator"};
  app.require_subcommand(1, 1);
  Options opt;
  const char* commands[][2] = {
      {"gsf", "Generation shift factors"},
      {"estimate", "WLS state estimation with and without the attack"},
      {"attack", "Stealth attack synthesis"},
      {"dcopf", "Day-ahead dispatch and prices"},
      {"expost", "Real-time repricing and trade profit"},
      {"game", "Attacker-defender payoff matrix and equilibrium"},
      {"scenario", "Full pipeline"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "Fixture or scenario file")
        ->required();
    sub->add_option("--out", opt.out, "Output directory (default: stdout)");
    sub->add_option("--seed", opt.seed, "RNG seed for noise and sampling");
    sub->add_flag("--stage-only", opt.stage_only,
                  "Report only the named stage, not its prerequisites");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return Run(command, opt);
  } catch (const gridsec::InputError& e) {
    std::cerr << "gridsec " << command << ": " << e.what() << "\n";
    return 1;
  } catch (const gridsec::NumericalError& e) {
    std::cerr << "gridsec " << command << ": " << e.what() << "\n";
    return 2;
  }
}
