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

// Serial reference vs OpenMP kernel timings for the payoff-matrix builder
// and the Monte-Carlo residual sampler.

#include <string>

#include <benchmark/benchmark.h>

#include "gridsec/estimation.h"
#include "gridsec/fixture.h"
#include "gridsec/game.h"

namespace {

struct Context {
  Context() {
    const gridsec::Fixture f =
        gridsec::LoadFixture(std::string(GRIDSEC_FIXTURE_DIR) + "/pjm5.yaml");
    sigmas = f.plan.Sigmas();
    h = gridsec::BuildJacobian(f.network, f.plan);
    m = gridsec::WlsGain(h, sigmas);
    attack.sensitivity = gridsec::ComputeSensitivity(f.network, m, 5, 4);
    attack.residual_operator = gridsec::ResidualOperator(h, m);
    attack.base.direction = gridsec::AttackDirection::kDecrease;
    attack.base.xi.assign(sigmas.size(), 5.0);
  }
  std::vector<double> sigmas;
  Eigen::MatrixXd h, m;
  gridsec::AttackContext attack;
};

const Context& Ctx() {
  static const Context ctx;
  return ctx;
}

// All twelve measurements insecure, attacker and defender pick three: a
// 220 x 220 matrix.
const gridsec::GameSpec kSpec{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}, 3, 3};

void BM_PayoffSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gridsec::BuildPayoffMatrixSerial(kSpec, Ctx().attack));
  }
}
BENCHMARK(BM_PayoffSerial)->Unit(benchmark::kMillisecond);

void BM_PayoffParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gridsec::BuildPayoffMatrix(kSpec, Ctx().attack));
  }
}
BENCHMARK(BM_PayoffParallel)->Unit(benchmark::kMillisecond);

void BM_ResidualsSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gridsec::SampleResidualsSerial(
        Ctx().attack.residual_operator, Ctx().sigmas,
        static_cast<int>(state.range(0)), 1));
  }
}
BENCHMARK(BM_ResidualsSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ResidualsParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gridsec::SampleResidualsParallel(
        Ctx().attack.residual_operator, Ctx().sigmas,
        static_cast<int>(state.range(0)), 1));
  }
}
BENCHMARK(BM_ResidualsParallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
