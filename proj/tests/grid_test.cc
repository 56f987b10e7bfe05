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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "gridsec/error.h"
#include "gridsec/grid.h"
#include "test_util.h"

namespace gridsec {
namespace {

std::vector<double> RandomBalanced(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-300.0, 300.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    p[i] = u(rng);
    sum += p[i];
  }
  p[n - 1] = -sum;
  return p;
}

TEST_CASE("five-bus fixture loads") {
  const GridNetwork net = testing::Pjm5().network;
  CHECK(net.num_buses == 5);
  CHECK(net.num_lines() == 6);
  CHECK(net.reference_bus == 4);
  const LineRef l54 = net.RequireLine(5, 4);
  CHECK(net.lines[l54.index].limit_mw == 240.0);
  for (int k = 0; k < net.num_lines(); ++k) {
    if (k != l54.index) CHECK(net.lines[k].limit_mw == 999.0);
  }
}

TEST_CASE("gsf matches the published shift factors") {
  const GridNetwork net = testing::Pjm5().network;
  const GsfMatrix gsf = ComputeGsf(net);
  // Rows L12, L14, L15, L23, L34, L54; columns buses 1..5.
  const double table[6][5] = {
      {0.1939, -0.476, -0.349, 0, 0.1595},
      {0.4376, 0.258, 0.1895, 0, 0.36},
      {0.3685, 0.2176, 0.1595, 0, -0.5195},
      {0.1939, 0.5241, -0.349, 0, 0.1595},
      {0.1939, 0.5241, 0.6510, 0, 0.1595},
      {0.3685, 0.2176, 0.1595, 0, 0.4805},
  };
  for (int k = 0; k < 6; ++k) {
    for (int b = 0; b < 5; ++b) {
      CAPTURE(k);
      CAPTURE(b);
      CHECK(std::abs(gsf.factors(k, b) - table[k][b]) <= 5e-3);
    }
  }
}

TEST_CASE("reference column is zero") {
  for (const Fixture& f : {testing::Pjm5(), testing::TwoBus()}) {
    const GsfMatrix gsf = ComputeGsf(f.network);
    CHECK(gsf.factors.col(f.network.reference_bus - 1).isZero(0.0));
  }
}

TEST_CASE("two-bus gsf and power flow") {
  const GridNetwork net = testing::TwoBus().network;
  const GsfMatrix gsf = ComputeGsf(net);
  CHECK(gsf.factors(0, 0) == doctest::Approx(1.0));
  CHECK(gsf.factors(0, 1) == 0.0);
  const std::vector<double> inj = {100.0, -100.0};
  const PowerFlowResult pf = DcPowerFlow(net, inj);
  CHECK(pf.flows(0) == doctest::Approx(100.0));
  CHECK(pf.theta(0) - pf.theta(1) == doctest::Approx(10.0));
  CHECK(pf.theta(1) == 0.0);
}

TEST_CASE("zero injections give a flat profile") {
  const GridNetwork net = testing::Pjm5().network;
  const std::vector<double> zero(5, 0.0);
  const PowerFlowResult pf = DcPowerFlow(net, zero);
  CHECK(pf.theta.isZero(0.0));
  CHECK(pf.flows.isZero(0.0));
}

TEST_CASE("unbalanced injections are rejected") {
  const GridNetwork net = testing::Pjm5().network;
  const std::vector<double> inj = {10.0, 0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(DcPowerFlow(net, inj), InputError);
}

TEST_CASE("gsf agrees with power flow and flows obey Kirchhoff") {
  const GridNetwork net = testing::Pjm5().network;
  const GsfMatrix gsf = ComputeGsf(net);
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> inj = RandomBalanced(rng, 5);
    const PowerFlowResult pf = DcPowerFlow(net, inj);
    const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(inj.data(), 5);
    worst = std::max(worst, (gsf.Flows(p) - pf.flows).cwiseAbs().maxCoeff());
    Eigen::VectorXd balance = -p;
    for (int k = 0; k < net.num_lines(); ++k) {
      const Line& l = net.lines[k];
      CHECK(pf.flows(k) == doctest::Approx(net.base_mva *
                                           (pf.theta(l.from - 1) -
                                            pf.theta(l.to - 1)) /
                                           l.reactance));
      balance(l.from - 1) += pf.flows(k);
      balance(l.to - 1) -= pf.flows(k);
    }
    CHECK(balance.cwiseAbs().maxCoeff() <= 1e-9);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("superposition") {
  const GridNetwork net = testing::Pjm5().network;
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> a = RandomBalanced(rng, 5);
    const std::vector<double> b = RandomBalanced(rng, 5);
    std::vector<double> ab(5);
    for (int i = 0; i < 5; ++i) ab[i] = a[i] + b[i];
    const Eigen::VectorXd sum = DcPowerFlow(net, a).flows + DcPowerFlow(net, b).flows;
    CHECK((DcPowerFlow(net, ab).flows - sum).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("invalid networks are rejected") {
  GridNetwork net = testing::TwoBus().network;
  net.generators[0].pmax = 50.0;
  CHECK_THROWS_AS(net.Validate(), InputError);
  net = testing::TwoBus().network;
  net.generators[0].pmin = 300.0;
  CHECK_THROWS_AS(net.Validate(), InputError);
  net = testing::TwoBus().network;
  net.reference_bus = 3;
  CHECK_THROWS_AS(net.Validate(), InputError);
  net = testing::TwoBus().network;
  net.lines[0].limit_mw = 0.0;
  CHECK_THROWS_AS(net.Validate(), InputError);
}

}  // namespace
}  // namespace gridsec
