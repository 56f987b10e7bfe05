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

#include "doctest.h"
#include "gridsec/error.h"
#include "gridsec/estimation.h"
#include "test_util.h"

namespace gridsec {
namespace {

struct Setup {
  Fixture f = testing::Pjm5();
  Eigen::MatrixXd h = BuildJacobian(f.network, f.plan);
  Eigen::MatrixXd m = WlsGain(h, f.plan.Sigmas());
};

Eigen::VectorXd RandomAngles(std::mt19937_64& rng, const GridNetwork& net) {
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  Eigen::VectorXd theta(net.num_buses);
  for (int i = 0; i < theta.size(); ++i) theta(i) = u(rng);
  theta(net.reference_bus - 1) = 0.0;
  return theta;
}

TEST_CASE("jacobian rows") {
  const GridNetwork net = testing::Pjm5().network;
  MeasurementPlan plan;
  plan.items = {Measurement::Flow(1, 5), Measurement::Flow(1, 2),
                Measurement::Flow(1, 4), Measurement::Injection(1)};
  const Eigen::MatrixXd h = BuildJacobian(net, plan);
  // Columns: buses 1, 2, 3, 5 (bus 4 is the reference).
  CHECK(h(0, 0) / net.base_mva == doctest::Approx(156.25));
  CHECK(h(0, 3) / net.base_mva == doctest::Approx(-156.25));
  CHECK((h.row(3) - h.row(0) - h.row(1) - h.row(2)).cwiseAbs().maxCoeff() <=
        1e-9);
}

TEST_CASE("twelve-measurement plan is observable") {
  const Setup s;
  CHECK(s.h.rows() == 12);
  CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(s.h).rank() == 4);
}

TEST_CASE("unobservable plan is reported") {
  const GridNetwork net = testing::Pjm5().network;
  MeasurementPlan plan;
  plan.items = {Measurement::Flow(1, 2), Measurement::Flow(2, 1),
                Measurement::Flow(1, 2), Measurement::Flow(2, 1)};
  const Eigen::MatrixXd h = BuildJacobian(net, plan);
  CHECK_THROWS_AS(WlsGain(h, plan.Sigmas()), NumericalError);
}

TEST_CASE("unknown line in plan is rejected") {
  const GridNetwork net = testing::Pjm5().network;
  MeasurementPlan plan;
  plan.items = {Measurement::Flow(2, 5), Measurement::Flow(1, 2),
                Measurement::Flow(1, 4), Measurement::Flow(1, 5)};
  CHECK_THROWS_AS(plan.Validate(net), InputError);
}

TEST_CASE("noiseless recovery and pseudo-inverse property") {
  const Setup s;
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd theta = RandomAngles(rng, s.f.network);
    const Eigen::VectorXd z = MeasurementsFromAngles(s.f.network, s.h, theta);
    const EstimationResult r =
        EstimateState(s.f.network, s.h, s.f.plan.Sigmas(), z);
    CHECK((r.theta - theta).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(r.residual.cwiseAbs().maxCoeff() <= 1e-9);
  }
  const Eigen::MatrixXd mh = s.m * s.h;
  CHECK((mh - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("residual is invariant along the state space") {
  const Setup s;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::VectorXd z0(12);
  for (int k = 0; k < 12; ++k) z0(k) = noise(rng);
  const EstimationResult base =
      EstimateState(s.f.network, s.h, s.f.plan.Sigmas(), z0);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd c(4);
    for (int i = 0; i < 4; ++i) c(i) = u(rng);
    const EstimationResult r =
        EstimateState(s.f.network, s.h, s.f.plan.Sigmas(), z0 + s.h * c);
    CHECK((r.residual - base.residual).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(DetectBadData(r, 3.0) == DetectBadData(base, 3.0));
  }
}

TEST_CASE("estimate minimizes the weighted residual") {
  const Setup s;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.0, 2.0);
  Eigen::VectorXd z(12);
  for (int k = 0; k < 12; ++k) z(k) = noise(rng);
  const EstimationResult r = EstimateState(s.f.network, s.h, s.f.plan.Sigmas(), z);
  const std::vector<double> sig = s.f.plan.Sigmas();
  auto objective = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd e = z - s.h * x;
    double j = 0.0;
    for (int k = 0; k < 12; ++k) j += e(k) * e(k) / (sig[k] * sig[k]);
    return j;
  };
  Eigen::VectorXd x(4);
  x << r.theta(0), r.theta(1), r.theta(2), r.theta(4);
  const double best = objective(x);
  for (int i = 0; i < 4; ++i) {
    for (double step : {1e-4, -1e-4}) {
      Eigen::VectorXd y = x;
      y(i) += step;
      CHECK(objective(y) >= best);
    }
  }
}

TEST_CASE("bad-data threshold boundary") {
  EstimationResult r;
  r.residual = Eigen::VectorXd::Zero(3);
  CHECK(DetectBadData(r, 1.0));
  r.residual(1) = -(2.0 + 1e-9);
  CHECK_FALSE(DetectBadData(r, 2.0));
  r.residual(1) = 2.0;
  CHECK(DetectBadData(r, 2.0));
}

TEST_CASE("estimated flow") {
  const Setup s;
  std::mt19937_64 rng(2);
  const Eigen::VectorXd theta = RandomAngles(rng, s.f.network);
  const Eigen::VectorXd z = MeasurementsFromAngles(s.f.network, s.h, theta);
  std::vector<double> inj(5, 0.0);
  const Eigen::VectorXd flows = EstimatedLineFlows(s.f.network, s.m, z);
  for (int k = 0; k < s.f.network.num_lines(); ++k) {
    const Line& l = s.f.network.lines[k];
    const double direct =
        s.f.network.base_mva * (theta(l.from - 1) - theta(l.to - 1)) / l.reactance;
    CHECK(flows(k) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(EstimatedLineFlow(s.f.network, s.m, l.to, l.from, z) ==
          doctest::Approx(-direct).epsilon(1e-12));
  }
  CHECK(EstimatedLineFlow(s.f.network, s.m, 5, 4, Eigen::VectorXd::Zero(12)) ==
        0.0);
}

TEST_CASE("Monte-Carlo residual statistics") {
  const Setup s;
  const std::vector<double> sig = s.f.plan.Sigmas();
  const Eigen::MatrixXd op = ResidualOperator(s.h, s.m);
  const Eigen::MatrixXd analytic = ResidualCovariance(s.h, s.m, sig);
  const ResidualStats stats = SampleResidualsSerial(op, sig, 10000, 12345);
  CHECK(stats.draws == 10000);
  CHECK((stats.covariance - analytic).norm() / analytic.norm() <= 0.10);
  for (int k = 0; k < 12; ++k) {
    const double sd = std::sqrt(analytic(k, k));
    CHECK(std::abs(stats.mean(k)) <= 3.0 * sd / 100.0 + 1e-12);
  }
}

TEST_CASE("parallel sampler is bitwise identical to the serial one") {
  const Setup s;
  const std::vector<double> sig = s.f.plan.Sigmas();
  const Eigen::MatrixXd op = ResidualOperator(s.h, s.m);
  for (int draws : {2, 255, 256, 257, 3000}) {
    const ResidualStats a = SampleResidualsSerial(op, sig, draws, 99);
    const ResidualStats b = SampleResidualsParallel(op, sig, draws, 99);
    CHECK(a.mean == b.mean);
    CHECK(a.covariance == b.covariance);
  }
}

TEST_CASE("default threshold") {
  const Setup s;
  const std::vector<double> sig = s.f.plan.Sigmas();
  const Eigen::MatrixXd cov = ResidualCovariance(s.h, s.m, sig);
  CHECK(DefaultThreshold(s.h, s.m, sig) ==
        doctest::Approx(3.0 * std::sqrt(cov.diagonal().maxCoeff())));
}

}  // namespace
}  // namespace gridsec
