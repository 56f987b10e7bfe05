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

#ifndef GRIDSEC_ESTIMATION_H_
#define GRIDSEC_ESTIMATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridsec/grid.h"

namespace gridsec {

enum class MeasurementKind { kLineFlow, kInjection };

// A line flow is measured from `from` towards `to`; an injection uses
// `from` as the bus and ignores `to`.
struct Measurement {
  MeasurementKind kind = MeasurementKind::kLineFlow;
  int from = 0;
  int to = 0;
  double sigma = 1.0;  // MW
  bool secure = false;

  static Measurement Flow(int i, int j, double sigma = 1.0) {
    return {MeasurementKind::kLineFlow, i, j, sigma, false};
  }
  static Measurement Injection(int bus, double sigma = 1.0) {
    return {MeasurementKind::kInjection, bus, 0, sigma, false};
  }

  std::string Describe() const;
};

struct MeasurementPlan {
  std::vector<Measurement> items;

  int size() const { return static_cast<int>(items.size()); }
  std::vector<double> Sigmas() const;
  // 0-based indices of measurements flagged secure.
  std::vector<int> SecureSet() const;
  // Checks sigma > 0, endpoint validity and m >= n - 1.
  void Validate(const GridNetwork& network) const;
};

// Maps bus ids to state-vector columns; the reference bus has no column.
struct StateIndex {
  explicit StateIndex(const GridNetwork& network);
  int column(int bus_id) const { return columns_[bus_id - 1]; }
  int size() const { return size_; }

 private:
  std::vector<int> columns_;
  int size_ = 0;
};

// m x (n - 1) Jacobian in MW/rad: a flow (i, j) row carries +base/X at
// theta_i and -base/X at theta_j; an injection row sums the incident flows.
Eigen::MatrixXd BuildJacobian(const GridNetwork& network,
                              const MeasurementPlan& plan);

struct EstimationResult {
  Eigen::VectorXd theta;     // n entries, reference bus at 0
  Eigen::VectorXd residual;  // z - H theta_hat, MW
  Eigen::MatrixXd jacobian;  // H, m x (n - 1)
  Eigen::MatrixXd gain;      // M = (H' W H)^-1 H' W, (n - 1) x m
  bool bdd_passed = true;
};

// WLS gain M for the given Jacobian and noise deviations. Throws
// NumericalError when H is column-rank deficient (unobservable).
Eigen::MatrixXd WlsGain(const Eigen::MatrixXd& jacobian,
                        const std::vector<double>& sigmas);

// Estimates theta from z. bdd_passed is left true; run DetectBadData to set
// it against a threshold.
EstimationResult EstimateState(const GridNetwork& network,
                               const Eigen::MatrixXd& jacobian,
                               const std::vector<double>& sigmas,
                               const Eigen::VectorXd& z);

// True iff max_i |r_i| <= gamma.
bool DetectBadData(const EstimationResult& result, double gamma);

// Residual operator I - H M.
Eigen::MatrixXd ResidualOperator(const Eigen::MatrixXd& jacobian,
                                 const Eigen::MatrixXd& gain);

// (I - HM) Sigma (I - HM)'.
Eigen::MatrixXd ResidualCovariance(const Eigen::MatrixXd& jacobian,
                                   const Eigen::MatrixXd& gain,
                                   const std::vector<double>& sigmas);

// 3 * max_i sqrt(cov(r)_ii).
double DefaultThreshold(const Eigen::MatrixXd& jacobian,
                        const Eigen::MatrixXd& gain,
                        const std::vector<double>& sigmas);

// M padded to n rows, with a zero row at the reference bus.
Eigen::MatrixXd PaddedGain(const GridNetwork& network,
                           const Eigen::MatrixXd& gain);

// Estimated flow from bus i to bus j: (M_i - M_j)' z * base / X_ij.
double EstimatedLineFlow(const GridNetwork& network,
                         const Eigen::MatrixXd& gain, int i, int j,
                         const Eigen::VectorXd& z);

// Estimated flow on every line in stored orientation.
Eigen::VectorXd EstimatedLineFlows(const GridNetwork& network,
                                   const Eigen::MatrixXd& gain,
                                   const Eigen::VectorXd& z);

// Noise-free measurements H theta for a full (n-entry) angle vector.
Eigen::VectorXd MeasurementsFromAngles(const GridNetwork& network,
                                       const Eigen::MatrixXd& jacobian,
                                       const Eigen::VectorXd& theta);

struct ResidualStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // unbiased sample covariance
  int draws = 0;
};

// Monte-Carlo residual statistics under zero-mean Gaussian noise with the
// plan's deviations. Draws are split into fixed blocks with one RNG stream
// per block, so the result depends only on (seed, draws).
ResidualStats SampleResidualsSerial(const Eigen::MatrixXd& residual_operator,
                                    const std::vector<double>& sigmas,
                                    int draws, std::uint64_t seed);
ResidualStats SampleResidualsParallel(const Eigen::MatrixXd& residual_operator,
                                      const std::vector<double>& sigmas,
                                      int draws, std::uint64_t seed);

}  // namespace gridsec

#endif  // GRIDSEC_ESTIMATION_H_
