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

#include "gridsec/estimation.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "gridsec/error.h"

namespace gridsec {

std::string Measurement::Describe() const {
  if (kind == MeasurementKind::kInjection) {
    return "P" + std::to_string(from);
  }
  return "P" + std::to_string(from) + "-" + std::to_string(to);
}

std::vector<double> MeasurementPlan::Sigmas() const {
  std::vector<double> s;
  s.reserve(items.size());
  for (const Measurement& m : items) s.push_back(m.sigma);
  return s;
}

std::vector<int> MeasurementPlan::SecureSet() const {
  std::vector<int> out;
  for (int k = 0; k < size(); ++k) {
    if (items[k].secure) out.push_back(k);
  }
  return out;
}

void MeasurementPlan::Validate(const GridNetwork& network) const {
  if (size() < network.num_buses - 1) {
    throw InputError("measurements: " + std::to_string(size()) +
                     " measurements cannot observe " +
                     std::to_string(network.num_buses - 1) + " angles");
  }
  for (int k = 0; k < size(); ++k) {
    const Measurement& m = items[k];
    const std::string where = "measurements[" + std::to_string(k) + "]";
    if (!(m.sigma > 0.0) || !std::isfinite(m.sigma)) {
      throw InputError(where + ".sigma: must be positive");
    }
    if (!network.HasBus(m.from)) {
      throw InputError(where + ": unknown bus " + std::to_string(m.from));
    }
    if (m.kind == MeasurementKind::kLineFlow && !network.FindLine(m.from, m.to)) {
      throw InputError(where + ": no line between bus " +
                       std::to_string(m.from) + " and bus " +
                       std::to_string(m.to));
    }
  }
}

StateIndex::StateIndex(const GridNetwork& network)
    : columns_(network.num_buses, -1) {
  for (int id = 1; id <= network.num_buses; ++id) {
    if (id != network.reference_bus) columns_[id - 1] = size_++;
  }
}

Eigen::MatrixXd BuildJacobian(const GridNetwork& network,
                              const MeasurementPlan& plan) {
  plan.Validate(network);
  const StateIndex index(network);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(plan.size(), index.size());
  auto add_flow = [&](int row, int i, int j) {
    const LineRef ref = network.RequireLine(i, j);
    const double y = network.base_mva / network.lines[ref.index].reactance;
    if (index.column(i) >= 0) h(row, index.column(i)) += y;
    if (index.column(j) >= 0) h(row, index.column(j)) -= y;
  };
  for (int k = 0; k < plan.size(); ++k) {
    const Measurement& m = plan.items[k];
    if (m.kind == MeasurementKind::kLineFlow) {
      add_flow(k, m.from, m.to);
      continue;
    }
    for (const Line& l : network.lines) {
      if (l.from == m.from) add_flow(k, l.from, l.to);
      if (l.to == m.from) add_flow(k, l.to, l.from);
    }
  }
  return h;
}

Eigen::MatrixXd WlsGain(const Eigen::MatrixXd& jacobian,
                        const std::vector<double>& sigmas) {
  const int m = static_cast<int>(jacobian.rows());
  if (static_cast<int>(sigmas.size()) != m) {
    throw InputError("estimation: sigma count does not match measurements");
  }
  Eigen::VectorXd w(m);
  for (int k = 0; k < m; ++k) w(k) = 1.0 / (sigmas[k] * sigmas[k]);
  const Eigen::MatrixXd ht_w = jacobian.transpose() * w.asDiagonal();
  const Eigen::MatrixXd normal = ht_w * jacobian;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  if (lu.rank() < jacobian.cols()) {
    throw NumericalError("estimation: Jacobian has rank " +
                         std::to_string(lu.rank()) + " < " +
                         std::to_string(jacobian.cols()) +
                         "; the state is unobservable");
  }
  return lu.solve(ht_w);
}

EstimationResult EstimateState(const GridNetwork& network,
                               const Eigen::MatrixXd& jacobian,
                               const std::vector<double>& sigmas,
                               const Eigen::VectorXd& z) {
  if (z.size() != jacobian.rows()) {
    throw InputError("estimation: measurement vector has wrong length");
  }
  EstimationResult result;
  result.jacobian = jacobian;
  result.gain = WlsGain(jacobian, sigmas);
  const Eigen::VectorXd reduced = result.gain * z;
  const StateIndex index(network);
  result.theta = Eigen::VectorXd::Zero(network.num_buses);
  for (int id = 1; id <= network.num_buses; ++id) {
    if (index.column(id) >= 0) result.theta(id - 1) = reduced(index.column(id));
  }
  result.residual = z - jacobian * reduced;
  return result;
}

bool DetectBadData(const EstimationResult& result, double gamma) {
  if (result.residual.size() == 0) return true;
  return result.residual.cwiseAbs().maxCoeff() <= gamma;
}

Eigen::MatrixXd ResidualOperator(const Eigen::MatrixXd& jacobian,
                                 const Eigen::MatrixXd& gain) {
  const auto m = jacobian.rows();
  return Eigen::MatrixXd::Identity(m, m) - jacobian * gain;
}

Eigen::MatrixXd ResidualCovariance(const Eigen::MatrixXd& jacobian,
                                   const Eigen::MatrixXd& gain,
                                   const std::vector<double>& sigmas) {
  const Eigen::MatrixXd s = ResidualOperator(jacobian, gain);
  Eigen::VectorXd var(sigmas.size());
  for (size_t k = 0; k < sigmas.size(); ++k) var(k) = sigmas[k] * sigmas[k];
  return s * var.asDiagonal() * s.transpose();
}

double DefaultThreshold(const Eigen::MatrixXd& jacobian,
                        const Eigen::MatrixXd& gain,
                        const std::vector<double>& sigmas) {
  const Eigen::MatrixXd cov = ResidualCovariance(jacobian, gain, sigmas);
  return 3.0 * std::sqrt(std::max(0.0, cov.diagonal().maxCoeff()));
}

Eigen::MatrixXd PaddedGain(const GridNetwork& network,
                           const Eigen::MatrixXd& gain) {
  const StateIndex index(network);
  if (gain.rows() != index.size()) {
    throw InputError("estimation: gain has wrong row count");
  }
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(network.num_buses, gain.cols());
  for (int id = 1; id <= network.num_buses; ++id) {
    if (index.column(id) >= 0) padded.row(id - 1) = gain.row(index.column(id));
  }
  return padded;
}

double EstimatedLineFlow(const GridNetwork& network,
                         const Eigen::MatrixXd& gain, int i, int j,
                         const Eigen::VectorXd& z) {
  const LineRef ref = network.RequireLine(i, j);
  const Eigen::MatrixXd padded = PaddedGain(network, gain);
  const double scale = network.base_mva / network.lines[ref.index].reactance;
  return scale * (padded.row(i - 1) - padded.row(j - 1)).dot(z);
}

Eigen::VectorXd EstimatedLineFlows(const GridNetwork& network,
                                   const Eigen::MatrixXd& gain,
                                   const Eigen::VectorXd& z) {
  const Eigen::MatrixXd padded = PaddedGain(network, gain);
  const Eigen::VectorXd theta = padded * z;
  Eigen::VectorXd flows(network.num_lines());
  for (int k = 0; k < network.num_lines(); ++k) {
    const Line& l = network.lines[k];
    flows(k) = network.base_mva * (theta(l.from - 1) - theta(l.to - 1)) /
               l.reactance;
  }
  return flows;
}

Eigen::VectorXd MeasurementsFromAngles(const GridNetwork& network,
                                       const Eigen::MatrixXd& jacobian,
                                       const Eigen::VectorXd& theta) {
  const StateIndex index(network);
  Eigen::VectorXd reduced(index.size());
  for (int id = 1; id <= network.num_buses; ++id) {
    if (index.column(id) >= 0) {
      reduced(index.column(id)) =
          theta(id - 1) - theta(network.reference_bus - 1);
    }
  }
  return jacobian * reduced;
}

namespace {

constexpr int kDrawsPerBlock = 256;

struct BlockSums {
  Eigen::VectorXd sum;
  Eigen::MatrixXd outer;
};

BlockSums SampleBlock(const Eigen::MatrixXd& op,
                      const std::vector<double>& sigmas, int block,
                      int count, std::uint64_t seed) {
  const auto m = op.rows();
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  BlockSums out{Eigen::VectorXd::Zero(m), Eigen::MatrixXd::Zero(m, m)};
  Eigen::VectorXd e(m);
  for (int d = 0; d < count; ++d) {
    for (Eigen::Index k = 0; k < m; ++k) e(k) = sigmas[k] * normal(rng);
    const Eigen::VectorXd r = op * e;
    out.sum += r;
    out.outer.noalias() += r * r.transpose();
  }
  return out;
}

ResidualStats Finish(const std::vector<BlockSums>& blocks, Eigen::Index m,
                     int draws) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(m);
  Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(m, m);
  for (const BlockSums& b : blocks) {
    sum += b.sum;
    outer += b.outer;
  }
  ResidualStats stats;
  stats.draws = draws;
  stats.mean = sum / draws;
  stats.covariance = (outer - draws * stats.mean * stats.mean.transpose()) /
                     std::max(1, draws - 1);
  return stats;
}

int BlockCount(int draws) { return (draws + kDrawsPerBlock - 1) / kDrawsPerBlock; }

int BlockSize(int block, int draws) {
  return std::min(kDrawsPerBlock, draws - block * kDrawsPerBlock);
}

}  // namespace

ResidualStats SampleResidualsSerial(const Eigen::MatrixXd& residual_operator,
                                    const std::vector<double>& sigmas,
                                    int draws, std::uint64_t seed) {
  if (draws <= 0) throw InputError("residual sampling: draws must be positive");
  const int blocks = BlockCount(draws);
  std::vector<BlockSums> partial;
  partial.reserve(blocks);
  for (int b = 0; b < blocks; ++b) {
    partial.push_back(
        SampleBlock(residual_operator, sigmas, b, BlockSize(b, draws), seed));
  }
  return Finish(partial, residual_operator.rows(), draws);
}

ResidualStats SampleResidualsParallel(const Eigen::MatrixXd& residual_operator,
                                      const std::vector<double>& sigmas,
                                      int draws, std::uint64_t seed) {
  if (draws <= 0) throw InputError("residual sampling: draws must be positive");
  const int blocks = BlockCount(draws);
  std::vector<BlockSums> partial(blocks);
#pragma omp parallel for schedule(static)
  for (int b = 0; b < blocks; ++b) {
    partial[b] =
        SampleBlock(residual_operator, sigmas, b, BlockSize(b, draws), seed);
  }
  return Finish(partial, residual_operator.rows(), draws);
}

}  // namespace gridsec
