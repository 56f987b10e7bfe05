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

#include "gridsec/scenario.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "gridsec/error.h"

namespace gridsec {

std::string_view ToString(Stage stage) {
  switch (stage) {
    case Stage::kGsf: return "gsf";
    case Stage::kEstimate: return "estimate";
    case Stage::kAttack: return "attack";
    case Stage::kDcopf: return "dcopf";
    case Stage::kExpost: return "expost";
    case Stage::kGame: return "game";
  }
  return "unknown";
}

Stage ParseStage(std::string_view name) {
  for (Stage s : {Stage::kGsf, Stage::kEstimate, Stage::kAttack, Stage::kDcopf,
                  Stage::kExpost, Stage::kGame}) {
    if (ToString(s) == name) return s;
  }
  throw InputError("unknown stage '" + std::string(name) + "'");
}

std::vector<Stage> StageWithPrerequisites(Stage stage) {
  switch (stage) {
    case Stage::kGsf: return {Stage::kGsf};
    case Stage::kDcopf: return {Stage::kGsf, Stage::kDcopf};
    case Stage::kAttack: return {Stage::kAttack};
    case Stage::kEstimate:
      return {Stage::kDcopf, Stage::kAttack, Stage::kEstimate};
    case Stage::kExpost:
      return {Stage::kGsf, Stage::kDcopf, Stage::kAttack, Stage::kEstimate,
              Stage::kExpost};
    case Stage::kGame: return {Stage::kAttack, Stage::kGame};
  }
  return {stage};
}

namespace {

Json Vec(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json Mat(const Eigen::MatrixXd& a) {
  Json out = Json::array();
  for (int i = 0; i < a.rows(); ++i) out.push_back(Vec(a.row(i).transpose()));
  return out;
}

Json OneBased(const std::vector<int>& idx) {
  Json out = Json::array();
  for (int k : idx) out.push_back(k + 1);
  return out;
}

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string LineLabel(const Line& l) {
  return l.name;
}

Json MarketRecord(const GridNetwork& net, const MarketOutcome& o) {
  Json r;
  r["kind"] = std::string(ToString(o.kind));
  Json gens = Json::array();
  for (size_t g = 0; g < net.generators.size(); ++g) {
    gens.push_back({{"name", net.generators[g].name},
                    {"bus", net.generators[g].bus},
                    {"mw", o.dispatch(g)}});
  }
  r["dispatch"] = gens;
  if (o.kind == MarketKind::kRealTime) r["load_delta"] = Vec(o.load_delta);
  r["lambda"] = o.lambda;
  r["mu"] = Vec(o.mu);
  r["lmp"] = Vec(o.lmp);
  r["congestion_component"] = Vec(o.congestion);
  Json cl = Json::array();
  for (int k : o.congested) cl.push_back(net.lines[k].name);
  r["congested"] = cl;
  r["flows"] = Vec(o.flows);
  r["cost"] = o.cost;
  return r;
}

}  // namespace

Pipeline::Pipeline(Fixture fixture, std::optional<std::uint64_t> seed)
    : fixture_(std::move(fixture)),
      seed_(seed.value_or(fixture_.scenario.seed)) {}

const GsfMatrix& Pipeline::Gsf() {
  if (!gsf_) gsf_ = ComputeGsf(fixture_.network);
  return *gsf_;
}

const MarketOutcome& Pipeline::DayAhead() {
  if (!day_ahead_) day_ahead_ = SolveDayAhead(fixture_.network, Gsf());
  return *day_ahead_;
}

const PowerFlowResult& Pipeline::ActualState() {
  if (!actual_) {
    const GridNetwork& net = fixture_.network;
    Eigen::VectorXd inj = -net.DemandByBus();
    const MarketOutcome& da = DayAhead();
    for (size_t g = 0; g < net.generators.size(); ++g) {
      inj(net.generators[g].bus - 1) += da.dispatch(g);
    }
    actual_ = DcPowerFlow(net, std::span<const double>(inj.data(), inj.size()));
  }
  return *actual_;
}

const Eigen::MatrixXd& Pipeline::Jacobian() {
  if (!jacobian_) {
    if (fixture_.plan.size() == 0) {
      throw InputError(fixture_.source + ": measurements: section is required");
    }
    jacobian_ = BuildJacobian(fixture_.network, fixture_.plan);
  }
  return *jacobian_;
}

const Eigen::MatrixXd& Pipeline::Gain() {
  if (!gain_) gain_ = WlsGain(Jacobian(), fixture_.plan.Sigmas());
  return *gain_;
}

const Eigen::MatrixXd& Pipeline::Residual() {
  if (!residual_) residual_ = ResidualOperator(Jacobian(), Gain());
  return *residual_;
}

double Pipeline::Gamma() {
  if (!gamma_) {
    gamma_ = fixture_.scenario.gamma.value_or(
        DefaultThreshold(Jacobian(), Gain(), fixture_.plan.Sigmas()));
  }
  return *gamma_;
}

const Eigen::VectorXd& Pipeline::CleanMeasurements() {
  if (!z0_) {
    Eigen::VectorXd z =
        MeasurementsFromAngles(fixture_.network, Jacobian(), ActualState().theta);
    if (fixture_.scenario.noise) {
      std::mt19937_64 rng(seed_);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int k = 0; k < z.size(); ++k) {
        z(k) += fixture_.plan.items[k].sigma * normal(rng);
      }
    }
    z0_ = z;
  }
  return *z0_;
}

void Pipeline::RequireTarget() {
  if (fixture_.scenario.target_from == 0) {
    throw InputError(fixture_.source +
                     ": scenario.target_line: required for the attack stage");
  }
}

const FlowSensitivity& Pipeline::Sensitivity() {
  if (!sensitivity_) {
    RequireTarget();
    sensitivity_ = ComputeSensitivity(fixture_.network, Gain(),
                                      fixture_.scenario.target_from,
                                      fixture_.scenario.target_to);
  }
  return *sensitivity_;
}

const AttackVector& Pipeline::Attack() {
  if (!attack_) {
    const ScenarioSettings& sc = fixture_.scenario;
    AttackSettings settings;
    settings.direction = sc.direction;
    settings.xi = sc.xi;
    settings.secure = fixture_.plan.SecureSet();
    settings.attackable = sc.attack_set;
    settings.z_max = sc.z_max;
    attack_ = SynthesizeAttack(Sensitivity(), Residual(), settings);
  }
  return *attack_;
}

const EstimationResult& Pipeline::CleanEstimate() {
  if (!clean_) {
    EstimationResult r = EstimateState(fixture_.network, Jacobian(),
                                       fixture_.plan.Sigmas(),
                                       CleanMeasurements());
    r.bdd_passed = DetectBadData(r, Gamma());
    clean_ = std::move(r);
  }
  return *clean_;
}

const EstimationResult& Pipeline::AttackedEstimate() {
  if (!attacked_) {
    const Eigen::VectorXd z = CleanMeasurements() + Attack().za;
    EstimationResult r = EstimateState(fixture_.network, Jacobian(),
                                       fixture_.plan.Sigmas(), z);
    r.bdd_passed = DetectBadData(r, Gamma());
    attacked_ = std::move(r);
  }
  return *attacked_;
}

const MarketOutcome& Pipeline::RealTimeClean() {
  if (!rt_clean_) {
    const Eigen::VectorXd flows =
        EstimatedLineFlows(fixture_.network, Gain(), CleanMeasurements());
    rt_clean_ = SolveRealTime(fixture_.network, Gsf(), flows, DayAhead(),
                              {fixture_.scenario.tol_cl});
  }
  return *rt_clean_;
}

const MarketOutcome& Pipeline::RealTimeAttacked() {
  if (!rt_attacked_) {
    const Eigen::VectorXd flows = EstimatedLineFlows(
        fixture_.network, Gain(), CleanMeasurements() + Attack().za);
    rt_attacked_ = SolveRealTime(fixture_.network, Gsf(), flows, DayAhead(),
                                 {fixture_.scenario.tol_cl});
  }
  return *rt_attacked_;
}

const PayoffMatrix& Pipeline::Payoff() {
  if (!payoff_) {
    const ScenarioSettings& sc = fixture_.scenario;
    if (sc.insecure.empty()) {
      throw InputError(fixture_.source +
                       ": scenario.insecure: required for the game stage");
    }
    GameSpec spec{sc.insecure, sc.n_attack, sc.n_defend};
    AttackContext ctx;
    ctx.sensitivity = Sensitivity();
    ctx.residual_operator = Residual();
    ctx.base.direction = sc.direction;
    ctx.base.xi = sc.xi;
    ctx.base.secure = fixture_.plan.SecureSet();
    ctx.base.z_max = sc.z_max;
    payoff_ = BuildPayoffMatrix(spec, ctx);
  }
  return *payoff_;
}

const MixedSolution& Pipeline::Mixed() {
  if (!mixed_) mixed_ = SolveMixed(Payoff().a);
  return *mixed_;
}

std::optional<double> Pipeline::Profit() {
  const ScenarioSettings& sc = fixture_.scenario;
  if (sc.trade_buy == 0) return std::nullopt;
  return VirtualTradeProfit(DayAhead(), RealTimeAttacked(), sc.trade_buy,
                            sc.trade_sell, sc.trade_mw);
}

void Pipeline::Record(Stage stage, Report& report) {
  const GridNetwork& net = fixture_.network;
  const int n = net.num_buses;
  Json r;
  switch (stage) {
    case Stage::kGsf: {
      const GsfMatrix& gsf = Gsf();
      Json lines = Json::array();
      for (const Line& l : net.lines) lines.push_back(LineLabel(l));
      r["reference_bus"] = net.reference_bus;
      r["lines"] = lines;
      r["factors"] = Mat(gsf.factors);
      std::string csv = "line";
      for (int b = 1; b <= n; ++b) csv += ",B" + std::to_string(b);
      csv += "\n";
      for (int k = 0; k < net.num_lines(); ++k) {
        csv += LineLabel(net.lines[k]);
        for (int b = 0; b < n; ++b) csv += "," + Num(gsf.factors(k, b));
        csv += "\n";
      }
      report.tables.emplace_back("gsf.csv", csv);
      break;
    }
    case Stage::kDcopf:
      r = MarketRecord(net, DayAhead());
      break;
    case Stage::kAttack: {
      const FlowSensitivity& s = Sensitivity();
      const AttackVector& a = Attack();
      r["target_line"] = {s.from, s.to};
      r["direction"] = std::string(ToString(fixture_.scenario.direction));
      r["q"] = Vec(s.q);
      r["raising"] = OneBased(s.raising);
      r["lowering"] = OneBased(s.lowering);
      r["xi"] = a.xi;
      r["z_max"] = fixture_.scenario.z_max;
      r["attacked"] = OneBased(a.attacked);
      r["za"] = Vec(a.za);
      r["objective"] = a.objective;
      r["flow_change"] = a.flow_change;
      break;
    }
    case Stage::kEstimate: {
      const EstimationResult& c = CleanEstimate();
      const EstimationResult& a = AttackedEstimate();
      const Eigen::VectorXd z0 = CleanMeasurements();
      const Eigen::VectorXd za = z0 + Attack().za;
      const Eigen::VectorXd f_clean = EstimatedLineFlows(net, Gain(), z0);
      const Eigen::VectorXd f_att = EstimatedLineFlows(net, Gain(), za);
      const Eigen::VectorXd& actual = ActualState().flows;
      Json labels = Json::array();
      for (const Measurement& m : fixture_.plan.items) labels.push_back(m.Describe());
      r["measurements"] = labels;
      r["noise"] = fixture_.scenario.noise;
      r["seed"] = seed_;
      r["gamma"] = Gamma();
      r["z_clean"] = Vec(z0);
      r["z_attacked"] = Vec(za);
      r["theta_actual"] = Vec(ActualState().theta);
      r["theta_clean"] = Vec(c.theta);
      r["theta_attacked"] = Vec(a.theta);
      r["residual_clean"] = Vec(c.residual);
      r["residual_attacked"] = Vec(a.residual);
      r["bdd_passed_clean"] = c.bdd_passed;
      r["bdd_passed_attacked"] = a.bdd_passed;
      r["flows_actual"] = Vec(actual);
      r["flows_estimated_clean"] = Vec(f_clean);
      r["flows_estimated_attacked"] = Vec(f_att);
      const ResidualStats stats = SampleResidualsParallel(
          Residual(), fixture_.plan.Sigmas(), fixture_.scenario.mc_draws, seed_);
      const Eigen::MatrixXd analytic =
          ResidualCovariance(Jacobian(), Gain(), fixture_.plan.Sigmas());
      r["monte_carlo"] = {
          {"draws", stats.draws},
          {"max_abs_mean", stats.mean.cwiseAbs().maxCoeff()},
          {"covariance_rel_error",
           (stats.covariance - analytic).norm() / analytic.norm()}};
      std::string csv =
          "line,actual_mw,estimated_clean_mw,estimated_attacked_mw,delta_mw\n";
      for (int k = 0; k < net.num_lines(); ++k) {
        csv += LineLabel(net.lines[k]) + "," + Num(actual(k)) + "," +
               Num(f_clean(k)) + "," + Num(f_att(k)) + "," +
               Num(f_att(k) - actual(k)) + "\n";
      }
      report.tables.emplace_back("flow_deltas.csv", csv);
      break;
    }
    case Stage::kExpost: {
      const MarketOutcome& da = DayAhead();
      const MarketOutcome& clean = RealTimeClean();
      const MarketOutcome& att = RealTimeAttacked();
      r["without_attack"] = MarketRecord(net, clean);
      r["with_attack"] = MarketRecord(net, att);
      const ScenarioSettings& sc = fixture_.scenario;
      if (const std::optional<double> p = Profit()) {
        r["trade"] = {{"buy_bus", sc.trade_buy},
                      {"sell_bus", sc.trade_sell},
                      {"quantity_mw", sc.trade_mw},
                      {"day_ahead_spread",
                       CongestionPrice(da, sc.trade_buy, sc.trade_sell)},
                      {"real_time_spread",
                       CongestionPrice(att, sc.trade_buy, sc.trade_sell)},
                      {"profit", *p}};
      }
      std::string csv = "bus,day_ahead,real_time_no_attack,real_time_attacked\n";
      for (int b = 0; b < n; ++b) {
        csv += std::to_string(b + 1) + "," + Num(da.lmp(b)) + "," +
               Num(clean.lmp(b)) + "," + Num(att.lmp(b)) + "\n";
      }
      report.tables.emplace_back("lmp_comparison.csv", csv);
      break;
    }
    case Stage::kGame: {
      const PayoffMatrix& p = Payoff();
      const MixedSolution& mix = Mixed();
      Json rows = Json::array();
      Json cols = Json::array();
      for (const auto& s : p.defender_sets) rows.push_back(PayoffMatrix::Label(s));
      for (const auto& t : p.attacker_sets) cols.push_back(PayoffMatrix::Label(t));
      r["defender_strategies"] = rows;
      r["attacker_strategies"] = cols;
      r["payoff"] = Mat(p.a);
      if (mix.saddle) {
        r["pure_saddle"] = {mix.saddle->first + 1, mix.saddle->second + 1};
      } else {
        r["pure_saddle"] = nullptr;
      }
      r["min_row_max"] = mix.levels.min_row_max;
      r["max_col_min"] = mix.levels.max_col_min;
      r["defender_mixed"] = Vec(mix.y);
      r["attacker_mixed"] = Vec(mix.w);
      r["value"] = mix.value;
      r["defender_lp_value"] = mix.defender_value;
      r["attacker_lp_value"] = mix.attacker_value;
      r["shift"] = mix.shift;

      std::string csv = "defender\\attacker";
      for (const auto& t : p.attacker_sets) csv += "," + PayoffMatrix::Label(t);
      csv += "\n";
      for (int i = 0; i < p.a.rows(); ++i) {
        csv += PayoffMatrix::Label(p.defender_sets[i]);
        for (int j = 0; j < p.a.cols(); ++j) csv += "," + Num(p.a(i, j));
        csv += "\n";
      }
      report.tables.emplace_back("payoff_matrix.csv", csv);
      std::string probs = "player,strategy,probability\n";
      for (int i = 0; i < mix.y.size(); ++i) {
        probs += "defender," + PayoffMatrix::Label(p.defender_sets[i]) + "," +
                 Num(mix.y(i)) + "\n";
      }
      for (int j = 0; j < mix.w.size(); ++j) {
        probs += "attacker," + PayoffMatrix::Label(p.attacker_sets[j]) + "," +
                 Num(mix.w(j)) + "\n";
      }
      report.tables.emplace_back("strategy_probabilities.csv", probs);
      break;
    }
  }
  report.doc[std::string(ToString(stage))] = r;
}

Report Pipeline::RunStages(const std::vector<Stage>& stages) {
  Report report;
  report.doc["fixture"] = fixture_.source;
  report.doc["seed"] = seed_;
  for (Stage s : stages) {
    try {
      Record(s, report);
    } catch (const InputError& e) {
      throw InputError("stage " + std::string(ToString(s)) + ": " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError("stage " + std::string(ToString(s)) + ": " +
                           e.what());
    }
  }
  return report;
}

Report Pipeline::RunStage(Stage stage) { return RunStages({stage}); }

Report Pipeline::RunScenario() {
  return RunStages({Stage::kGsf, Stage::kDcopf, Stage::kAttack,
                    Stage::kEstimate, Stage::kExpost, Stage::kGame});
}

std::string SerializeReport(const Report& report) {
  return report.doc.dump(2) + "\n";
}

void WriteReport(const Report& report, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw InputError(out_dir + ": cannot create output directory");
  auto write = [&](const std::string& name, const std::string& text) {
    const std::filesystem::path path = std::filesystem::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw InputError(path.string() + ": write failed");
  };
  write("report.json", SerializeReport(report));
  for (const auto& [name, text] : report.tables) write(name, text);
}

}  // namespace gridsec
