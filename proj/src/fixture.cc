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

#include "gridsec/fixture.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "gridsec/error.h"

namespace gridsec {
namespace {

std::string Item(const std::string& section, size_t i) {
  return section + "[" + std::to_string(i) + "]";
}

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const YAML::Node Require(const YAML::Node& node, const std::string& key,
                         const std::string& path) {
  const YAML::Node child = node[key];
  if (!child) throw InputError(Join(path, key) + ": required field is missing");
  return child;
}

template <typename T>
T As(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw InputError(path + ": has the wrong type");
  }
}

template <typename T>
T Get(const YAML::Node& node, const std::string& key, const std::string& path) {
  return As<T>(Require(node, key, path), Join(path, key));
}

template <typename T>
T GetOr(const YAML::Node& node, const std::string& key, const std::string& path,
        T fallback) {
  const YAML::Node child = node[key];
  if (!child || child.IsNull()) return fallback;
  return As<T>(child, Join(path, key));
}

YAML::Node Sequence(const YAML::Node& root, const std::string& key) {
  const YAML::Node node = root[key];
  if (!node) throw InputError(key + ": required section is missing");
  if (!node.IsSequence()) throw InputError(key + ": must be a list");
  return node;
}

GridNetwork ParseNetwork(const YAML::Node& root) {
  GridNetwork net;
  if (!root["schema_version"]) {
    throw InputError("schema_version: required field is missing");
  }
  const int version = As<int>(root["schema_version"], "schema_version");
  if (version != kFixtureSchemaVersion) {
    throw InputError("schema_version: unsupported version " +
                     std::to_string(version));
  }
  net.base_mva = GetOr<double>(root, "base_mva", "", 100.0);
  if (!(net.base_mva > 0.0)) throw InputError("base_mva: must be positive");

  const YAML::Node buses = Sequence(root, "buses");
  std::vector<int> ids;
  for (size_t i = 0; i < buses.size(); ++i) {
    ids.push_back(As<int>(buses[i], Item("buses", i)));
  }
  for (size_t i = 0; i < ids.size(); ++i) {
    if (std::find(ids.begin(), ids.begin() + i, ids[i]) != ids.begin() + i) {
      throw InputError(Item("buses", i) + ": duplicate bus id " +
                       std::to_string(ids[i]));
    }
    if (ids[i] < 1 || ids[i] > static_cast<int>(ids.size())) {
      throw InputError(Item("buses", i) + ": bus ids must be 1.." +
                       std::to_string(ids.size()));
    }
  }
  net.num_buses = static_cast<int>(ids.size());
  net.reference_bus = Get<int>(root, "reference_bus", "");

  const YAML::Node lines = Sequence(root, "lines");
  for (size_t k = 0; k < lines.size(); ++k) {
    const std::string p = Item("lines", k);
    Line l;
    l.from = Get<int>(lines[k], "from", p);
    l.to = Get<int>(lines[k], "to", p);
    l.name = GetOr<std::string>(lines[k], "name", p,
                                "L" + std::to_string(l.from) +
                                    std::to_string(l.to));
    l.reactance = Get<double>(lines[k], "x", p);
    l.limit_mw = Get<double>(lines[k], "limit", p);
    for (size_t j = 0; j < net.lines.size(); ++j) {
      const Line& o = net.lines[j];
      if (o.name == l.name) {
        throw InputError(p + ".name: duplicate line name '" + l.name + "'");
      }
      if ((o.from == l.from && o.to == l.to) ||
          (o.from == l.to && o.to == l.from)) {
        throw InputError(p + ": duplicates " + Item("lines", j));
      }
    }
    net.lines.push_back(l);
  }

  if (root["generators"]) {
    const YAML::Node gens = Sequence(root, "generators");
    for (size_t g = 0; g < gens.size(); ++g) {
      const std::string p = Item("generators", g);
      Generator gen;
      gen.name = GetOr<std::string>(gens[g], "name", p, "G" + std::to_string(g + 1));
      gen.bus = Get<int>(gens[g], "bus", p);
      gen.cost = Get<double>(gens[g], "cost", p);
      gen.rt_cost = GetOr<double>(gens[g], "rt_cost", p, gen.cost);
      gen.pmin = GetOr<double>(gens[g], "pmin", p, 0.0);
      gen.pmax = Get<double>(gens[g], "pmax", p);
      gen.qualified = GetOr<bool>(gens[g], "qualified", p, true);
      gen.delta_min = GetOr<double>(gens[g], "delta_min", p, -0.1);
      gen.delta_max = GetOr<double>(gens[g], "delta_max", p, 0.1);
      net.generators.push_back(gen);
    }
  }
  if (root["loads"]) {
    const YAML::Node loads = Sequence(root, "loads");
    for (size_t d = 0; d < loads.size(); ++d) {
      const std::string p = Item("loads", d);
      Load load;
      load.bus = Get<int>(loads[d], "bus", p);
      load.demand = Get<double>(loads[d], "demand", p);
      load.dispatchable = GetOr<bool>(loads[d], "dispatchable", p, false);
      load.delta_min = GetOr<double>(loads[d], "delta_min", p, 0.0);
      load.delta_max = GetOr<double>(loads[d], "delta_max", p, 0.0);
      net.loads.push_back(load);
    }
  }
  net.Validate();
  return net;
}

MeasurementPlan ParsePlan(const YAML::Node& root, const GridNetwork& net) {
  MeasurementPlan plan;
  if (!root["measurements"]) return plan;
  const YAML::Node items = Sequence(root, "measurements");
  for (size_t i = 0; i < items.size(); ++i) {
    const std::string p = Item("measurements", i);
    const std::string kind = Get<std::string>(items[i], "kind", p);
    Measurement m;
    if (kind == "flow") {
      m = Measurement::Flow(Get<int>(items[i], "from", p),
                            Get<int>(items[i], "to", p));
    } else if (kind == "injection") {
      m = Measurement::Injection(Get<int>(items[i], "bus", p));
    } else {
      throw InputError(p + ".kind: expected 'flow' or 'injection', got '" +
                       kind + "'");
    }
    m.sigma = GetOr<double>(items[i], "sigma", p, 1.0);
    m.secure = GetOr<bool>(items[i], "secure", p, false);
    plan.items.push_back(m);
  }
  plan.Validate(net);
  return plan;
}

std::vector<int> IndexList(const YAML::Node& node, const std::string& path,
                           int m) {
  if (!node.IsSequence()) throw InputError(path + ": must be a list");
  std::vector<int> out;
  for (size_t i = 0; i < node.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const int k = As<int>(node[i], p);
    if (k < 1 || k > m) {
      throw InputError(p + ": measurement index must be in 1.." +
                       std::to_string(m));
    }
    if (std::find(out.begin(), out.end(), k - 1) != out.end()) {
      throw InputError(p + ": duplicate measurement index");
    }
    out.push_back(k - 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ScenarioSettings ParseScenario(const YAML::Node& root, const GridNetwork& net,
                               const MeasurementPlan& plan) {
  ScenarioSettings s;
  const int m = plan.size();
  s.xi.assign(m, 5.0);
  const YAML::Node sc = root["scenario"];
  if (!sc) return s;
  if (!sc.IsMap()) throw InputError("scenario: must be a mapping");
  const std::string p = "scenario";

  if (sc["target_line"]) {
    const YAML::Node t = sc["target_line"];
    if (!t.IsSequence() || t.size() != 2) {
      throw InputError("scenario.target_line: expected [from, to]");
    }
    s.target_from = As<int>(t[0], "scenario.target_line[0]");
    s.target_to = As<int>(t[1], "scenario.target_line[1]");
    if (!net.FindLine(s.target_from, s.target_to)) {
      throw InputError("scenario.target_line: no line between bus " +
                       std::to_string(s.target_from) + " and bus " +
                       std::to_string(s.target_to));
    }
  }
  if (sc["direction"]) {
    try {
      s.direction = ParseDirection(As<std::string>(sc["direction"], p + ".direction"));
    } catch (const InputError& e) {
      throw InputError(std::string("scenario.") + e.what());
    }
  }
  if (const YAML::Node xi = sc["xi"]) {
    if (xi.IsSequence()) {
      if (static_cast<int>(xi.size()) != m) {
        throw InputError("scenario.xi: expected " + std::to_string(m) +
                         " entries, got " + std::to_string(xi.size()));
      }
      for (int k = 0; k < m; ++k) {
        s.xi[k] = As<double>(xi[k], "scenario.xi[" + std::to_string(k) + "]");
      }
    } else {
      s.xi.assign(m, As<double>(xi, "scenario.xi"));
    }
    for (int k = 0; k < m; ++k) {
      if (s.xi[k] < 0.0) throw InputError("scenario.xi: entries must be >= 0");
    }
  }
  s.z_max = GetOr<double>(sc, "z_max", p, s.z_max);
  if (s.z_max < 0.0) throw InputError("scenario.z_max: must be >= 0");
  if (sc["attack_set"]) {
    s.attack_set = IndexList(sc["attack_set"], "scenario.attack_set", m);
  }
  const std::vector<int> secure = plan.SecureSet();
  if (sc["insecure"]) {
    s.insecure = IndexList(sc["insecure"], "scenario.insecure", m);
    for (int k : s.insecure) {
      if (std::find(secure.begin(), secure.end(), k) != secure.end()) {
        throw InputError("scenario.insecure: measurement " +
                         std::to_string(k + 1) + " is flagged secure");
      }
    }
  }
  s.n_attack = GetOr<int>(sc, "n_attack", p, s.n_attack);
  s.n_defend = GetOr<int>(sc, "n_defend", p, s.n_defend);
  s.tol_cl = GetOr<double>(sc, "tol_cl", p, s.tol_cl);
  if (s.tol_cl < 0.0) throw InputError("scenario.tol_cl: must be >= 0");
  if (sc["gamma"] && !sc["gamma"].IsNull()) {
    s.gamma = As<double>(sc["gamma"], "scenario.gamma");
    if (!(*s.gamma > 0.0)) throw InputError("scenario.gamma: must be positive");
  }
  if (const YAML::Node noise = sc["noise"]) {
    s.noise = GetOr<bool>(noise, "enabled", "scenario.noise", false);
    s.seed = GetOr<std::uint64_t>(noise, "seed", "scenario.noise", s.seed);
    s.mc_draws = GetOr<int>(noise, "draws", "scenario.noise", s.mc_draws);
    if (s.mc_draws < 2) throw InputError("scenario.noise.draws: must be >= 2");
  }
  if (const YAML::Node trade = sc["trade"]) {
    s.trade_buy = Get<int>(trade, "buy", "scenario.trade");
    s.trade_sell = Get<int>(trade, "sell", "scenario.trade");
    s.trade_mw = Get<double>(trade, "quantity", "scenario.trade");
    if (!net.HasBus(s.trade_buy)) throw InputError("scenario.trade.buy: unknown bus");
    if (!net.HasBus(s.trade_sell)) {
      throw InputError("scenario.trade.sell: unknown bus");
    }
  }
  return s;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open fixture");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

YAML::Node ParseYaml(const std::string& text, const std::string& source) {
  try {
    YAML::Node root = YAML::Load(text);
    if (!root.IsMap()) throw InputError(source + ": top level must be a mapping");
    return root;
  } catch (const YAML::Exception& e) {
    throw InputError(source + ": " + e.what());
  }
}

}  // namespace

Fixture ParseFixture(const std::string& text, const std::string& source,
                     const std::string& base_dir) {
  YAML::Node root = ParseYaml(text, source);
  if (root["schema_version"] &&
      As<int>(root["schema_version"], "schema_version") != kFixtureSchemaVersion) {
    throw InputError(source + ": schema_version: unsupported version " +
                     root["schema_version"].as<std::string>());
  }
  if (!root["lines"]) {
    const YAML::Node sc = root["scenario"];
    if (!sc || !sc["network"]) {
      throw InputError(source +
                       ": lines: required section is missing (or set "
                       "scenario.network)");
    }
    const std::filesystem::path net_path =
        std::filesystem::path(base_dir) /
        As<std::string>(sc["network"], "scenario.network");
    YAML::Node base = ParseYaml(ReadFile(net_path.string()), net_path.string());
    if (!base["lines"]) {
      throw InputError(net_path.string() + ": lines: required section is missing");
    }
    YAML::Node merged = base["scenario"] ? YAML::Clone(base["scenario"])
                                         : YAML::Node(YAML::NodeType::Map);
    for (const auto& kv : sc) {
      const std::string key = kv.first.as<std::string>();
      if (key != "network") merged[key] = kv.second;
    }
    base["scenario"] = merged;
    root = base;
  }
  Fixture f;
  f.source = source;
  try {
    f.network = ParseNetwork(root);
    f.plan = ParsePlan(root, f.network);
    f.scenario = ParseScenario(root, f.network, f.plan);
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
  return f;
}

Fixture LoadFixture(const std::string& path) {
  const std::string dir =
      std::filesystem::path(path).parent_path().string();
  return ParseFixture(ReadFile(path), path, dir.empty() ? "." : dir);
}

}  // namespace gridsec
