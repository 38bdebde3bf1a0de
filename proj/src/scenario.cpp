#include "spreadalloc/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace spreadalloc {

namespace {

using nlohmann::json;

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ScenarioError(where + " must be an object");
  const std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items())
    if (!known.count(key)) throw ScenarioError("unknown key '" + key + "' in " + where);
}

double number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ScenarioError(where + "." + key + " is required");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ScenarioError(where + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ScenarioError(where + "." + key + " must be finite");
  return d;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

int integer(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_number_integer())
    throw ScenarioError(where + "." + key + " must be an integer");
  return obj.at(key).get<int>();
}

SpreadingNetwork parse_network(const json& j, const json& params) {
  allow_keys(j, "network", {"nodes", "edges"});
  const double r = number(params, "r", "params");
  if (!j.contains("nodes") || !j.at("nodes").is_array()) throw ScenarioError("network.nodes must be an array");
  std::vector<NodeParams> nodes;
  for (std::size_t i = 0; i < j.at("nodes").size(); ++i) {
    const auto& n = j.at("nodes")[i];
    const std::string where = "network.nodes[" + std::to_string(i) + "]";
    allow_keys(n, where, {"delta", "delta_lo", "delta_hi", "weight", "cost", "likelihood"});
    NodeParams p;
    p.delta = number_or(n, "delta", number_or(params, "delta", std::nan(""), "params"), where);
    if (std::isnan(p.delta)) throw ScenarioError(where + ".delta is required");
    p.delta_lo = number_or(n, "delta_lo", number_or(params, "delta_lo", p.delta, "params"), where);
    p.delta_hi = number_or(n, "delta_hi", number_or(params, "delta_hi", p.delta, "params"), where);
    p.weight = number_or(n, "weight", number_or(params, "node_weight", 1.0, "params"), where);
    p.cost = number(n, "cost", where);
    p.likelihood = number(n, "likelihood", where);
    nodes.push_back(p);
  }
  std::vector<Edge> edges;
  if (j.contains("edges")) {
    if (!j.at("edges").is_array()) throw ScenarioError("network.edges must be an array");
    for (std::size_t k = 0; k < j.at("edges").size(); ++k) {
      const auto& e = j.at("edges")[k];
      const std::string where = "network.edges[" + std::to_string(k) + "]";
      allow_keys(e, where, {"target", "source", "beta", "beta_lo", "beta_hi", "weight"});
      Edge edge;
      edge.target = integer(e, "target", where);
      edge.source = integer(e, "source", where);
      edge.params.beta = number(e, "beta", where);
      const double lo_default = std::min(number_or(params, "beta_lo", edge.params.beta, "params"),
                                         edge.params.beta);
      edge.params.beta_lo = number_or(e, "beta_lo", lo_default, where);
      edge.params.beta_hi = number_or(e, "beta_hi", edge.params.beta, where);
      edge.params.weight = number_or(e, "weight", number_or(params, "edge_weight", 1.0, "params"), where);
      edges.push_back(edge);
    }
  }
  return SpreadingNetwork(std::move(nodes), std::move(edges), r);
}

Landscape parse_landscape(const json& j) {
  allow_keys(j, "landscape", {"rows", "cols", "cells", "wind", "likelihood"});
  Landscape land;
  land.rows = integer(j, "rows", "landscape");
  land.cols = integer(j, "cols", "landscape");
  if (land.rows <= 0 || land.cols <= 0) throw ScenarioError("landscape grid must be nonempty");
  if (!j.contains("cells")) throw ScenarioError("landscape.cells is required");
  std::string codes;
  const auto& cells = j.at("cells");
  if (cells.is_string()) {
    codes = cells.get<std::string>();
  } else if (cells.is_array()) {
    for (const auto& row : cells) {
      if (!row.is_string()) throw ScenarioError("landscape.cells rows must be strings");
      codes += row.get<std::string>();
    }
  } else {
    throw ScenarioError("landscape.cells must be a string or an array of row strings");
  }
  for (char ch : codes) {
    if (ch == ' ') continue;
    try {
      land.cells.push_back(parse_cell(ch));
    } catch (const std::invalid_argument& err) {
      throw ScenarioError(std::string("landscape.cells: ") + err.what());
    }
  }
  if (land.cells.size() != static_cast<std::size_t>(land.size()))
    throw ScenarioError("landscape.cells has " + std::to_string(land.cells.size()) +
                        " codes, expected rows*cols = " + std::to_string(land.size()));
  if (j.contains("wind")) {
    const auto& w = j.at("wind");
    allow_keys(w, "landscape.wind", {"speed", "direction_deg"});
    land.wind.speed = number(w, "speed", "landscape.wind");
    land.wind.direction = number(w, "direction_deg", "landscape.wind") * std::numbers::pi / 180.0;
    if (land.wind.speed < 0.0) throw ScenarioError("landscape.wind.speed must be non-negative");
  }
  if (!j.contains("likelihood") || !j.at("likelihood").is_array())
    throw ScenarioError("landscape.likelihood must be an array");
  std::vector<double> lik;
  for (const auto& v : j.at("likelihood")) {
    if (v.is_array()) {
      for (const auto& x : v) {
        if (!x.is_number()) throw ScenarioError("landscape.likelihood entries must be numbers");
        lik.push_back(x.get<double>());
      }
    } else if (v.is_number()) {
      lik.push_back(v.get<double>());
    } else {
      throw ScenarioError("landscape.likelihood entries must be numbers");
    }
  }
  land.likelihood = Eigen::Map<const Vector>(lik.data(), static_cast<Eigen::Index>(lik.size()));
  try {
    land.validate();
  } catch (const std::invalid_argument& err) {
    throw ScenarioError(std::string("landscape: ") + err.what());
  }
  return land;
}

void parse_rates(const json& j, SpreadRateTable& t) {
  allow_keys(j, "params.rates", {"beta_base", "vegetation", "c1", "c2", "diagonal"});
  t.base = number_or(j, "beta_base", t.base, "params.rates");
  t.c1 = number_or(j, "c1", t.c1, "params.rates");
  t.c2 = number_or(j, "c2", t.c2, "params.rates");
  t.diagonal = number_or(j, "diagonal", t.diagonal, "params.rates");
  if (j.contains("vegetation")) {
    const auto& v = j.at("vegetation");
    allow_keys(v, "params.rates.vegetation", {"D", "G", "E", "C"});
    for (const char* code : {"D", "G", "E", "C"})
      if (v.contains(code))
        t.vegetation[static_cast<std::size_t>(parse_cell(code[0]))] =
            number(v, code, "params.rates.vegetation");
  }
}

SolveConfig parse_solve(const json& j) {
  allow_keys(j, "solve", {"problem", "model", "budget", "risk_bound", "reweighted", "tolerances"});
  SolveConfig s;
  const int problem = integer(j, "problem", "solve");
  if (problem != 1 && problem != 2) throw ScenarioError("solve.problem must be 1 or 2");
  s.problem = static_cast<ProblemKind>(problem);
  if (j.contains("model")) {
    if (!j.at("model").is_string()) throw ScenarioError("solve.model must be a string");
    const auto m = j.at("model").get<std::string>();
    if (m == "log") s.model = ResourceModel::Logarithmic;
    else if (m == "inverse") s.model = ResourceModel::Inverse;
    else throw ScenarioError("solve.model must be 'log' or 'inverse'");
  }
  if (j.contains("budget")) s.budget = number(j, "budget", "solve");
  if (j.contains("risk_bound")) s.risk_bound = number(j, "risk_bound", "solve");
  if (j.contains("reweighted")) {
    const auto& rw = j.at("reweighted");
    allow_keys(rw, "solve.reweighted", {"enabled", "max_iters", "epsilon", "count_bound"});
    if (rw.contains("enabled")) {
      if (!rw.at("enabled").is_boolean()) throw ScenarioError("solve.reweighted.enabled must be a boolean");
      s.reweighted.enabled = rw.at("enabled").get<bool>();
    }
    if (rw.contains("max_iters")) s.reweighted.max_iters = integer(rw, "max_iters", "solve.reweighted");
    s.reweighted.epsilon = number_or(rw, "epsilon", s.reweighted.epsilon, "solve.reweighted");
    s.reweighted.count_bound = number_or(rw, "count_bound", s.reweighted.count_bound, "solve.reweighted");
    if (s.reweighted.max_iters < 0) throw ScenarioError("solve.reweighted.max_iters must be >= 0");
    if (!(s.reweighted.epsilon > 0.0)) throw ScenarioError("solve.reweighted.epsilon must be positive");
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    allow_keys(t, "solve.tolerances", {"gap", "feasibility"});
    s.gap_tolerance = number_or(t, "gap", s.gap_tolerance, "solve.tolerances");
    s.feasibility_tolerance = number_or(t, "feasibility", s.feasibility_tolerance, "solve.tolerances");
    if (!(s.gap_tolerance > 0.0) || !(s.feasibility_tolerance > 0.0))
      throw ScenarioError("solve.tolerances must be positive");
  }

  if (s.problem == ProblemKind::MinRisk) {
    if (s.reweighted.enabled) {
      if (s.budget) throw ScenarioError("reweighted problem 1 uses solve.reweighted.count_bound, not budget");
      if (s.reweighted.count_bound < 0.0) throw ScenarioError("count_bound must be non-negative");
    } else {
      if (!s.budget) throw ScenarioError("problem 1 needs solve.budget");
      if (*s.budget < 0.0) throw ScenarioError("solve.budget must be non-negative");
    }
    if (s.risk_bound) throw ScenarioError("problem 1 does not take solve.risk_bound");
  } else {
    if (!s.risk_bound) throw ScenarioError("problem 2 needs solve.risk_bound");
    if (!(*s.risk_bound > 0.0)) throw ScenarioError("solve.risk_bound must be positive");
    if (s.budget) throw ScenarioError("problem 2 does not take solve.budget");
    if (s.reweighted.enabled && s.model != ResourceModel::Logarithmic)
      throw ScenarioError("the reweighted loop uses the log model");
  }
  if (s.problem == ProblemKind::MinRisk && s.reweighted.enabled && s.model != ResourceModel::Logarithmic)
    throw ScenarioError("the reweighted loop uses the log model");
  return s;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ScenarioError(std::string("invalid JSON: ") + err.what());
  }
  allow_keys(doc, "scenario", {"meta", "network", "landscape", "params", "solve"});

  std::string name;
  long long seed = 0;
  std::optional<Landscape> landscape;
  std::optional<SolveConfig> solve;
  if (doc.contains("meta")) {
    const auto& meta = doc.at("meta");
    allow_keys(meta, "meta", {"name", "seed", "description"});
    if (meta.contains("name")) {
      if (!meta.at("name").is_string()) throw ScenarioError("meta.name must be a string");
      name = meta.at("name").get<std::string>();
    }
    if (meta.contains("seed")) {
      if (!meta.at("seed").is_number_integer()) throw ScenarioError("meta.seed must be an integer");
      seed = meta.at("seed").get<long long>();
    }
    if (meta.contains("description") && !meta.at("description").is_string())
      throw ScenarioError("meta.description must be a string");
  }

  const json params = doc.contains("params") ? doc.at("params") : json::object();
  allow_keys(params, "params", {"r", "delta", "delta_lo", "delta_hi", "beta_lo", "edge_weight",
                                "node_weight", "city_cost", "other_cost", "rates"});

  const bool has_net = doc.contains("network"), has_land = doc.contains("landscape");
  if (has_net == has_land) throw ScenarioError("exactly one of 'network' or 'landscape' is required");

  if (doc.contains("solve")) solve = parse_solve(doc.at("solve"));

  auto network = [&]() -> SpreadingNetwork {
    if (has_net) {
      for (const char* key : {"city_cost", "other_cost", "rates"})
        if (params.contains(key))
          throw ScenarioError(std::string("params.") + key + " applies to landscapes only");
      return parse_network(doc.at("network"), params);
    }
    landscape = parse_landscape(doc.at("landscape"));
    SpreadRateTable table;
    if (params.contains("rates")) parse_rates(params.at("rates"), table);
    CompileOptions opt;
    opt.discount_rate = number(params, "r", "params");
    opt.delta = number(params, "delta", "params");
    opt.delta_lo = number_or(params, "delta_lo", opt.delta, "params");
    opt.delta_hi = number_or(params, "delta_hi", opt.delta, "params");
    opt.beta_lo = number_or(params, "beta_lo", opt.beta_lo, "params");
    opt.edge_weight = number_or(params, "edge_weight", opt.edge_weight, "params");
    opt.node_weight = number_or(params, "node_weight", opt.node_weight, "params");
    opt.city_cost = number_or(params, "city_cost", opt.city_cost, "params");
    opt.other_cost = number_or(params, "other_cost", opt.other_cost, "params");
    return compile(*landscape, table, opt);
  };
  try {
    SpreadingNetwork net = network();
    return Scenario{std::move(name), seed, std::move(landscape), std::move(net), std::move(solve)};
  } catch (const StructuralError& err) {
    throw ScenarioError(std::string("invalid network: ") + err.what());
  } catch (const std::invalid_argument& err) {
    throw ScenarioError(err.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace spreadalloc
