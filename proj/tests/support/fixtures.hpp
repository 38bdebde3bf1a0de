#pragma once

#include "spreadalloc/network.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fixture {

using namespace spreadalloc;

inline NodeParams node(double delta, double cost, double likelihood, double delta_hi = -1.0) {
  NodeParams p;
  p.delta = delta;
  p.delta_lo = delta;
  p.delta_hi = delta_hi < 0.0 ? delta : delta_hi;
  p.cost = cost;
  p.likelihood = likelihood;
  return p;
}

inline Edge edge(int target, int source, double beta, double beta_lo = -1.0) {
  Edge e;
  e.target = target;
  e.source = source;
  e.params.beta = beta;
  e.params.beta_hi = beta;
  e.params.beta_lo = beta_lo < 0.0 ? beta : beta_lo;
  return e;
}

/// One node with delta, cost and likelihood and no edges.
inline SpreadingNetwork single(double delta, double cost, double likelihood, double r) {
  return SpreadingNetwork({node(delta, cost, likelihood)}, {}, r);
}

/// Nodes 0 and 1 with spread from 1 to 0 at rate beta.
inline SpreadingNetwork pair(double beta, double delta, double c0, double c1, double r = 3.5) {
  return SpreadingNetwork({node(delta, c0, 1.0), node(delta, c1, 1.0)}, {edge(0, 1, beta)}, r);
}

/// Spread 0 -> 1 -> 2 with the cost at the end of the line.
inline SpreadingNetwork line3(double beta_lo = 0.01, double delta_hi = 0.6) {
  return SpreadingNetwork(
      {node(0.2, 0.0, 0.9, delta_hi), node(0.2, 0.1, 0.3), node(0.2, 1.0, 0.1)},
      {edge(1, 0, 0.8, beta_lo), edge(2, 1, 0.9, beta_lo)}, 1.0);
}

inline std::filesystem::path scenario_dir() { return SPREADALLOC_SCENARIO_DIR; }

}  // namespace fixture
