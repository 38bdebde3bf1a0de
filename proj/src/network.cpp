#include "spreadalloc/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace spreadalloc {

namespace {

std::string edge_label(const Edge& e) {
  std::ostringstream os;
  os << "edge (" << e.target << " <- " << e.source << ")";
  return os.str();
}

void check_bounds(const std::vector<NodeParams>& nodes, const std::vector<Edge>& edges) {
  for (const auto& e : edges) {
    const auto& p = e.params;
    if (!(p.beta_lo > 0.0 && p.beta_lo <= p.beta && p.beta <= p.beta_hi))
      throw StructuralError(edge_label(e) + ": need 0 < beta_lo <= beta <= beta_hi");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& p = nodes[i];
    if (!(p.delta_lo > 0.0 && p.delta_lo <= p.delta && p.delta <= p.delta_hi && p.delta_hi < 1.0))
      throw StructuralError("node " + std::to_string(i) +
                            ": need 0 < delta_lo <= delta <= delta_hi < 1");
  }
}

}  // namespace

SpreadingNetwork::SpreadingNetwork(std::vector<NodeParams> nodes, std::vector<Edge> edges,
                                   double discount_rate)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), discount_rate_(discount_rate) {
  validate();
  check_bounds(nodes_, edges_);
  index_edges();
}

void SpreadingNetwork::validate() const {
  if (nodes_.empty()) throw StructuralError("network needs at least one node");
  if (!(discount_rate_ > 0.0) || !std::isfinite(discount_rate_))
    throw StructuralError("discount rate must be positive and finite");
  const int n = size();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& p = nodes_[i];
    const std::string tag = "node " + std::to_string(i);
    if (!(p.delta > 0.0 && p.delta < 1.0)) throw StructuralError(tag + ": delta must lie in (0,1)");
    if (!(p.weight > 0.0)) throw StructuralError(tag + ": weight must be positive");
    if (!(p.cost >= 0.0) || !std::isfinite(p.cost)) throw StructuralError(tag + ": cost must be >= 0");
    if (!(p.likelihood >= 0.0 && p.likelihood <= 1.0))
      throw StructuralError(tag + ": likelihood must lie in [0,1]");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges_) {
    if (e.target < 0 || e.target >= n || e.source < 0 || e.source >= n)
      throw StructuralError(edge_label(e) + ": endpoint out of range");
    if (e.target == e.source) throw StructuralError(edge_label(e) + ": self-loop");
    if (!seen.emplace(e.target, e.source).second)
      throw StructuralError(edge_label(e) + ": duplicate edge");
    if (!(e.params.beta > 0.0) || !std::isfinite(e.params.beta))
      throw StructuralError(edge_label(e) + ": beta must be positive");
    if (!(e.params.weight > 0.0)) throw StructuralError(edge_label(e) + ": weight must be positive");
  }
}

void SpreadingNetwork::index_edges() {
  out_edges_.assign(nodes_.size(), {});
  for (std::size_t k = 0; k < edges_.size(); ++k)
    out_edges_[static_cast<std::size_t>(edges_[k].source)].push_back(static_cast<int>(k));
}

Vector SpreadingNetwork::costs() const {
  Vector c(size());
  for (int i = 0; i < size(); ++i) c(i) = node(i).cost;
  return c;
}

Vector SpreadingNetwork::likelihoods() const {
  Vector x(size());
  for (int i = 0; i < size(); ++i) x(i) = node(i).likelihood;
  return x;
}

Vector SpreadingNetwork::deltas() const {
  Vector d(size());
  for (int i = 0; i < size(); ++i) d(i) = node(i).delta;
  return d;
}

Vector SpreadingNetwork::betas() const {
  Vector b(edge_count());
  for (int k = 0; k < edge_count(); ++k) b(k) = edge(k).params.beta;
  return b;
}

SpreadingNetwork SpreadingNetwork::with_rates(const Vector& beta, const Vector& delta) const {
  if (beta.size() != edge_count() || delta.size() != size())
    throw std::invalid_argument("with_rates: size mismatch");
  SpreadingNetwork out;
  out.nodes_ = nodes_;
  out.edges_ = edges_;
  out.discount_rate_ = discount_rate_;
  for (int k = 0; k < edge_count(); ++k) out.edges_[static_cast<std::size_t>(k)].params.beta = beta(k);
  for (int i = 0; i < size(); ++i) out.nodes_[static_cast<std::size_t>(i)].delta = delta(i);
  out.validate();
  out.out_edges_ = out_edges_;
  return out;
}

SpreadingNetwork SpreadingNetwork::with_costs(const Vector& costs) const {
  if (costs.size() != size()) throw std::invalid_argument("with_costs: size mismatch");
  SpreadingNetwork out = *this;
  for (int i = 0; i < size(); ++i) out.nodes_[static_cast<std::size_t>(i)].cost = costs(i);
  out.validate();
  return out;
}

SparseMatrix build_state_matrix(const SpreadingNetwork& net) {
  const int n = net.size();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n + net.edge_count()));
  for (int i = 0; i < n; ++i) triplets.emplace_back(i, i, -net.node(i).delta);
  for (const auto& e : net.edges()) triplets.emplace_back(e.target, e.source, e.params.beta);
  SparseMatrix a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

Matrix dense_state_matrix(const SpreadingNetwork& net) { return Matrix(build_state_matrix(net)); }

double default_time_step(const SpreadingNetwork& net) {
  double scale = net.discount_rate();
  Vector row_sum = Vector::Zero(net.size());
  for (const auto& e : net.edges()) row_sum(e.target) += e.params.beta;
  for (int i = 0; i < net.size(); ++i) scale = std::max({scale, net.node(i).delta, row_sum(i)});
  return 0.01 / scale;
}

namespace {

template <typename Rhs>
Trajectory integrate_rk4(const Vector& x0, double horizon, double dt, Rhs&& rhs) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be non-negative");
  Trajectory traj;
  const auto steps = static_cast<long>(std::ceil(horizon / dt - 1e-9));
  traj.times.reserve(static_cast<std::size_t>(steps + 1));
  traj.states.reserve(static_cast<std::size_t>(steps + 1));
  Vector x = x0;
  double t = 0.0;
  traj.times.push_back(t);
  traj.states.push_back(x);
  for (long s = 0; s < steps; ++s) {
    const double h = std::min(dt, horizon - t);
    const Vector k1 = rhs(x);
    const Vector k2 = rhs(x + 0.5 * h * k1);
    const Vector k3 = rhs(x + 0.5 * h * k2);
    const Vector k4 = rhs(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = (s + 1 == steps) ? horizon : t + h;
    if (!x.allFinite())
      throw IntegrationError("non-finite state at t = " + std::to_string(t));
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  return traj;
}

void check_initial_state(const SpreadingNetwork& net, const Vector& x0) {
  if (x0.size() != net.size()) throw std::invalid_argument("initial state has wrong length");
  if (!x0.allFinite() || (x0.array() < 0.0).any() || (x0.array() > 1.0).any())
    throw std::invalid_argument("initial state must lie in [0,1]^n");
}

}  // namespace

Trajectory simulate_linear(const SpreadingNetwork& net, const Vector& x0, double horizon,
                           double dt) {
  check_initial_state(net, x0);
  const SparseMatrix a = build_state_matrix(net);
  return integrate_rk4(x0, horizon, dt, [&](const Vector& x) -> Vector { return a * x; });
}

Trajectory simulate_nonlinear(const SpreadingNetwork& net, const Vector& x0, double horizon,
                              double dt) {
  check_initial_state(net, x0);
  SparseMatrix spread = build_state_matrix(net);
  const Vector delta = net.deltas();
  for (int i = 0; i < net.size(); ++i) spread.coeffRef(i, i) = 0.0;
  return integrate_rk4(x0, horizon, dt, [&](const Vector& x) -> Vector {
    return (1.0 - x.array()) * (spread * x).array() - delta.array() * x.array();
  });
}

}  // namespace spreadalloc
