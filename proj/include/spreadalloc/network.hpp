#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>
#include <vector>

namespace spreadalloc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Raised when a network violates its structural invariants.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an ODE integration produces non-finite values.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EdgeParams {
  double beta = 0.0;
  double beta_lo = 0.0;
  double beta_hi = 0.0;
  double weight = 1.0;
};

struct NodeParams {
  double delta = 0.0;
  double delta_lo = 0.0;
  double delta_hi = 0.0;
  double weight = 1.0;
  double cost = 0.0;
  double likelihood = 0.0;
};

/// A directed edge record. Orientation: spread travels from `source` to
/// `target`, and the rate lands in the state matrix at (target, source).
struct Edge {
  int target = 0;
  int source = 0;
  EdgeParams params;
};

/// Linearized spreading process on a directed graph.
///
/// The state matrix is A with A(i,i) = -delta_i and A(i,j) = beta_ij for
/// every edge carrying spread from j to i. Construction validates all
/// invariants; the object is immutable afterwards.
class SpreadingNetwork {
 public:
  SpreadingNetwork(std::vector<NodeParams> nodes, std::vector<Edge> edges,
                   double discount_rate);

  int size() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  double discount_rate() const { return discount_rate_; }

  const std::vector<NodeParams>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const NodeParams& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const Edge& edge(int k) const { return edges_[static_cast<std::size_t>(k)]; }

  /// Edge indices grouped by source node (the column of A they occupy).
  const std::vector<std::vector<int>>& out_edges() const { return out_edges_; }

  Vector costs() const;
  Vector likelihoods() const;
  Vector deltas() const;
  Vector betas() const;

  /// Copy with the given rates substituted (bounds and weights unchanged).
  /// Rates are not range-checked against the bounds here.
  SpreadingNetwork with_rates(const Vector& beta, const Vector& delta) const;
  SpreadingNetwork with_costs(const Vector& costs) const;

 private:
  SpreadingNetwork() = default;
  void validate() const;
  void index_edges();

  std::vector<NodeParams> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_edges_;
  double discount_rate_ = 0.0;
};

/// Sparse n x n state matrix (Metzler by construction).
SparseMatrix build_state_matrix(const SpreadingNetwork& net);

/// Dense copy of the state matrix; intended for small oracles.
Matrix dense_state_matrix(const SpreadingNetwork& net);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
};

/// Default RK4 step: 0.01 / max(r, max delta, max row sum of beta).
double default_time_step(const SpreadingNetwork& net);

/// Integrates x' = A x with fixed-step RK4; records every step.
Trajectory simulate_linear(const SpreadingNetwork& net, const Vector& x0,
                           double horizon, double dt);

/// Integrates the mean-field model x_i' = (1 - x_i) sum_j beta_ij x_j - delta_i x_i.
Trajectory simulate_nonlinear(const SpreadingNetwork& net, const Vector& x0,
                              double horizon, double dt);

}  // namespace spreadalloc
