#include "spreadalloc/resource_models.hpp"

namespace spreadalloc {

double edge_cap(const EdgeParams& e, ResourceModel model) {
  if (!(e.beta_lo < e.beta_hi)) return 0.0;
  return model == ResourceModel::Logarithmic ? edge_cap_log(e) : e.weight;
}

double node_cap(const NodeParams& p, ResourceModel model) {
  if (!(p.delta_lo < p.delta_hi)) return 0.0;
  return model == ResourceModel::Logarithmic ? node_cap_log(p) : p.weight;
}

double invest_edge(const EdgeParams& e, ResourceModel model, double beta) {
  if (!(e.beta_lo < e.beta_hi)) {
    detail::require_in(beta, e.beta_lo, e.beta_hi, "beta");
    return 0.0;
  }
  return model == ResourceModel::Logarithmic ? invest_log(e, beta) : invest_inverse(e, beta);
}

double invest_node(const NodeParams& p, ResourceModel model, double delta) {
  if (!(p.delta_lo < p.delta_hi)) {
    detail::require_in(delta, p.delta_lo, p.delta_hi, "delta");
    return 0.0;
  }
  return model == ResourceModel::Logarithmic ? invest_log_recovery(p, delta)
                                             : invest_inverse_recovery(p, delta);
}

double recover_edge(const EdgeParams& e, ResourceModel model, double u) {
  if (!(e.beta_lo < e.beta_hi)) return e.beta_hi;
  return model == ResourceModel::Logarithmic ? recover_beta(e, u) : recover_beta_inverse(e, u);
}

double recover_node(const NodeParams& p, ResourceModel model, double v) {
  if (!(p.delta_lo < p.delta_hi)) return p.delta_lo;
  return model == ResourceModel::Logarithmic ? recover_delta(p, v) : recover_delta_inverse(p, v);
}

Allocation Allocation::zero(const SpreadingNetwork& net, ResourceModel model) {
  return {model, Vector::Zero(net.edge_count()), Vector::Zero(net.size())};
}

Allocation Allocation::from_rates(const SpreadingNetwork& net, ResourceModel model,
                                  const Vector& beta, const Vector& delta) {
  Allocation a = zero(net, model);
  for (int k = 0; k < net.edge_count(); ++k) a.edge_investment(k) = invest_edge(net.edge(k).params, model, beta(k));
  for (int i = 0; i < net.size(); ++i) a.node_investment(i) = invest_node(net.node(i), model, delta(i));
  return a;
}

Vector Allocation::recovered_beta(const SpreadingNetwork& net) const {
  Vector beta(net.edge_count());
  for (int k = 0; k < net.edge_count(); ++k)
    beta(k) = recover_edge(net.edge(k).params, model, edge_investment(k));
  return beta;
}

Vector Allocation::recovered_delta(const SpreadingNetwork& net) const {
  Vector delta(net.size());
  for (int i = 0; i < net.size(); ++i) delta(i) = recover_node(net.node(i), model, node_investment(i));
  return delta;
}

ActiveCount count_active(const Allocation& alloc, double threshold) {
  if (threshold < 0.0) throw std::invalid_argument("threshold must be non-negative");
  ActiveCount c;
  c.edges = static_cast<int>((alloc.edge_investment.array() > threshold).count());
  c.nodes = static_cast<int>((alloc.node_investment.array() > threshold).count());
  return c;
}

ActiveCount count_active(const SpreadingNetwork& net, const Allocation& alloc, double fraction) {
  if (fraction < 0.0) throw std::invalid_argument("threshold fraction must be non-negative");
  ActiveCount c;
  for (int k = 0; k < net.edge_count(); ++k)
    if (alloc.edge_investment(k) > fraction * edge_cap(net.edge(k).params, alloc.model)) ++c.edges;
  for (int i = 0; i < net.size(); ++i)
    if (alloc.node_investment(i) > fraction * node_cap(net.node(i), alloc.model)) ++c.nodes;
  return c;
}

}  // namespace spreadalloc
