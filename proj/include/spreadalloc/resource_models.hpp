#pragma once

#include "spreadalloc/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spreadalloc {

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

enum class ResourceModel { Logarithmic, Inverse };

inline std::string to_string(ResourceModel m) {
  return m == ResourceModel::Logarithmic ? "log" : "inverse";
}

namespace detail {

template <typename Scalar>
void require_in(Scalar value, Scalar lo, Scalar hi, const char* what) {
  const Scalar slack = Scalar(1e-12) * std::max(std::abs(lo), std::abs(hi));
  if (!(value >= lo - slack && value <= hi + slack))
    throw RangeError(std::string(what) + " outside its feasible interval");
}

}  // namespace detail

// Logarithmic model: u = w log(beta_hi / beta),  v = w log((1 - delta_lo) / (1 - delta)).
// Equal proportional reductions cost equal amounts; the rate never reaches zero.

template <typename Scalar = double>
Scalar edge_cap_log(const EdgeParams& e) {
  return Scalar(e.weight) * std::log(Scalar(e.beta_hi) / Scalar(e.beta_lo));
}

template <typename Scalar = double>
Scalar node_cap_log(const NodeParams& p) {
  return Scalar(p.weight) * std::log((1 - Scalar(p.delta_lo)) / (1 - Scalar(p.delta_hi)));
}

template <typename Scalar>
Scalar invest_log(const EdgeParams& e, Scalar beta) {
  detail::require_in<Scalar>(beta, e.beta_lo, e.beta_hi, "beta");
  return Scalar(e.weight) * std::log(Scalar(e.beta_hi) / beta);
}

template <typename Scalar>
Scalar recover_beta(const EdgeParams& e, Scalar u) {
  detail::require_in<Scalar>(u, Scalar(0), edge_cap_log<Scalar>(e), "edge investment");
  const Scalar beta = Scalar(e.beta_hi) * std::exp(-u / Scalar(e.weight));
  return std::clamp<Scalar>(beta, e.beta_lo, e.beta_hi);
}

template <typename Scalar>
Scalar invest_log_recovery(const NodeParams& p, Scalar delta) {
  detail::require_in<Scalar>(delta, p.delta_lo, p.delta_hi, "delta");
  return Scalar(p.weight) * std::log((1 - Scalar(p.delta_lo)) / (1 - delta));
}

template <typename Scalar>
Scalar recover_delta(const NodeParams& p, Scalar v) {
  detail::require_in<Scalar>(v, Scalar(0), node_cap_log<Scalar>(p), "node investment");
  const Scalar delta = 1 - (1 - Scalar(p.delta_lo)) * std::exp(-v / Scalar(p.weight));
  return std::clamp<Scalar>(delta, p.delta_lo, p.delta_hi);
}

// Inverse model: cost affine in 1/beta (resp. 1/(1 - delta)), normalized to
// [0, 1] and scaled by the entry weight.

template <typename Scalar>
Scalar invest_inverse(const EdgeParams& e, Scalar beta) {
  if (!(e.beta_lo < e.beta_hi)) throw RangeError("inverse model needs beta_lo < beta_hi");
  detail::require_in<Scalar>(beta, e.beta_lo, e.beta_hi, "beta");
  const Scalar num = 1 / beta - 1 / Scalar(e.beta_hi);
  const Scalar den = 1 / Scalar(e.beta_lo) - 1 / Scalar(e.beta_hi);
  return Scalar(e.weight) * std::clamp<Scalar>(num / den, 0, 1);
}

template <typename Scalar>
Scalar recover_beta_inverse(const EdgeParams& e, Scalar u) {
  if (!(e.beta_lo < e.beta_hi)) throw RangeError("inverse model needs beta_lo < beta_hi");
  detail::require_in<Scalar>(u, Scalar(0), Scalar(e.weight), "edge investment");
  const Scalar frac = u / Scalar(e.weight);
  const Scalar inv = 1 / Scalar(e.beta_hi) + frac * (1 / Scalar(e.beta_lo) - 1 / Scalar(e.beta_hi));
  return std::clamp<Scalar>(1 / inv, e.beta_lo, e.beta_hi);
}

template <typename Scalar>
Scalar invest_inverse_recovery(const NodeParams& p, Scalar delta) {
  if (!(p.delta_lo < p.delta_hi)) throw RangeError("inverse model needs delta_lo < delta_hi");
  detail::require_in<Scalar>(delta, p.delta_lo, p.delta_hi, "delta");
  const Scalar num = 1 / (1 - delta) - 1 / (1 - Scalar(p.delta_lo));
  const Scalar den = 1 / (1 - Scalar(p.delta_hi)) - 1 / (1 - Scalar(p.delta_lo));
  return Scalar(p.weight) * std::clamp<Scalar>(num / den, 0, 1);
}

template <typename Scalar>
Scalar recover_delta_inverse(const NodeParams& p, Scalar v) {
  if (!(p.delta_lo < p.delta_hi)) throw RangeError("inverse model needs delta_lo < delta_hi");
  detail::require_in<Scalar>(v, Scalar(0), Scalar(p.weight), "node investment");
  const Scalar frac = v / Scalar(p.weight);
  const Scalar lo = 1 / (1 - Scalar(p.delta_lo)), hi = 1 / (1 - Scalar(p.delta_hi));
  return std::clamp<Scalar>(1 - 1 / (lo + frac * (hi - lo)), p.delta_lo, p.delta_hi);
}

/// Per-entry investment cap under the given model (zero for a fixed rate).
double edge_cap(const EdgeParams& e, ResourceModel model);
double node_cap(const NodeParams& p, ResourceModel model);

double invest_edge(const EdgeParams& e, ResourceModel model, double beta);
double invest_node(const NodeParams& p, ResourceModel model, double delta);
double recover_edge(const EdgeParams& e, ResourceModel model, double u);
double recover_node(const NodeParams& p, ResourceModel model, double v);

/// Per-edge and per-node investments under one resource model.
struct Allocation {
  ResourceModel model = ResourceModel::Logarithmic;
  Vector edge_investment;
  Vector node_investment;

  double total() const { return edge_investment.sum() + node_investment.sum(); }

  static Allocation zero(const SpreadingNetwork& net, ResourceModel model);
  /// Investments that realize the given rates (each must lie within its bounds).
  static Allocation from_rates(const SpreadingNetwork& net, ResourceModel model, const Vector& beta,
                               const Vector& delta);
  Vector recovered_beta(const SpreadingNetwork& net) const;
  Vector recovered_delta(const SpreadingNetwork& net) const;
};

struct ActiveCount {
  int edges = 0;
  int nodes = 0;
  int total() const { return edges + nodes; }
};

/// Entries with investment strictly above an absolute threshold.
ActiveCount count_active(const Allocation& alloc, double threshold);

/// Default scale-relative threshold: fraction (1e-5) of each entry's cap.
inline constexpr double kActiveFraction = 1e-5;
ActiveCount count_active(const SpreadingNetwork& net, const Allocation& alloc,
                         double fraction = kActiveFraction);

}  // namespace spreadalloc
