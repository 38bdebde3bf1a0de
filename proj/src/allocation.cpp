#include "spreadalloc/allocation.hpp"

#include "spreadalloc/interior_point.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace spreadalloc {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::SolverFailure: return "solver_failure";
  }
  return "unknown";
}

EntryMask EntryMask::all(const SpreadingNetwork& net) {
  return {std::vector<bool>(static_cast<std::size_t>(net.edge_count()), true),
          std::vector<bool>(static_cast<std::size_t>(net.size()), true)};
}

EntryMask EntryMask::none(const SpreadingNetwork& net) {
  return {std::vector<bool>(static_cast<std::size_t>(net.edge_count()), false),
          std::vector<bool>(static_cast<std::size_t>(net.size()), false)};
}

namespace {

AffineExpr plus(AffineExpr e, const AffineExpr& other, double scale = 1.0) {
  for (const auto& t : other.terms) e.terms.push_back({t.var, scale * t.coeff});
  e.constant += scale * other.constant;
  return e;
}

AffineExpr var_expr(int v, double coeff = 1.0, double constant = 0.0) {
  return AffineExpr({{v, coeff}}, constant);
}

}  // namespace

std::vector<AffineExpr> build_node_constraint(const SpreadingNetwork& net, int j,
                                              const ProgramLayout& layout) {
  const double log_scale = std::log1p(net.discount_rate());
  const auto ju = static_cast<std::size_t>(j);
  std::vector<AffineExpr> out;
  for (int k : net.out_edges()[ju]) {
    const int i = net.edge(k).target;
    AffineExpr z = var_expr(layout.y[static_cast<std::size_t>(i)], 1.0, -log_scale);
    z = plus(std::move(z), layout.log_beta[static_cast<std::size_t>(k)]);
    z.terms.push_back({layout.y[ju], -1.0});
    out.push_back(std::move(z));
  }
  out.push_back(plus(AffineExpr(-log_scale), layout.log_recovery[ju]));
  const double c = net.node(j).cost;
  if (c > 0.0) out.push_back(var_expr(layout.y[ju], -1.0, std::log(c) - log_scale));
  return out;
}

namespace {

enum class Goal { MaxRisk, Investment, Eigenvalue };

struct ProblemSpec {
  Goal goal = Goal::MaxRisk;
  ResourceModel model = ResourceModel::Logarithmic;
  EntryMask mask;
  std::optional<double> budget;
  double risk_bound = kInf;
  /// Impacts at full and at zero investment; they bracket the impact of
  /// every allocation and become the box on y (and t).
  Vector impact_lo;
  Vector impact_hi;
  const Vector* edge_weights = nullptr;
  const Vector* node_weights = nullptr;
};

struct LseRecord {
  std::vector<AffineExpr> exponents;  // non-constant ones, aligned with aux
  std::vector<int> aux;
  double bound = 1.0;  // after folding constant terms
};

/// Per-entry decision variables: the investment u (log model) or log-rate
/// plus the reciprocal q >= exp(-log-rate) (inverse model).
struct EntryVars {
  int primary = -1;
  int reciprocal = -1;
};

struct BuiltProgram {
  ConeProgram program;
  ProgramLayout layout;
  std::vector<LseRecord> rows;
  std::vector<EntryVars> edge_vars;
  std::vector<EntryVars> node_vars;
};

double weight_of(const Vector* w, int k) { return w ? (*w)(k) : 1.0; }

void add_entry(BuiltProgram& b, ResourceModel model, bool free, const std::string& name,
               double log_hi_rate, double log_lo_rate, double weight, double cap,
               AffineExpr& log_rate, AffineExpr& cost, EntryVars& vars) {
  // Rates are "beta" for edges and "1 - delta" for nodes; investment lowers both.
  if (!free || !(cap > 0.0)) {
    log_rate = AffineExpr(log_hi_rate);
    cost = AffineExpr(0.0);
    return;
  }
  auto& prog = b.program;
  if (model == ResourceModel::Logarithmic) {
    vars.primary = prog.add_variable(name + ".u", 0.0, cap);
    log_rate = var_expr(vars.primary, -1.0 / weight, log_hi_rate);
    cost = var_expr(vars.primary);
    return;
  }
  vars.primary = prog.add_variable(name + ".lograte", log_lo_rate, log_hi_rate);
  const double inv_hi = std::exp(-log_hi_rate), inv_lo = std::exp(-log_lo_rate);
  vars.reciprocal = prog.add_variable(name + ".q", -kInf, 2.0 * inv_lo);
  prog.add_exp_cone(var_expr(vars.primary, -1.0), AffineExpr(1.0), var_expr(vars.reciprocal));
  log_rate = var_expr(vars.primary);
  const double scale = weight / (inv_lo - inv_hi);
  cost = var_expr(vars.reciprocal, scale, -scale * inv_hi);
}

BuiltProgram build_program(const SpreadingNetwork& net, const ProblemSpec& spec) {
  BuiltProgram b;
  auto& prog = b.program;
  auto& lay = b.layout;
  const int n = net.size(), m = net.edge_count();
  const Vector x0 = net.likelihoods();

  const bool eigen = spec.goal == Goal::Eigenvalue;
  for (int i = 0; i < n; ++i) {
    double lo = eigen ? -200.0 : kLogImpactFloor;
    double hi = eigen ? 200.0 : kLogImpactCeiling;
    if (spec.impact_lo.size() == n && spec.impact_lo(i) > 0.0)
      lo = std::max(lo, std::log(spec.impact_lo(i)) - 1.0);
    if (spec.impact_hi.size() == n && spec.impact_hi(i) > 0.0)
      hi = std::min(hi, std::log(spec.impact_hi(i)) + 1.0);
    if (spec.goal == Goal::Investment && x0(i) > 0.0)
      hi = std::min(hi, std::log(spec.risk_bound) - std::log(x0(i)));
    lay.y.push_back(prog.add_variable("y" + std::to_string(i), lo, std::max(hi, lo)));
  }

  lay.log_beta.resize(static_cast<std::size_t>(m));
  lay.edge_cost.resize(static_cast<std::size_t>(m));
  b.edge_vars.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const auto& e = net.edge(k).params;
    const auto ku = static_cast<std::size_t>(k);
    add_entry(b, spec.model, spec.mask.edges[ku], "e" + std::to_string(k), std::log(e.beta_hi),
              std::log(e.beta_lo), e.weight, edge_cap(e, spec.model), lay.log_beta[ku],
              lay.edge_cost[ku], b.edge_vars[ku]);
  }
  lay.log_recovery.resize(static_cast<std::size_t>(n));
  lay.node_cost.resize(static_cast<std::size_t>(n));
  b.node_vars.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& p = net.node(i);
    const auto iu = static_cast<std::size_t>(i);
    add_entry(b, spec.model, spec.mask.nodes[iu], "n" + std::to_string(i),
              std::log1p(-p.delta_lo), std::log1p(-p.delta_hi), p.weight, node_cap(p, spec.model),
              lay.log_recovery[iu], lay.node_cost[iu], b.node_vars[iu]);
  }

  // Weighted investment expression (budget row or objective).
  AffineExpr investment;
  for (int k = 0; k < m; ++k)
    investment = plus(std::move(investment), lay.edge_cost[static_cast<std::size_t>(k)],
                      weight_of(spec.edge_weights, k));
  for (int i = 0; i < n; ++i)
    investment = plus(std::move(investment), lay.node_cost[static_cast<std::size_t>(i)],
                      weight_of(spec.node_weights, i));

  if (eigen) {
    double lo = -kInf, hi = -kInf;
    for (int j = 0; j < n; ++j) {
      double col = 1.0 - net.node(j).delta_lo;
      for (int k : net.out_edges()[static_cast<std::size_t>(j)]) col += net.edge(k).params.beta_hi;
      hi = std::max(hi, col);
      lo = std::max(lo, 1.0 - net.node(j).delta_hi);
    }
    lay.log_lambda = prog.add_variable("loglambda", std::log(lo) - 1.0, std::log(hi) + 1.0);
    for (int j = 0; j < n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      LseRecord rec;
      std::vector<AffineExpr> exps;
      for (int k : net.out_edges()[ju]) {
        AffineExpr z = var_expr(lay.y[static_cast<std::size_t>(net.edge(k).target)]);
        z = plus(std::move(z), lay.log_beta[static_cast<std::size_t>(k)]);
        z.terms.push_back({lay.y[ju], -1.0});
        z.terms.push_back({lay.log_lambda, -1.0});
        exps.push_back(std::move(z));
      }
      AffineExpr rec_term = lay.log_recovery[ju];
      rec_term.terms.push_back({lay.log_lambda, -1.0});
      exps.push_back(std::move(rec_term));
      rec.bound = 1.0;
      for (const auto& z : exps) {
        if (z.is_constant()) rec.bound -= std::exp(z.constant);
        else rec.exponents.push_back(z);
      }
      rec.aux = prog.add_log_sum_exp(exps, 1.0, "row" + std::to_string(j));
      b.rows.push_back(std::move(rec));
    }
  } else {
    for (int j = 0; j < n; ++j) {
      LseRecord rec;
      const auto exps = build_node_constraint(net, j, lay);
      rec.bound = 1.0;
      for (const auto& z : exps) {
        if (z.is_constant()) rec.bound -= std::exp(z.constant);
        else rec.exponents.push_back(z);
      }
      rec.aux = prog.add_log_sum_exp(exps, 1.0, "row" + std::to_string(j));
      b.rows.push_back(std::move(rec));
    }
  }

  if (spec.budget) {
    if (!investment.is_constant())
      prog.add_linear(investment.terms, Sense::LessEqual, *spec.budget - investment.constant);
  }

  switch (spec.goal) {
    case Goal::MaxRisk: {
      // t lies between the largest lower and the largest upper log risk
      double lo = -kInf, hi = -kInf;
      for (int i = 0; i < n; ++i) {
        if (!(x0(i) > 0.0)) continue;
        const auto yi = lay.y[static_cast<std::size_t>(i)];
        lo = std::max(lo, std::log(x0(i)) + prog.lower()(yi));
        hi = std::max(hi, std::log(x0(i)) + prog.upper()(yi));
      }
      lay.t = prog.add_variable("t", lo - 1.0, hi + 1.0);
      for (int i = 0; i < n; ++i)
        if (x0(i) > 0.0)
          prog.add_linear({{lay.t, 1.0}, {lay.y[static_cast<std::size_t>(i)], -1.0}},
                          Sense::GreaterEqual, std::log(x0(i)));
      prog.set_objective({{lay.t, 1.0}});
      break;
    }
    case Goal::Investment: prog.set_objective(investment.terms, investment.constant); break;
    case Goal::Eigenvalue: prog.set_objective({{lay.log_lambda, 1.0}}); break;
  }
  return b;
}

/// Interior guess: every free entry at a fraction of its cap, y from the
/// impact of slightly inflated costs, auxiliaries splitting the row slack.
Vector initial_point(const SpreadingNetwork& net, const ProblemSpec& spec, const BuiltProgram& b) {
  const auto& prog = b.program;
  Vector x = Vector::Zero(prog.variable_count());
  const int n = net.size(), m = net.edge_count();

  double theta = 0.5;
  if (spec.budget) {
    double full = 0.0;
    for (int k = 0; k < m; ++k)
      if (b.edge_vars[static_cast<std::size_t>(k)].primary >= 0)
        full += weight_of(spec.edge_weights, k) * edge_cap(net.edge(k).params, spec.model);
    for (int i = 0; i < n; ++i)
      if (b.node_vars[static_cast<std::size_t>(i)].primary >= 0)
        full += weight_of(spec.node_weights, i) * node_cap(net.node(i), spec.model);
    if (full > 0.0) theta = std::min(0.5, 0.5 * *spec.budget / full);
  }

  Vector beta = net.betas(), delta = net.deltas();
  for (int k = 0; k < m; ++k) {
    const auto& e = net.edge(k).params;
    const auto& v = b.edge_vars[static_cast<std::size_t>(k)];
    beta(k) = e.beta_hi;
    if (v.primary < 0) continue;
    const double u = theta * edge_cap(e, spec.model);
    beta(k) = recover_edge(e, spec.model, u);
    if (spec.model == ResourceModel::Logarithmic) {
      x(v.primary) = u;
    } else {
      x(v.primary) = std::log(beta(k));
      x(v.reciprocal) = std::min(1.0 / beta(k) * (1.0 + 1e-6), 1.5 / e.beta_lo);
    }
  }
  for (int i = 0; i < n; ++i) {
    const auto& p = net.node(i);
    const auto& v = b.node_vars[static_cast<std::size_t>(i)];
    delta(i) = p.delta_lo;
    if (v.primary < 0) continue;
    const double inv = theta * node_cap(p, spec.model);
    delta(i) = recover_node(p, spec.model, inv);
    if (spec.model == ResourceModel::Logarithmic) {
      x(v.primary) = inv;
    } else {
      x(v.primary) = std::log1p(-delta(i));
      x(v.reciprocal) = std::min(1.0 / (1.0 - delta(i)) * (1.0 + 1e-6), 1.5 / (1.0 - p.delta_hi));
    }
  }

  const auto& lay = b.layout;
  if (spec.goal == Goal::Eigenvalue) {
    double hi = 0.0;
    Vector col = Vector::Zero(n);
    for (int i = 0; i < n; ++i) col(i) = 1.0 - delta(i);
    for (int k = 0; k < m; ++k) col(net.edge(k).source) += beta(k);
    hi = col.maxCoeff();
    x(lay.log_lambda) = std::min(std::log(hi) + 0.5, prog.upper()(lay.log_lambda) - 0.25);
  } else {
    try {
      const auto rated = net.with_rates(beta, delta);
      const Vector c = net.costs();
      const double bump = 1e-3 * std::max(c.maxCoeff(), 1e-12);
      const auto p = impact_direct(rated.with_costs(c.array() + bump));
      for (int i = 0; i < n; ++i)
        x(lay.y[static_cast<std::size_t>(i)]) =
            std::clamp(std::log(p.values(i)), kLogImpactFloor + 1.0, kLogImpactCeiling - 1.0);
    } catch (const StabilityError&) {
      // unstable at the guess; phase I starts from y = 0
    }
    if (lay.t >= 0) {
      double t = -kInf;
      const Vector x0 = net.likelihoods();
      for (int i = 0; i < n; ++i)
        if (x0(i) > 0.0) t = std::max(t, std::log(x0(i)) + x(lay.y[static_cast<std::size_t>(i)]));
      x(lay.t) = t + 1.0;
    }
  }

  for (const auto& row : b.rows) {
    double used = 0.0;
    std::vector<double> e(row.exponents.size());
    for (std::size_t k = 0; k < row.exponents.size(); ++k) {
      e[k] = std::exp(row.exponents[k].evaluate(x));
      used += e[k];
    }
    const double spare = std::max(0.0, row.bound - used);
    for (std::size_t k = 0; k < row.aux.size(); ++k)
      x(row.aux[k]) = e[k] + spare / (2.0 * static_cast<double>(row.aux.size()));
  }
  return x;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Rates with every free entry at its most favourable bound.
SpreadingNetwork full_investment(const SpreadingNetwork& net, const EntryMask& mask) {
  Vector beta(net.edge_count()), delta(net.size());
  for (int k = 0; k < net.edge_count(); ++k) {
    const auto& e = net.edge(k).params;
    beta(k) = mask.edges[static_cast<std::size_t>(k)] ? e.beta_lo : e.beta_hi;
  }
  for (int i = 0; i < net.size(); ++i) {
    const auto& p = net.node(i);
    delta(i) = mask.nodes[static_cast<std::size_t>(i)] ? p.delta_hi : p.delta_lo;
  }
  return net.with_rates(beta, delta);
}

bool any_likely(const SpreadingNetwork& net) { return (net.likelihoods().array() > 0.0).any(); }

void fill_outcome(const SpreadingNetwork& net, SolveReport& rep, double active_fraction) {
  rep.beta = rep.allocation.recovered_beta(net);
  rep.delta = rep.allocation.recovered_delta(net);
  rep.active = count_active(net, rep.allocation, active_fraction);
  const auto rated = net.with_rates(rep.beta, rep.delta);
  rep.impact = impact_direct(rated);
  rep.risk = risk(net, rep.impact);
}

SolveReport solve_spec(const SpreadingNetwork& net, ProblemSpec spec,
                       const AllocationOptions& options) {
  const auto start = Clock::now();
  SolveReport rep;
  rep.allocation = Allocation::zero(net, spec.model);
  const Vector x0 = net.likelihoods();

  if (spec.goal != Goal::Eigenvalue) {
    try {
      const auto full = impact_direct(full_investment(net, spec.mask));
      rep.min_achievable_risk = risk(net, full).max_risk;
      spec.impact_lo = full.values;
    } catch (const StabilityError& err) {
      rep.status = SolveStatus::Infeasible;
      rep.message = std::string("even full investment leaves the discounted cost unbounded: ") +
                    err.what();
      rep.wall_time = seconds_since(start);
      return rep;
    }
    try {
      spec.impact_hi = impact_direct(full_investment(net, EntryMask::none(net))).values;
    } catch (const StabilityError&) {
      // unbounded without investment; y keeps its default ceiling
    }
    if (spec.goal == Goal::Investment && !(spec.risk_bound > 0.0))
      throw std::invalid_argument("risk bound must be positive");
    if (spec.goal == Goal::Investment && spec.risk_bound < rep.min_achievable_risk) {
      std::ostringstream os;
      os.precision(12);
      os << "risk bound " << spec.risk_bound << " is below the minimal achievable risk "
         << rep.min_achievable_risk;
      rep.status = SolveStatus::Infeasible;
      rep.message = os.str();
      rep.wall_time = seconds_since(start);
      return rep;
    }
    if (spec.goal == Goal::MaxRisk && !any_likely(net)) {
      // every likelihood is zero: the max risk is zero for any allocation
      fill_outcome(net, rep, options.active_fraction);
      rep.status = SolveStatus::Optimal;
      rep.objective = -kInf;
      rep.message = "no node has positive outbreak likelihood";
      rep.wall_time = seconds_since(start);
      return rep;
    }
  }
  if (spec.budget && *spec.budget < 0.0) throw std::invalid_argument("budget must be non-negative");

  BuiltProgram built = build_program(net, spec);
  const Vector guess = initial_point(net, spec, built);
  const InteriorPointSolver native(options.solver);
  const ConeSolver& backend = options.backend ? *options.backend : native;
  const ConeSolution sol = backend.solve(built.program, guess);
  rep.iterations = sol.iterations;

  if (sol.status == ConeStatus::Infeasible) {
    rep.status = SolveStatus::Infeasible;
    rep.message = "cone program infeasible: " + sol.message;
    rep.wall_time = seconds_since(start);
    return rep;
  }
  if (sol.status != ConeStatus::Optimal) {
    rep.status = SolveStatus::SolverFailure;
    rep.message = backend.name() + ": " + to_string(sol.status) + " " + sol.message;
    rep.wall_time = seconds_since(start);
    return rep;
  }

  const Vector& x = sol.primal;
  const int n = net.size(), m = net.edge_count();
  auto& vars = rep.vars;
  vars.y.resize(n);
  for (int i = 0; i < n; ++i) vars.y(i) = x(built.layout.y[static_cast<std::size_t>(i)]);
  for (int k = 0; k < m; ++k) {
    const auto& v = built.edge_vars[static_cast<std::size_t>(k)];
    if (v.primary < 0) continue;
    const auto& e = net.edge(k).params;
    const double cap = edge_cap(e, spec.model);
    rep.allocation.edge_investment(k) =
        spec.model == ResourceModel::Logarithmic
            ? std::clamp(x(v.primary), 0.0, cap)
            : invest_inverse(e, std::clamp(std::exp(x(v.primary)), e.beta_lo, e.beta_hi));
  }
  for (int i = 0; i < n; ++i) {
    const auto& v = built.node_vars[static_cast<std::size_t>(i)];
    if (v.primary < 0) continue;
    const auto& p = net.node(i);
    const double cap = node_cap(p, spec.model);
    rep.allocation.node_investment(i) =
        spec.model == ResourceModel::Logarithmic
            ? std::clamp(x(v.primary), 0.0, cap)
            : invest_inverse_recovery(
                  p, std::clamp(-std::expm1(x(v.primary)), p.delta_lo, p.delta_hi));
  }
  vars.u = rep.allocation.edge_investment;
  vars.v = rep.allocation.node_investment;

  try {
    fill_outcome(net, rep, options.active_fraction);
  } catch (const StabilityError& err) {
    rep.status = SolveStatus::SolverFailure;
    rep.message = std::string("recovered rates are unstable: ") + err.what();
    rep.wall_time = seconds_since(start);
    return rep;
  }

  rep.status = SolveStatus::Optimal;
  std::ostringstream msg;
  msg.precision(12);
  switch (spec.goal) {
    case Goal::MaxRisk: {
      vars.t = x(built.layout.t);
      double best = -kInf;
      for (int i = 0; i < n; ++i)
        if (x0(i) > 0.0) best = std::max(best, std::log(x0(i)) + vars.y(i));
      rep.objective = best;
      if (rep.risk.max_risk > std::exp(best) * (1.0 + options.certificate_tolerance)) {
        rep.status = SolveStatus::SolverFailure;
        msg << "certificate violated: recomputed max risk " << rep.risk.max_risk
            << " exceeds exp(objective) " << std::exp(best);
      }
      break;
    }
    case Goal::Investment:
      rep.objective = rep.allocation.total();
      if (rep.risk.max_risk > spec.risk_bound * (1.0 + options.certificate_tolerance)) {
        rep.status = SolveStatus::SolverFailure;
        msg << "certificate violated: recomputed max risk " << rep.risk.max_risk
            << " exceeds the bound " << spec.risk_bound;
      }
      break;
    case Goal::Eigenvalue:
      rep.objective = std::exp(x(built.layout.log_lambda)) - 1.0;
      rep.eigenvalue = dominant_eigenvalue(net.with_rates(rep.beta, rep.delta));
      break;
  }
  rep.message = msg.str();
  rep.wall_time = seconds_since(start);
  return rep;
}

EntryMask mask_or_none(const SpreadingNetwork& net, const EntryMask& mask, bool zero_budget) {
  return zero_budget ? EntryMask::none(net) : mask;
}

}  // namespace

SolveReport solve_problem1_masked(const SpreadingNetwork& net, std::optional<double> budget,
                                  ResourceModel model, const EntryMask& mask,
                                  const AllocationOptions& options, const Vector* edge_weights,
                                  const Vector* node_weights) {
  ProblemSpec spec;
  spec.goal = Goal::MaxRisk;
  spec.model = model;
  spec.mask = mask_or_none(net, mask, budget && *budget == 0.0);
  if (budget && *budget > 0.0) spec.budget = budget;
  spec.edge_weights = edge_weights;
  spec.node_weights = node_weights;
  return solve_spec(net, spec, options);
}

SolveReport solve_problem2_masked(const SpreadingNetwork& net, double risk_bound,
                                  ResourceModel model, const EntryMask& mask,
                                  const AllocationOptions& options, const Vector* edge_weights,
                                  const Vector* node_weights) {
  ProblemSpec spec;
  spec.goal = Goal::Investment;
  spec.model = model;
  spec.mask = mask;
  spec.risk_bound = risk_bound;
  spec.edge_weights = edge_weights;
  spec.node_weights = node_weights;
  return solve_spec(net, spec, options);
}

SolveReport solve_problem1(const SpreadingNetwork& net, double budget, ResourceModel model,
                           const AllocationOptions& options) {
  return solve_problem1_masked(net, budget, model, EntryMask::all(net), options);
}

SolveReport solve_problem2(const SpreadingNetwork& net, double risk_bound, ResourceModel model,
                           const AllocationOptions& options) {
  return solve_problem2_masked(net, risk_bound, model, EntryMask::all(net), options);
}

SolveReport solve_min_eigenvalue(const SpreadingNetwork& net, double budget,
                                 const AllocationOptions& options) {
  if (budget < 0.0) throw std::invalid_argument("budget must be non-negative");
  ProblemSpec spec;
  spec.goal = Goal::Eigenvalue;
  spec.model = ResourceModel::Logarithmic;
  spec.mask = mask_or_none(net, EntryMask::all(net), budget == 0.0);
  if (budget > 0.0) spec.budget = budget;
  return solve_spec(net, spec, options);
}

namespace {

struct Weights {
  Vector edges;
  Vector nodes;
};

Weights caps(const SpreadingNetwork& net) {
  Weights c{Vector(net.edge_count()), Vector(net.size())};
  for (int k = 0; k < net.edge_count(); ++k)
    c.edges(k) = edge_cap(net.edge(k).params, ResourceModel::Logarithmic);
  for (int i = 0; i < net.size(); ++i) c.nodes(i) = node_cap(net.node(i), ResourceModel::Logarithmic);
  return c;
}

/// 1 / (previous + eps) with eps a fraction of each entry's cap.
Weights next_weights(const Allocation& prev, const Weights& cap, double fraction) {
  Weights w;
  w.edges = (prev.edge_investment.array() + fraction * cap.edges.array() + 1e-300).inverse();
  w.nodes = (prev.node_investment.array() + fraction * cap.nodes.array() + 1e-300).inverse();
  return w;
}

double surrogate(const Allocation& a, const Weights& w) {
  return a.edge_investment.dot(w.edges) + a.node_investment.dot(w.nodes);
}

EntryMask support_of(const SpreadingNetwork& net, const Allocation& a, double fraction) {
  EntryMask mask = EntryMask::none(net);
  for (int k = 0; k < net.edge_count(); ++k)
    mask.edges[static_cast<std::size_t>(k)] =
        a.edge_investment(k) > fraction * edge_cap(net.edge(k).params, a.model);
  for (int i = 0; i < net.size(); ++i)
    mask.nodes[static_cast<std::size_t>(i)] =
        a.node_investment(i) > fraction * node_cap(net.node(i), a.model);
  return mask;
}

bool same_support(const EntryMask& a, const EntryMask& b) {
  return a.edges == b.edges && a.nodes == b.nodes;
}

IterationRecord record_of(int k, const SolveReport& rep, const Weights& w) {
  IterationRecord r;
  r.iteration = k;
  r.status = rep.status;
  if (rep.status == SolveStatus::Optimal) {
    r.surrogate = surrogate(rep.allocation, w);
    r.total_investment = rep.allocation.total();
    r.max_risk = rep.risk.max_risk;
    r.active = rep.active;
  }
  return r;
}

}  // namespace

ReweightedReport solve_problem2_reweighted(const SpreadingNetwork& net, double risk_bound,
                                           const ReweightOptions& reweight,
                                           const AllocationOptions& options) {
  if (!(reweight.epsilon_fraction > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto start = Clock::now();
  const auto mask = EntryMask::all(net);
  const Weights cap = caps(net);
  Weights w{Vector::Ones(net.edge_count()), Vector::Ones(net.size())};

  ReweightedReport out;
  std::vector<SolveReport> iterates;
  EntryMask previous;
  for (int k = 0; k <= reweight.max_iterations; ++k) {
    SolveReport rep = solve_problem2_masked(net, risk_bound, ResourceModel::Logarithmic, mask,
                                            options, &w.edges, &w.nodes);
    out.trace.push_back(record_of(k, rep, w));
    if (rep.status != SolveStatus::Optimal) {
      if (k == 0) {
        out.report = std::move(rep);
        return out;
      }
      out.report.message = "reweighting aborted at iteration " + std::to_string(k) + ": " + rep.message;
      break;
    }
    rep.objective = rep.allocation.total();
    const EntryMask support = support_of(net, rep.allocation, options.active_fraction);
    const bool settled = k > 0 && same_support(support, previous);
    previous = support;
    w = next_weights(rep.allocation, cap, reweight.epsilon_fraction);
    iterates.push_back(std::move(rep));
    if (settled) break;
  }

  int best = -1;
  for (std::size_t k = 0; k < iterates.size(); ++k) {
    const auto& it = iterates[k];
    if (it.risk.max_risk > risk_bound * (1.0 + options.certificate_tolerance)) continue;
    if (best < 0) {
      best = static_cast<int>(k);
      continue;
    }
    const auto& cur = iterates[static_cast<std::size_t>(best)];
    if (it.active.total() < cur.active.total() ||
        (it.active.total() == cur.active.total() && it.objective < cur.objective))
      best = static_cast<int>(k);
  }
  const std::string abort_note = out.report.message;
  if (best < 0) {
    out.report = iterates.front();
    out.report.status = SolveStatus::SolverFailure;
    out.report.message = "no reweighted iterate satisfied the risk bound";
    return out;
  }
  out.selected = best;
  out.report = iterates[static_cast<std::size_t>(best)];
  if (reweight.polish) {
    const EntryMask support = support_of(net, out.report.allocation, options.active_fraction);
    SolveReport polished =
        solve_problem2_masked(net, risk_bound, ResourceModel::Logarithmic, support, options);
    if (polished.status == SolveStatus::Optimal &&
        polished.active.total() <= out.report.active.total()) {
      polished.iterations += out.report.iterations;
      out.report = std::move(polished);
      out.polished = true;
    }
  }
  if (!abort_note.empty()) out.report.message = abort_note;
  out.report.wall_time = seconds_since(start);
  return out;
}

ReweightedReport solve_problem1_reweighted(const SpreadingNetwork& net, double count_bound,
                                           const ReweightOptions& reweight,
                                           const AllocationOptions& options) {
  if (!(reweight.epsilon_fraction > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (count_bound < 0.0) throw std::invalid_argument("count bound must be non-negative");
  const auto start = Clock::now();
  ReweightedReport out;
  if (count_bound < 1.0) {
    out.report = solve_problem1_masked(net, std::nullopt, ResourceModel::Logarithmic,
                                       EntryMask::none(net), options);
    out.trace.push_back(record_of(0, out.report, caps(net)));
    out.selected = 0;
    return out;
  }
  const auto mask = EntryMask::all(net);
  const Weights cap = caps(net);
  Weights w{(cap.edges.array() * (1.0 + reweight.epsilon_fraction) + 1e-300).inverse(),
            (cap.nodes.array() * (1.0 + reweight.epsilon_fraction) + 1e-300).inverse()};

  std::vector<SolveReport> iterates;
  EntryMask previous;
  for (int k = 0; k <= reweight.max_iterations; ++k) {
    SolveReport rep = solve_problem1_masked(net, count_bound, ResourceModel::Logarithmic, mask,
                                            options, &w.edges, &w.nodes);
    out.trace.push_back(record_of(k, rep, w));
    if (rep.status != SolveStatus::Optimal) {
      if (k == 0) {
        out.report = std::move(rep);
        return out;
      }
      break;
    }
    const EntryMask support = support_of(net, rep.allocation, options.active_fraction);
    const bool settled = k > 0 && same_support(support, previous);
    previous = support;
    w = next_weights(rep.allocation, cap, reweight.epsilon_fraction);
    iterates.push_back(std::move(rep));
    if (settled) break;
  }

  int best = -1;
  for (std::size_t k = 0; k < iterates.size(); ++k) {
    const auto& it = iterates[k];
    const bool within = it.active.total() <= count_bound;
    if (best < 0) {
      best = static_cast<int>(k);
      continue;
    }
    const auto& cur = iterates[static_cast<std::size_t>(best)];
    const bool cur_within = cur.active.total() <= count_bound;
    if (within != cur_within) {
      if (within) best = static_cast<int>(k);
      continue;
    }
    const bool better = within ? it.objective < cur.objective
                               : it.active.total() < cur.active.total();
    if (better) best = static_cast<int>(k);
  }
  out.selected = best;
  out.report = iterates[static_cast<std::size_t>(best)];
  if (out.report.active.total() > count_bound)
    out.report.message = "no iterate met the count bound; returning the sparsest";
  if (reweight.polish && out.report.active.total() <= count_bound) {
    const EntryMask support = support_of(net, out.report.allocation, options.active_fraction);
    SolveReport polished =
        solve_problem1_masked(net, std::nullopt, ResourceModel::Logarithmic, support, options);
    if (polished.status == SolveStatus::Optimal && polished.objective <= out.report.objective) {
      polished.iterations += out.report.iterations;
      out.report = std::move(polished);
      out.polished = true;
    }
  }
  out.report.wall_time = seconds_since(start);
  return out;
}

}  // namespace spreadalloc
