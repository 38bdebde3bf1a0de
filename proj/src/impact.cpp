#include "spreadalloc/impact.hpp"

#include "spreadalloc/interior_point.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spreadalloc {

namespace {

constexpr double kStabilityTolerance = 1e-9;

double power_abscissa(const SpreadingNetwork& net, int* iterations) {
  // A + I is nonnegative because every delta < 1.
  const int n = net.size();
  SparseMatrix shifted = build_state_matrix(net);
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) += 1.0;
  Vector x = Vector::Ones(n);
  constexpr int kMaxIterations = 200000;
  for (int it = 1; it <= kMaxIterations; ++it) {
    Vector y = shifted * x;
    const Vector ratio = y.array() / x.array();
    const double lo = ratio.minCoeff(), hi = ratio.maxCoeff();
    if (hi - lo <= 1e-10 * std::max(1.0, hi)) {
      if (iterations) *iterations = it;
      return 0.5 * (lo + hi) - 1.0;
    }
    // keep x strictly positive for the Collatz-Wielandt bracket
    y = y.cwiseMax(1e-300 * y.maxCoeff());
    x = y / y.maxCoeff();
  }
  throw ConvergenceError("power iteration for the spectral abscissa did not converge after " +
                             std::to_string(kMaxIterations) + " iterations",
                         kMaxIterations);
}

}  // namespace

double spectral_abscissa(const SpreadingNetwork& net, int* iterations, bool* dense) {
  if (net.size() <= kDenseEigenLimit) {
    if (dense) *dense = true;
    if (iterations) *iterations = 0;
    Eigen::EigenSolver<Matrix> solver(dense_state_matrix(net), false);
    if (solver.info() != Eigen::Success)
      throw ConvergenceError("dense eigensolver failed", 0);
    return solver.eigenvalues().real().maxCoeff();
  }
  if (dense) *dense = false;
  return power_abscissa(net, iterations);
}

StabilityReport check_discount_stability(const SpreadingNetwork& net) {
  StabilityReport rep;
  rep.abscissa = spectral_abscissa(net, &rep.iterations, &rep.dense);
  rep.margin = net.discount_rate() - rep.abscissa;
  rep.stable = rep.margin > kStabilityTolerance;
  return rep;
}

ImpactVector impact_direct(const SpreadingNetwork& net) {
  const int n = net.size();
  SparseMatrix system = -build_state_matrix(net);
  for (int i = 0; i < n; ++i) system.coeffRef(i, i) += net.discount_rate();
  const SparseMatrix transposed = system.transpose();

  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(transposed);
  const auto unstable = [&](const std::string& why) {
    const auto rep = check_discount_stability(net);
    std::ostringstream os;
    os << "impact is unbounded (" << why << "); stability margin r - alpha(A) = " << rep.margin;
    return StabilityError(os.str(), rep.margin);
  };
  if (lu.info() != Eigen::Success) throw unstable("singular system");

  Matrix both(n, 2);
  both.col(0) = net.costs();
  both.col(1) = Vector::Ones(n);
  const Matrix sol = lu.solve(both);
  if (lu.info() != Eigen::Success || !sol.allFinite()) throw unstable("solve failed");
  if (!(sol.col(1).array() > 0.0).all()) throw unstable("rI - A is not an M-matrix");
  return {sol.col(0).cwiseMax(0.0)};
}

ImpactVector impact_lp(const SpreadingNetwork& net, const ConeSolver* solver) {
  const int n = net.size();
  const Vector c = net.costs();
  const double r = net.discount_rate();
  // The barrier method needs a bounded region; p_i <= cap is far from any
  // optimum of interest and is checked after the solve.
  const double cap = 1e9 * std::max(1.0, c.maxCoeff()) / r;

  ConeProgram lp;
  std::vector<LinearTerm> objective;
  for (int i = 0; i < n; ++i) {
    lp.add_variable("p" + std::to_string(i), 0.0, cap);
    objective.push_back({i, 1.0});
  }
  for (int j = 0; j < n; ++j) {
    // column j of p'(rI - A) >= c_j
    std::vector<LinearTerm> row{{j, r + net.node(j).delta}};
    for (int k : net.out_edges()[static_cast<std::size_t>(j)])
      row.push_back({net.edge(k).target, -net.edge(k).params.beta});
    lp.add_linear(std::move(row), Sense::GreaterEqual, c(j));
  }
  lp.set_objective(std::move(objective));

  SolverOptions opt;
  opt.gap_tolerance = 1e-10;
  const InteriorPointSolver native(opt);
  const ConeSolver& backend = solver ? *solver : native;
  const ConeSolution sol = backend.solve(lp);
  if (sol.status == ConeStatus::Infeasible)
    throw StabilityError("impact LP is infeasible: " + sol.message,
                         check_discount_stability(net).margin);
  if (sol.status != ConeStatus::Optimal)
    throw std::runtime_error("impact LP backend failure: " + to_string(sol.status) + " " +
                             sol.message);
  if (sol.primal.maxCoeff() > 0.5 * cap)
    throw StabilityError("impact LP solution reaches the artificial cap",
                         check_discount_stability(net).margin);
  return {sol.primal.cwiseMax(0.0)};
}

RiskVector risk(const SpreadingNetwork& net, const ImpactVector& impact) {
  RiskVector out;
  out.values = net.likelihoods().cwiseProduct(impact.values);
  out.total_risk = out.values.sum();
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    if (out.argmax < 0 || out.values(i) > out.max_risk) {
      out.max_risk = out.values(i);
      out.argmax = static_cast<int>(i);
    }
  }
  return out;
}

double dominant_eigenvalue(const SpreadingNetwork& net) { return spectral_abscissa(net); }

}  // namespace spreadalloc
