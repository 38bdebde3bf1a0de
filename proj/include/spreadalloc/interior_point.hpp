#pragma once

#include "spreadalloc/cone_program.hpp"

namespace spreadalloc {

/// Native backend: a two-phase interior-point method.
///
/// Phase I follows the log-barrier central path of a uniform constraint
/// relaxation until a strictly interior point is found, or certifies
/// infeasibility through the barrier duality bound. The barrier uses
/// F_exp(a, b, c) = -log(b log(c/b) - a) - log b - log c, the standard
/// 3-self-concordant exponential-cone barrier.
///
/// Phase II is a primal-dual path-following method. Each cone membership
/// is the convex inequality a - b log(c/b) <= 0 with its own multiplier,
/// and the iteration reduces the modified KKT residual under a
/// surrogate-gap target. Newton systems are solved with a sparse LDL'
/// factorization. Linear rows with many nonzeros enter as a low-rank
/// Woodbury correction, and equality rows through a Schur complement.
/// Every returned iterate is strictly feasible.
///
/// The feasible region is assumed bounded; callers box every variable
/// that the constraints leave free.
class InteriorPointSolver : public ConeSolver {
 public:
  explicit InteriorPointSolver(SolverOptions options = {}) : options_(options) {}

  std::string name() const override { return "native-interior-point"; }
  ConeSolution solve(const ConeProgram& program,
                     const std::optional<Eigen::VectorXd>& start = std::nullopt) const override;

  const SolverOptions& options() const { return options_; }

 private:
  SolverOptions options_;
};

}  // namespace spreadalloc
