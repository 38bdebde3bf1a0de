#pragma once

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace spreadalloc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LinearTerm {
  int var = 0;
  double coeff = 0.0;
};

/// sum_k coeff_k * x[var_k] + constant
struct AffineExpr {
  std::vector<LinearTerm> terms;
  double constant = 0.0;

  AffineExpr() = default;
  explicit AffineExpr(double c) : constant(c) {}
  AffineExpr(std::vector<LinearTerm> t, double c) : terms(std::move(t)), constant(c) {}

  bool is_constant() const { return terms.empty(); }
  double evaluate(const Eigen::VectorXd& x) const;
};

enum class Sense { LessEqual, GreaterEqual, Equal };

struct LinearConstraint {
  std::vector<LinearTerm> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

/// (a, b, c) in the closure of {b > 0, b * exp(a / b) <= c}.
struct ExpConeConstraint {
  AffineExpr a;
  AffineExpr b;
  AffineExpr c;
};

/// Solver-agnostic conic program:
///
///   minimize    objective' x + objective_constant
///   subject to  lb <= x <= ub
///               linear rows (<=, >=, =)
///               exponential-cone memberships of affine triples.
class ConeProgram {
 public:
  int add_variable(std::string name, double lower = -kInf, double upper = kInf);
  int variable_count() const { return static_cast<int>(names_.size()); }

  void add_linear(std::vector<LinearTerm> terms, Sense sense, double rhs);
  void add_exp_cone(AffineExpr a, AffineExpr b, AffineExpr c);

  /// Encodes sum_k exp(z_k) <= bound with one auxiliary s_k per
  /// non-constant exponent: (z_k, 1, s_k) in the cone and sum_k s_k <= bound
  /// minus the constant terms. Returns the auxiliary variable indices.
  std::vector<int> add_log_sum_exp(const std::vector<AffineExpr>& exponents, double bound,
                                   const std::string& label);

  void set_objective(std::vector<LinearTerm> terms, double constant = 0.0);

  const std::vector<std::string>& names() const { return names_; }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  const std::vector<LinearConstraint>& linear() const { return linear_; }
  const std::vector<ExpConeConstraint>& cones() const { return cones_; }
  const Eigen::VectorXd& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }

  double evaluate_objective(const Eigen::VectorXd& x) const;

  /// Largest violation of any constraint at x (0 when feasible). Cone
  /// violation is measured as max(0, b*exp(a/b) - c) for b > 0.
  double max_violation(const Eigen::VectorXd& x) const;

 private:
  std::vector<std::string> names_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  std::vector<LinearConstraint> linear_;
  std::vector<ExpConeConstraint> cones_;
  Eigen::VectorXd objective_;
  double objective_constant_ = 0.0;
};

enum class ConeStatus { Optimal, Infeasible, IterationLimit, NumericalError };

std::string to_string(ConeStatus status);

struct ConeSolution {
  ConeStatus status = ConeStatus::NumericalError;
  Eigen::VectorXd primal;
  /// Multipliers of the linear rows in program order (>= 0 for inequalities).
  Eigen::VectorXd dual_linear;
  /// Dual cone points, three entries per cone constraint.
  Eigen::VectorXd dual_cone;
  double objective = 0.0;
  /// Upper bound on the optimality gap at the returned point.
  double gap = kInf;
  int iterations = 0;
  std::string message;
};

struct SolverOptions {
  /// Duality gap relative to max(1, |objective|), measured after objectives
  /// with coefficients above 1 are scaled to unit max-norm.
  double gap_tolerance = 1e-8;
  /// Dual residual relative to max(1, largest objective coefficient).
  double feasibility_tolerance = 1e-8;
  double centering_tolerance = 1e-10;
  double barrier_growth = 20.0;
  int max_iterations = 800;
  bool verbose = false;
};

/// Backend interface; a backend consumes the standard form and returns
/// status, primal and dual estimates.
class ConeSolver {
 public:
  virtual ~ConeSolver() = default;
  virtual std::string name() const = 0;
  virtual ConeSolution solve(const ConeProgram& program,
                             const std::optional<Eigen::VectorXd>& start = std::nullopt) const = 0;
};

}  // namespace spreadalloc
