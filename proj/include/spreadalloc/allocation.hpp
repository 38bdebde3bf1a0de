#pragma once

#include "spreadalloc/cone_program.hpp"
#include "spreadalloc/impact.hpp"
#include "spreadalloc/network.hpp"
#include "spreadalloc/resource_models.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace spreadalloc {

// Allocation problems in log coordinates y = log p. For every node j the
// impact constraint  p'(rI - A) >= C  (column j) is the posynomial row
//
//   sum_{i <- j} p_i beta_ij / (p_j (1+r)) + (1 - delta_j)/(1+r) + c_j / (p_j (1+r)) <= 1
//
// which becomes a log-sum-exp row in (y, log beta, log(1 - delta)). Under the
// logarithmic resource model log beta = log beta_hi - u / w and
// log(1 - delta) = log(1 - delta_lo) - v / w are affine in the investments.

enum class SolveStatus { Optimal, Infeasible, SolverFailure };

std::string to_string(SolveStatus status);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Lower clamp for y: keeps zero-cost nodes without in-flow bounded.
inline const double kLogImpactFloor = std::log(1e-300);
inline constexpr double kLogImpactCeiling = 700.0;

struct TransformedVars {
  Vector y;
  Vector u;
  Vector v;
  double t = kNaN;
};

struct SolveReport {
  SolveStatus status = SolveStatus::SolverFailure;
  std::string message;
  /// Problem 1: log of the minimized max risk. Problem 2: total investment.
  /// Eigenvalue baseline: the minimized dominant eigenvalue.
  double objective = kNaN;
  TransformedVars vars;
  Allocation allocation;
  Vector beta;
  Vector delta;
  /// Recomputed with impact_direct on the recovered rates (empty if unstable).
  ImpactVector impact;
  RiskVector risk;
  ActiveCount active;
  /// Dominant eigenvalue of the recovered state matrix.
  double eigenvalue = kNaN;
  /// Max risk when every rate sits at its most favourable bound.
  double min_achievable_risk = kNaN;
  int iterations = 0;
  double wall_time = 0.0;
};

struct AllocationOptions {
  SolverOptions solver;
  /// Backend override; the native barrier solver when null.
  const ConeSolver* backend = nullptr;
  double active_fraction = kActiveFraction;
  double certificate_tolerance = 1e-6;
};

/// Affine handles of the decision quantities inside a ConeProgram.
struct ProgramLayout {
  std::vector<int> y;                    // log impact per node
  std::vector<AffineExpr> log_beta;      // per edge
  std::vector<AffineExpr> log_recovery;  // log(1 - delta) per node
  std::vector<AffineExpr> edge_cost;     // investment per edge
  std::vector<AffineExpr> node_cost;     // investment per node
  int t = -1;                            // max-risk epigraph variable
  int log_lambda = -1;                   // eigenvalue epigraph variable
};

/// Exponents of node j's impact row (terms summing to at most 1): one per
/// out-edge j -> i, one for recovery and one for cost when c_j > 0.
std::vector<AffineExpr> build_node_constraint(const SpreadingNetwork& net, int j,
                                              const ProgramLayout& layout);

/// Which entries may receive investment; the rest stay at zero.
struct EntryMask {
  std::vector<bool> edges;
  std::vector<bool> nodes;
  static EntryMask all(const SpreadingNetwork& net);
  static EntryMask none(const SpreadingNetwork& net);
};

/// Problem 1: minimize max(x0 .* p) subject to total investment <= budget.
SolveReport solve_problem1(const SpreadingNetwork& net, double budget, ResourceModel model,
                           const AllocationOptions& options = {});

/// Problem 2: minimize total investment subject to max(x0 .* p) <= risk_bound.
SolveReport solve_problem2(const SpreadingNetwork& net, double risk_bound, ResourceModel model,
                           const AllocationOptions& options = {});

struct ReweightOptions {
  int max_iterations = 10;
  /// epsilon = fraction * per-entry cap
  double epsilon_fraction = 1e-6;
  /// Re-solve on the selected support with the plain objective.
  bool polish = true;
};

struct IterationRecord {
  int iteration = 0;
  SolveStatus status = SolveStatus::SolverFailure;
  double surrogate = kNaN;  // h^k at the iterate
  double total_investment = kNaN;
  double max_risk = kNaN;
  ActiveCount active;
};

struct ReweightedReport {
  SolveReport report;
  std::vector<IterationRecord> trace;
  int selected = -1;  // trace index the support came from
  bool polished = false;
};

/// Problem 2 with the reweighted l1 objective sum u^k / (u^{k-1} + eps);
/// iteration 0 is the plain l1 problem. Returns the feasible iterate with
/// the fewest active entries.
ReweightedReport solve_problem2_reweighted(const SpreadingNetwork& net, double risk_bound,
                                           const ReweightOptions& reweight = {},
                                           const AllocationOptions& options = {});

/// Problem 1 with the budget row replaced by the count surrogate h^k <= M.
/// The first surrogate weights every entry by 1 / (cap + eps).
ReweightedReport solve_problem1_reweighted(const SpreadingNetwork& net, double count_bound,
                                           const ReweightOptions& reweight = {},
                                           const AllocationOptions& options = {});

/// Baseline: minimize the dominant eigenvalue of A under the logarithmic
/// budget, through the Perron-Frobenius epigraph of A + I.
SolveReport solve_min_eigenvalue(const SpreadingNetwork& net, double budget,
                                 const AllocationOptions& options = {});

/// Problem 1 / Problem 2 restricted to a support (entries outside stay at
/// zero). Weights scale each entry's cost in the budget or objective.
SolveReport solve_problem1_masked(const SpreadingNetwork& net, std::optional<double> budget,
                                  ResourceModel model, const EntryMask& mask,
                                  const AllocationOptions& options = {},
                                  const Vector* edge_weights = nullptr,
                                  const Vector* node_weights = nullptr);
SolveReport solve_problem2_masked(const SpreadingNetwork& net, double risk_bound,
                                  ResourceModel model, const EntryMask& mask,
                                  const AllocationOptions& options = {},
                                  const Vector* edge_weights = nullptr,
                                  const Vector* node_weights = nullptr);

}  // namespace spreadalloc
