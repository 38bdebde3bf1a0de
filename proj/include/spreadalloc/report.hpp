#pragma once

#include "spreadalloc/allocation.hpp"
#include "spreadalloc/impact.hpp"
#include "spreadalloc/wildfire.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace spreadalloc {

/// 12 significant digits, shortest of fixed/scientific ("nan", "inf" verbatim).
std::string format_number(double value);

/// Columns i, p, risk.
void write_impact_csv(std::ostream& out, const ImpactVector& impact, const RiskVector& risk);

/// Active edges only. Columns i, j, u, beta_before, beta_after where the
/// edge carries spread from j to i.
void write_edge_allocation_csv(std::ostream& out, const SpreadingNetwork& net,
                               const SolveReport& report, double active_fraction = kActiveFraction);

/// Active nodes only. Columns i, v, delta_before, delta_after.
void write_node_allocation_csv(std::ostream& out, const SpreadingNetwork& net,
                               const SolveReport& report, double active_fraction = kActiveFraction);

struct SummaryExtras {
  std::string scenario;
  std::string problem;
  std::string model;
  std::optional<double> budget;
  std::optional<double> risk_bound;
  const ReweightedReport* reweighted = nullptr;
};

/// Pretty-printed JSON summary of a solve.
void write_solve_summary(std::ostream& out, const SpreadingNetwork& net, const SolveReport& report,
                         const SummaryExtras& extras);

struct SweepRow {
  double value = 0.0;
  SolveStatus status = SolveStatus::SolverFailure;
  double objective = kNaN;
  int active_edges = 0;
  double wall_time = 0.0;
};

/// Columns value, status, objective, active_edges, wall_time.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Map of the allocation: grid cells filled by type when a landscape is
/// given (nodes on a circle otherwise), active edges as segments coloured
/// blue to red by u / cap, legend included.
void write_allocation_svg(std::ostream& out, const SpreadingNetwork& net, const SolveReport& report,
                          const Landscape* landscape, double active_fraction = kActiveFraction);

}  // namespace spreadalloc
