// spreadalloc: impact, solve and sweep commands over scenario files.
//
// Exit codes: 0 optimal, 1 bad input, 2 infeasible (or unstable), 3 solver failure.

#include "spreadalloc/allocation.hpp"
#include "spreadalloc/impact.hpp"
#include "spreadalloc/report.hpp"
#include "spreadalloc/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace spreadalloc;

namespace {

constexpr int kExitOk = 0, kExitInput = 1, kExitInfeasible = 2, kExitFailure = 3;

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return kExitOk;
    case SolveStatus::Infeasible: return kExitInfeasible;
    case SolveStatus::SolverFailure: return kExitFailure;
  }
  return kExitFailure;
}

AllocationOptions options_for(const std::optional<SolveConfig>& cfg) {
  AllocationOptions opt;
  if (cfg) {
    opt.solver.gap_tolerance = cfg->gap_tolerance;
    opt.solver.feasibility_tolerance = cfg->feasibility_tolerance;
  }
  const char* env = std::getenv("SPREADALLOC_VERBOSE");
  opt.solver.verbose = env && *env && std::string(env) != "0";
  return opt;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

int cmd_impact(const Scenario& sc, const std::string& out_dir) {
  try {
    const auto p = impact_direct(sc.network);
    const auto r = risk(sc.network, p);
    if (out_dir.empty()) {
      write_impact_csv(std::cout, p, r);
    } else {
      fs::create_directories(out_dir);
      auto f = open_out(fs::path(out_dir) / "impact.csv");
      write_impact_csv(f, p, r);
    }
    std::cerr << "max_risk " << format_number(r.max_risk) << " at node " << r.argmax << "\n"
              << "total_risk " << format_number(r.total_risk) << "\n";
    return kExitOk;
  } catch (const StabilityError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInfeasible;
  }
}

struct Outcome {
  SolveReport report;
  std::optional<ReweightedReport> reweighted;
};

Outcome run(const SpreadingNetwork& net, const SolveConfig& cfg, const AllocationOptions& opt) {
  ReweightOptions rw;
  rw.max_iterations = cfg.reweighted.max_iters;
  rw.epsilon_fraction = cfg.reweighted.epsilon;
  if (cfg.problem == ProblemKind::MinRisk) {
    if (cfg.reweighted.enabled) {
      auto rep = solve_problem1_reweighted(net, cfg.reweighted.count_bound, rw, opt);
      return {rep.report, rep};
    }
    return {solve_problem1(net, *cfg.budget, cfg.model, opt), std::nullopt};
  }
  if (cfg.reweighted.enabled) {
    auto rep = solve_problem2_reweighted(net, *cfg.risk_bound, rw, opt);
    return {rep.report, rep};
  }
  return {solve_problem2(net, *cfg.risk_bound, cfg.model, opt), std::nullopt};
}

int cmd_solve(const Scenario& sc, const std::string& out_dir) {
  if (!sc.solve) {
    std::cerr << "error: scenario has no 'solve' section\n";
    return kExitInput;
  }
  const auto& cfg = *sc.solve;
  const auto opt = options_for(sc.solve);
  const Outcome res = run(sc.network, cfg, opt);

  SummaryExtras extras;
  extras.scenario = sc.name;
  extras.problem = cfg.problem == ProblemKind::MinRisk ? "1" : "2";
  extras.model = to_string(cfg.model);
  extras.budget = cfg.budget;
  extras.risk_bound = cfg.risk_bound;
  if (res.reweighted) extras.reweighted = &*res.reweighted;

  fs::create_directories(out_dir);
  {
    auto f = open_out(fs::path(out_dir) / "summary.json");
    write_solve_summary(f, sc.network, res.report, extras);
  }
  write_solve_summary(std::cout, sc.network, res.report, extras);
  if (res.report.status != SolveStatus::Optimal) {
    std::cerr << to_string(res.report.status) << ": " << res.report.message << "\n";
    return exit_code(res.report.status);
  }
  {
    auto f = open_out(fs::path(out_dir) / "allocation_edges.csv");
    write_edge_allocation_csv(f, sc.network, res.report, opt.active_fraction);
  }
  {
    auto f = open_out(fs::path(out_dir) / "allocation_nodes.csv");
    write_node_allocation_csv(f, sc.network, res.report, opt.active_fraction);
  }
  {
    auto f = open_out(fs::path(out_dir) / "map.svg");
    write_allocation_svg(f, sc.network, res.report, sc.landscape ? &*sc.landscape : nullptr,
                         opt.active_fraction);
  }
  if (!res.report.message.empty()) std::cerr << res.report.message << "\n";
  return kExitOk;
}

int cmd_sweep(const Scenario& sc, const std::string& param, const std::vector<double>& values) {
  SolveConfig cfg = sc.solve.value_or(SolveConfig{});
  const auto opt = options_for(sc.solve);
  cfg.budget.reset();
  cfg.risk_bound.reset();
  if (param == "budget") {
    cfg.problem = ProblemKind::MinRisk;
    cfg.reweighted.enabled = false;
  } else {
    cfg.problem = ProblemKind::MinInvestment;
    if (cfg.model != ResourceModel::Logarithmic) cfg.reweighted.enabled = false;
  }
  std::vector<SweepRow> rows;
  for (double v : values) {
    if (param == "budget") cfg.budget = v;
    else cfg.risk_bound = v;
    SweepRow row;
    row.value = v;
    try {
      const auto res = run(sc.network, cfg, opt);
      row.status = res.report.status;
      row.objective = res.report.objective;
      row.active_edges = res.report.active.edges;
      row.wall_time = res.report.wall_time;
      if (row.status != SolveStatus::Optimal)
        std::cerr << "value " << format_number(v) << ": " << res.report.message << "\n";
    } catch (const std::invalid_argument& err) {
      row.status = SolveStatus::Infeasible;
      std::cerr << "value " << format_number(v) << ": " << err.what() << "\n";
    }
    rows.push_back(row);
  }
  write_sweep_csv(std::cout, rows);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse resource allocation for spreading processes"};
  app.require_subcommand(1);

  std::string file, impact_dir, solve_dir = ".", param;
  std::vector<double> values;

  auto* impact = app.add_subcommand("impact", "node impact and risk as CSV");
  impact->add_option("file", file, "scenario JSON")->required()->check(CLI::ExistingFile);
  impact->add_option("--out", impact_dir, "write impact.csv into this directory instead of stdout");

  auto* solve = app.add_subcommand("solve", "solve the scenario's allocation problem");
  solve->add_option("file", file, "scenario JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", solve_dir, "output directory (default: current)");

  auto* sweep = app.add_subcommand("sweep", "objective over a list of budgets or risk bounds");
  sweep->add_option("file", file, "scenario JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "budget or risk_bound")
      ->required()
      ->check(CLI::IsMember({"budget", "risk_bound"}));
  sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    const Scenario sc = load_scenario(file);
    if (impact->parsed()) return cmd_impact(sc, impact_dir);
    if (solve->parsed()) return cmd_solve(sc, solve_dir);
    return cmd_sweep(sc, param, values);
  } catch (const ScenarioError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitFailure;
  }
}
