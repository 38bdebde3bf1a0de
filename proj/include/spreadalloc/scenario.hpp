#pragma once

#include "spreadalloc/network.hpp"
#include "spreadalloc/resource_models.hpp"
#include "spreadalloc/wildfire.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace spreadalloc {

/// Malformed or inconsistent scenario document.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ProblemKind { MinRisk = 1, MinInvestment = 2 };

struct ReweightConfig {
  bool enabled = false;
  int max_iters = 10;
  double epsilon = 1e-6;  // fraction of each entry's cap
  double count_bound = 0.0;  // problem 1 only
};

struct SolveConfig {
  ProblemKind problem = ProblemKind::MinRisk;
  ResourceModel model = ResourceModel::Logarithmic;
  std::optional<double> budget;
  std::optional<double> risk_bound;
  ReweightConfig reweighted;
  double gap_tolerance = 1e-8;
  double feasibility_tolerance = 1e-8;
};

struct Scenario {
  std::string name;
  long long seed = 0;
  std::optional<Landscape> landscape;
  SpreadingNetwork network;
  std::optional<SolveConfig> solve;
};

/// Validates the whole document (unknown keys are errors) and builds the network.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace spreadalloc
