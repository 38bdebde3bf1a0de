#include "spreadalloc/report.hpp"
#include "spreadalloc/scenario.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

using namespace spreadalloc;

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("numbers carry 12 significant digits") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(123456789.123456) == "123456789.123");
    CHECK(std::stod(format_number(2.0 / 3.0e-9)) == doctest::Approx(2.0 / 3.0e-9).epsilon(1e-12));
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(kInf) == "inf");
  }

  TEST_CASE("edge allocation CSV round-trips the recovered rates") {
    const auto sc = load_scenario(fixture::scenario_dir() / "three_node.json");
    const auto rep = solve_problem2(sc.network, *sc.solve->risk_bound, ResourceModel::Logarithmic);
    REQUIRE(rep.status == SolveStatus::Optimal);
    std::ostringstream out;
    write_edge_allocation_csv(out, sc.network, rep);
    const auto rows = read_csv(out.str());
    REQUIRE(rows.size() == static_cast<std::size_t>(rep.active.edges + 1));
    CHECK(rows[0] == std::vector<std::string>{"i", "j", "u", "beta_before", "beta_after"});
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const int i = std::stoi(rows[r][0]), j = std::stoi(rows[r][1]);
      int k = -1;
      for (int e = 0; e < sc.network.edge_count(); ++e)
        if (sc.network.edge(e).target == i && sc.network.edge(e).source == j) k = e;
      REQUIRE(k >= 0);
      CHECK(std::stod(rows[r][3]) == sc.network.edge(k).params.beta);
      CHECK(std::stod(rows[r][4]) == doctest::Approx(rep.beta(k)).epsilon(1e-11));
      CHECK(std::stod(rows[r][2]) == doctest::Approx(rep.allocation.edge_investment(k)).epsilon(1e-11));
    }

    std::ostringstream nodes;
    write_node_allocation_csv(nodes, sc.network, rep);
    const auto node_rows = read_csv(nodes.str());
    CHECK(node_rows[0] == std::vector<std::string>{"i", "v", "delta_before", "delta_after"});
    CHECK(node_rows.size() == static_cast<std::size_t>(rep.active.nodes + 1));
  }

  TEST_CASE("no investment gives a header-only CSV") {
    const auto sc = load_scenario(fixture::scenario_dir() / "two_node.json");
    const auto rep = solve_problem1(sc.network, 0.0, ResourceModel::Logarithmic);
    std::ostringstream out;
    write_edge_allocation_csv(out, sc.network, rep);
    CHECK(out.str() == "i,j,u,beta_before,beta_after\n");
  }

  TEST_CASE("impact CSV and sweep CSV layout") {
    const auto net = fixture::single(0.2, 1.0, 0.5, 3.5);
    const auto p = impact_direct(net);
    std::ostringstream out;
    write_impact_csv(out, p, risk(net, p));
    CHECK(out.str() == "i,p,risk\n0," + format_number(1.0 / 3.7) + "," + format_number(0.5 / 3.7) + "\n");

    std::ostringstream sweep;
    write_sweep_csv(sweep, {{0.0, SolveStatus::Optimal, -1.5, 0, 0.25}, {1.0, SolveStatus::Infeasible, kNaN, 0, 0.5}});
    const auto rows = read_csv(sweep.str());
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"value", "status", "objective", "active_edges", "wall_time"});
    CHECK(rows[1][1] == "optimal");
    CHECK(rows[2][1] == "infeasible");
    CHECK(rows[2][2].empty());
    CHECK(rows[2][3].empty());
    CHECK(rows[1][2] == "-1.5");
  }

  TEST_CASE("summary and map are deterministic") {
    const auto sc = load_scenario(fixture::scenario_dir() / "three_node.json");
    std::string first_summary, first_map;
    for (int run = 0; run < 2; ++run) {
      auto rep = solve_problem2(sc.network, *sc.solve->risk_bound, ResourceModel::Logarithmic);
      rep.wall_time = 0.0;
      std::ostringstream summary, map;
      write_solve_summary(summary, sc.network, rep, {"three", "2", "log", std::nullopt, 0.15, nullptr});
      write_allocation_svg(map, sc.network, rep, nullptr);
      if (run == 0) {
        first_summary = summary.str();
        first_map = map.str();
      } else {
        CHECK(summary.str() == first_summary);
        CHECK(map.str() == first_map);
      }
    }
    CHECK(first_summary.find("\"status\": \"optimal\"") != std::string::npos);
    CHECK(first_map.rfind("<svg", 0) == 0);
  }
}
