#include "spreadalloc/allocation.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace spreadalloc;

namespace {

double total_cap(const SpreadingNetwork& net) {
  double total = 0.0;
  for (const auto& e : oracle::free_entries(net)) total += oracle::log_cap(net, e);
  return total;
}

double uncontrolled_risk(const SpreadingNetwork& net) {
  return oracle::max_risk(net, net.betas(), net.deltas());
}

// Recomputes the risk of a report from its recovered rates with the dense oracle.
double certified_risk(const SpreadingNetwork& net, const SolveReport& rep) {
  return oracle::max_risk(net, rep.beta, rep.delta);
}

double max_abs_diff(const Vector& a, const Vector& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("allocation") {
  TEST_CASE("node rows of the 2-node chain") {
    const auto net = fixture::pair(0.5, 0.2, 1.0, 2.0, 1.0);
    ProgramLayout layout;
    layout.y = {0, 1};
    layout.log_beta = {AffineExpr(std::log(0.5))};
    layout.log_recovery = {AffineExpr(std::log(0.8)), AffineExpr(std::log(0.8))};
    const double l2 = std::log(2.0);
    Eigen::VectorXd y(2);
    y << 0.3, -0.4;

    // node 0: recovery and cost terms only
    const auto row0 = build_node_constraint(net, 0, layout);
    REQUIRE(row0.size() == 2);
    CHECK(row0[0].evaluate(y) == doctest::Approx(std::log(0.8) - l2));
    CHECK(row0[1].evaluate(y) == doctest::Approx(-0.3 - l2));

    // node 1 spreads into node 0: exponent y0 + log beta - y1 - log(1 + r)
    const auto row1 = build_node_constraint(net, 1, layout);
    REQUIRE(row1.size() == 3);
    CHECK(row1[0].evaluate(y) == doctest::Approx(0.3 + std::log(0.5) + 0.4 - l2));
    CHECK(row1[2].evaluate(y) == doctest::Approx(std::log(2.0) + 0.4 - l2));

    // the row holds with equality at the true impact
    const Vector p = oracle::impact(net);
    y << std::log(p(0)), std::log(p(1));
    double sum = 0.0;
    for (const auto& z : row1) sum += std::exp(z.evaluate(y));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("zero-cost nodes contribute no cost term") {
    const auto net = fixture::pair(0.5, 0.2, 1.0, 0.0, 1.0);
    ProgramLayout layout;
    layout.y = {0, 1};
    layout.log_beta = {AffineExpr(std::log(0.5))};
    layout.log_recovery = {AffineExpr(std::log(0.8)), AffineExpr(std::log(0.8))};
    CHECK(build_node_constraint(net, 1, layout).size() == 2);
  }

  TEST_CASE("problem 1 with no budget reports the uncontrolled risk") {
    const auto net = fixture::line3();
    const auto rep = solve_problem1(net, 0.0, ResourceModel::Logarithmic);
    REQUIRE(rep.status == SolveStatus::Optimal);
    CHECK(std::exp(rep.objective) == doctest::Approx(uncontrolled_risk(net)).epsilon(1e-6));
    CHECK(rep.active.total() == 0);
    CHECK(rep.allocation.total() <= 1e-6);
  }

  TEST_CASE("problem 1 with a saturating budget reaches the best achievable risk") {
    const auto net = fixture::line3();
    const auto rep = solve_problem1(net, 2.0 * total_cap(net), ResourceModel::Logarithmic);
    REQUIRE(rep.status == SolveStatus::Optimal);
    CHECK(std::exp(rep.objective) == doctest::Approx(rep.min_achievable_risk).epsilon(1e-6));
    CHECK(rep.min_achievable_risk < uncontrolled_risk(net));
  }

  TEST_CASE("problem 1 matches the grid oracle on the 3-node line") {
    const auto net = fixture::line3();
    for (double budget : {0.5, 2.0, 5.0}) {
      const auto rep = solve_problem1(net, budget, ResourceModel::Logarithmic);
      REQUIRE(rep.status == SolveStatus::Optimal);
      const double grid = oracle::grid_min_risk(net, budget, 50, 3);
      CHECK(std::exp(rep.objective) <= grid * (1.0 + 1e-6));
      CHECK(std::exp(rep.objective) >= grid * 0.99);
    }
  }

  TEST_CASE("problem 2 matches the grid oracle on the 3-node line") {
    const auto net = fixture::line3();
    const double top = uncontrolled_risk(net);
    for (double frac : {0.8, 0.5, 0.3}) {
      const double gamma = frac * top;
      const auto rep = solve_problem2(net, gamma, ResourceModel::Logarithmic);
      REQUIRE(rep.status == SolveStatus::Optimal);
      const double grid = oracle::grid_min_investment(net, gamma, 50, 3);
      CHECK(rep.objective <= grid * (1.0 + 1e-6));
      CHECK(rep.objective >= grid * 0.99);
    }
  }

  TEST_CASE("random 3-node instances agree with the grid oracles") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 6; ++trial) {
      const auto net = oracle::random_small(rng, 3);
      if (oracle::free_entries(net).empty()) continue;
      const double budget = 0.4 * total_cap(net);
      const auto p1 = solve_problem1(net, budget, ResourceModel::Logarithmic);
      REQUIRE(p1.status == SolveStatus::Optimal);
      const double g1 = oracle::grid_min_risk(net, budget, 50, 3);
      CHECK(std::abs(std::exp(p1.objective) - g1) <= 0.01 * g1);

      const double gamma = 0.5 * (uncontrolled_risk(net) + p1.min_achievable_risk);
      const auto p2 = solve_problem2(net, gamma, ResourceModel::Logarithmic);
      REQUIRE(p2.status == SolveStatus::Optimal);
      const double g2 = oracle::grid_min_investment(net, gamma, 50, 3);
      CHECK(std::abs(p2.objective - g2) <= 0.01 * std::max(g2, 1e-6));
    }
  }

  TEST_CASE("problem 2 with a loose bound invests nothing") {
    const auto net = fixture::line3();
    const auto rep = solve_problem2(net, 2.0 * uncontrolled_risk(net), ResourceModel::Logarithmic);
    REQUIRE(rep.status == SolveStatus::Optimal);
    CHECK(rep.objective <= 1e-6);
    CHECK(rep.active.total() == 0);
  }

  TEST_CASE("problem 2 below the achievable risk is infeasible") {
    const auto net = fixture::line3();
    const auto full = solve_problem1(net, 2.0 * total_cap(net), ResourceModel::Logarithmic);
    const auto rep = solve_problem2(net, 0.5 * full.min_achievable_risk, ResourceModel::Logarithmic);
    CHECK(rep.status == SolveStatus::Infeasible);
    CHECK_FALSE(rep.message.empty());
  }

  TEST_CASE("returned solutions certify their objective") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 8; ++trial) {
      oracle::RandomNetOptions opt;
      opt.n = 6 + trial;
      opt.free_delta = trial % 2 == 0;
      const auto net = oracle::random_network(rng, opt);
      const auto model = trial % 3 == 0 ? ResourceModel::Inverse : ResourceModel::Logarithmic;
      const double budget = model == ResourceModel::Inverse ? 0.5 : 0.2 * total_cap(net);
      const auto p1 = solve_problem1(net, budget, model);
      REQUIRE(p1.status == SolveStatus::Optimal);
      CHECK(certified_risk(net, p1) <= std::exp(p1.objective) * (1.0 + 1e-6));
      CHECK(p1.risk.max_risk == doctest::Approx(certified_risk(net, p1)).epsilon(1e-9));
      const double gamma = 0.7 * uncontrolled_risk(net);
      const auto p2 = solve_problem2(net, gamma, model);
      if (p2.status != SolveStatus::Optimal) {
        CHECK(p2.min_achievable_risk > gamma);
        continue;
      }
      CHECK(certified_risk(net, p2) <= gamma * (1.0 + 1e-6));
    }
  }

  TEST_CASE("the budget is spent when it is binding") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 5; ++trial) {
      oracle::RandomNetOptions opt;
      opt.n = 8;
      const auto net = oracle::random_network(rng, opt);
      const double budget = 0.1 * total_cap(net);
      const auto rep = solve_problem1(net, budget, ResourceModel::Logarithmic);
      REQUIRE(rep.status == SolveStatus::Optimal);
      CHECK(std::abs(rep.allocation.total() - budget) <= 1e-6);
    }
  }

  TEST_CASE("risk falls with budget and cost falls with the risk bound") {
    std::mt19937_64 rng(47);
    oracle::RandomNetOptions opt;
    opt.n = 10;
    opt.free_delta = true;
    const auto net = oracle::random_network(rng, opt);
    double prev = kInf;
    for (double budget : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      const auto rep = solve_problem1(net, budget, ResourceModel::Logarithmic);
      REQUIRE(rep.status == SolveStatus::Optimal);
      CHECK(rep.objective <= prev + 1e-8);
      prev = rep.objective;
    }
    const double top = uncontrolled_risk(net);
    prev = kInf;
    for (double frac : {0.5, 0.6, 0.7, 0.85, 1.0}) {
      const auto rep = solve_problem2(net, frac * top, ResourceModel::Logarithmic);
      REQUIRE(rep.status == SolveStatus::Optimal);
      CHECK(rep.objective <= prev + 1e-8);
      prev = rep.objective;
    }
  }

  TEST_CASE("scaling every cost leaves the allocation unchanged") {
    // a tight gap: at the default tolerance the allocation is only accurate to about 1e-4
    AllocationOptions tight;
    tight.solver.gap_tolerance = 1e-12;
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 3; ++trial) {
      oracle::RandomNetOptions opt;
      opt.n = 12;
      opt.free_delta = true;
      const auto net = oracle::random_network(rng, opt);
      const auto scaled = net.with_costs(1000.0 * net.costs());
      const double budget = 0.15 * total_cap(net);
      const auto a = solve_problem1(net, budget, ResourceModel::Logarithmic, tight);
      const auto b = solve_problem1(scaled, budget, ResourceModel::Logarithmic, tight);
      REQUIRE(a.status == SolveStatus::Optimal);
      REQUIRE(b.status == SolveStatus::Optimal);
      CHECK(std::abs(b.objective - a.objective - std::log(1000.0)) <= 1e-8);
      CHECK(max_abs_diff(a.allocation.edge_investment, b.allocation.edge_investment) <= 1e-6);
      CHECK(max_abs_diff(a.allocation.node_investment, b.allocation.node_investment) <= 1e-6);
      CHECK(max_abs_diff(b.vars.y, a.vars.y.array() + std::log(1000.0)) <= 1e-6);
    }
  }

  TEST_CASE("inverse model solves and recovers consistent rates") {
    const auto net = fixture::line3();
    const auto rep = solve_problem1(net, 0.5, ResourceModel::Inverse);
    REQUIRE(rep.status == SolveStatus::Optimal);
    CHECK(rep.allocation.model == ResourceModel::Inverse);
    CHECK(rep.allocation.total() <= 0.5 + 1e-6);
    for (int k = 0; k < net.edge_count(); ++k) {
      const auto& e = net.edge(k).params;
      CHECK(rep.beta(k) >= e.beta_lo * (1.0 - 1e-9));
      CHECK(rep.beta(k) <= e.beta_hi * (1.0 + 1e-9));
      CHECK(invest_inverse(e, rep.beta(k)) == doctest::Approx(rep.allocation.edge_investment(k)).epsilon(1e-6));
    }
    CHECK(certified_risk(net, rep) <= std::exp(rep.objective) * (1.0 + 1e-6));
    CHECK(std::exp(rep.objective) < uncontrolled_risk(net));
  }

  TEST_CASE("masked solves leave unmasked entries untouched") {
    const auto net = fixture::line3();
    auto mask = EntryMask::none(net);
    mask.edges[1] = true;
    const auto rep = solve_problem1_masked(net, 1.0, ResourceModel::Logarithmic, mask);
    REQUIRE(rep.status == SolveStatus::Optimal);
    CHECK(rep.allocation.edge_investment(0) == 0.0);
    CHECK(rep.allocation.node_investment(0) == 0.0);
    CHECK(rep.allocation.edge_investment(1) == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("reweighted problem 2 on the 3-node line reaches a single edge") {
    const auto net = fixture::line3();
    const auto full = solve_problem1(net, 2.0 * total_cap(net), ResourceModel::Logarithmic);
    const double gamma = full.min_achievable_risk + 0.6 * (uncontrolled_risk(net) - full.min_achievable_risk);
    const auto rw = solve_problem2_reweighted(net, gamma);
    REQUIRE(rw.report.status == SolveStatus::Optimal);
    CHECK(oracle::min_support_size(net, gamma) == 1);
    CHECK(rw.report.active.total() == 1);
    CHECK(certified_risk(net, rw.report) <= gamma * (1.0 + 1e-6));
  }

  TEST_CASE("reweighting never loses to the l1 support or beats enumeration") {
    // the reweighted support is a heuristic: it may stop above the minimum,
    // but it is never worse than the plain l1 solution
    std::mt19937_64 rng(5);
    int improved = 0, reached_minimum = 0, cases = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const auto net = oracle::random_small(rng, 4);
      if (oracle::free_entries(net).size() < 2) continue;
      const auto full = solve_problem1(net, 2.0 * total_cap(net), ResourceModel::Logarithmic);
      const double top = uncontrolled_risk(net);
      for (double frac : {0.7, 0.4, 0.15}) {
        const double gamma = full.min_achievable_risk + frac * (top - full.min_achievable_risk);
        const auto rw = solve_problem2_reweighted(net, gamma);
        REQUIRE(rw.report.status == SolveStatus::Optimal);
        const int minimum = oracle::min_support_size(net, gamma);
        const int got = rw.report.active.total();
        const int l1 = rw.trace.front().active.total();
        CHECK(got >= minimum);
        CHECK(got <= l1);
        CHECK(certified_risk(net, rw.report) <= gamma * (1.0 + 1e-6));
        ++cases;
        improved += got < l1 ? 1 : 0;
        reached_minimum += got == minimum ? 1 : 0;
      }
    }
    CHECK(improved > 0);
    CHECK(2 * reached_minimum >= cases);
  }

  TEST_CASE("reweighted problem 2 stays put on a single-entry solution") {
    const SpreadingNetwork net({fixture::node(0.2, 1.0, 1.0, 0.7)}, {}, 1.0);
    const auto rw = solve_problem2_reweighted(net, 0.6);
    REQUIRE(rw.report.status == SolveStatus::Optimal);
    for (std::size_t k = 1; k < rw.trace.size(); ++k)
      CHECK(rw.trace[k].active.total() <= rw.trace[k - 1].active.total());
    CHECK(rw.report.active.total() == 1);
  }

  TEST_CASE("reweighted problem 1 count bounds") {
    const auto net = fixture::line3();
    const auto none = solve_problem1_reweighted(net, 0.0);
    REQUIRE(none.report.status == SolveStatus::Optimal);
    CHECK(none.report.allocation.total() <= 1e-6);
    CHECK(std::exp(none.report.objective) == doctest::Approx(uncontrolled_risk(net)).epsilon(1e-6));

    const auto all = solve_problem1_reweighted(net, 10.0);
    REQUIRE(all.report.status == SolveStatus::Optimal);
    CHECK(std::exp(all.report.objective) == doctest::Approx(all.report.min_achievable_risk).epsilon(1e-6));

    const auto one = solve_problem1_reweighted(net, 1.0);
    REQUIRE(one.report.status == SolveStatus::Optimal);
    CHECK(one.report.active.total() <= 1);
    CHECK(certified_risk(net, one.report) == doctest::Approx(oracle::best_single_entry_risk(net)).epsilon(1e-4));
  }

  TEST_CASE("minimum eigenvalue baseline") {
    using fixture::edge;
    using fixture::node;
    const SpreadingNetwork cycle({node(0.2, 1, 1), node(0.2, 1, 1)}, {edge(0, 1, 0.5, 0.05), edge(1, 0, 0.5, 0.05)}, 1.0);
    const auto zero = solve_min_eigenvalue(cycle, 0.0);
    REQUIRE(zero.status == SolveStatus::Optimal);
    CHECK(zero.objective == doctest::Approx(0.3).epsilon(1e-6));

    std::mt19937_64 rng(59);
    oracle::RandomNetOptions opt;
    opt.n = 8;
    opt.free_delta = true;
    const auto net = oracle::random_network(rng, opt);
    const auto base = solve_min_eigenvalue(net, 0.0);
    REQUIRE(base.status == SolveStatus::Optimal);
    CHECK(std::abs(base.objective - oracle::abscissa(net)) <= 1e-6);

    double prev = base.objective;
    for (double budget : {0.5, 1.0, 2.0, 4.0}) {
      const auto rep = solve_min_eigenvalue(net, budget);
      REQUIRE(rep.status == SolveStatus::Optimal);
      CHECK(rep.objective <= prev + 1e-7);
      CHECK(rep.eigenvalue == doctest::Approx(rep.objective).epsilon(1e-5));
      prev = rep.objective;
    }
  }

  TEST_CASE("status names") {
    CHECK(to_string(SolveStatus::Optimal) == "optimal");
    CHECK(to_string(SolveStatus::Infeasible) == "infeasible");
    CHECK(to_string(SolveStatus::SolverFailure) == "solver_failure");
  }
}
