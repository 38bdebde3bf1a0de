#include "spreadalloc/impact.hpp"
#include "spreadalloc/scenario.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace spreadalloc;

namespace {

SpreadingNetwork with_likelihoods(const SpreadingNetwork& net, const Vector& x0) {
  auto nodes = net.nodes();
  for (int i = 0; i < net.size(); ++i) nodes[static_cast<std::size_t>(i)].likelihood = x0(i);
  return SpreadingNetwork(nodes, net.edges(), net.discount_rate());
}

double relative_deviation(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace

TEST_SUITE("impact-risk") {
  TEST_CASE("stability of a single node has margin r + delta") {
    const auto rep = check_discount_stability(fixture::single(0.2, 1.0, 1.0, 3.5));
    CHECK(rep.stable);
    CHECK(rep.abscissa == doctest::Approx(-0.2));
    CHECK(rep.margin == doctest::Approx(3.7));
  }

  TEST_CASE("fast 2-node cycle is unstable") {
    using fixture::edge;
    using fixture::node;
    const SpreadingNetwork net({node(0.2, 1, 1), node(0.2, 1, 1)}, {edge(0, 1, 5.0), edge(1, 0, 5.0)}, 3.5);
    const auto rep = check_discount_stability(net);
    CHECK_FALSE(rep.stable);
    CHECK(rep.abscissa == doctest::Approx(4.8));
    CHECK_THROWS_AS(impact_direct(net), StabilityError);
  }

  TEST_CASE("bundled analogue landscape is stable at r = 3.5") {
    const auto rep = check_discount_stability(load_scenario(fixture::scenario_dir() / "analogue_p1.json").network);
    CHECK(rep.stable);
    CHECK(rep.dense);
  }

  TEST_CASE("large networks use power iteration") {
    const int n = kDenseEigenLimit + 100;
    std::vector<NodeParams> nodes(static_cast<std::size_t>(n), fixture::node(0.3, 1.0, 0.5));
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back(fixture::edge((i + 1) % n, i, 0.7));
    const SpreadingNetwork ring(nodes, edges, 1.0);
    const auto rep = check_discount_stability(ring);
    CHECK_FALSE(rep.dense);
    CHECK(rep.abscissa == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(rep.stable);
  }

  TEST_CASE("single node impact is c / (r + delta)") {
    const auto p = impact_direct(fixture::single(0.2, 1.0, 1.0, 3.5));
    CHECK(p.values(0) == doctest::Approx(1.0 / 3.7).epsilon(1e-14));
  }

  TEST_CASE("2-node chain by back-substitution") {
    const auto net = fixture::pair(0.5, 0.2, 1.0, 0.0);
    const auto p = impact_direct(net);
    const double p0 = 1.0 / 3.7;
    CHECK(p.values(0) == doctest::Approx(p0).epsilon(1e-14));
    CHECK(p.values(1) == doctest::Approx(0.5 * p0 / 3.7).epsilon(1e-14));
    CHECK(p.values(1) == doctest::Approx(0.03652300949).epsilon(1e-9));
  }

  TEST_CASE("zero cost gives zero impact") {
    std::mt19937_64 rng(1);
    oracle::RandomNetOptions opt;
    opt.n = 12;
    const auto net = oracle::random_network(rng, opt).with_costs(Vector::Zero(12));
    CHECK(impact_direct(net).values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(impact_lp(net).values.cwiseAbs().maxCoeff() < 1e-9);
  }

  TEST_CASE("diagonal networks follow the closed form exactly") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<NodeParams> nodes;
      for (int i = 0; i < 10; ++i) nodes.push_back(fixture::node(0.05 + 0.9 * unit(rng), 5.0 * unit(rng), unit(rng)));
      const double r = 0.1 + 4.0 * unit(rng);
      const SpreadingNetwork net(nodes, {}, r);
      const auto p = impact_direct(net);
      for (int i = 0; i < 10; ++i)
        CHECK(std::abs(p.values(i) - nodes[static_cast<std::size_t>(i)].cost / (r + nodes[static_cast<std::size_t>(i)].delta)) <= 1e-12);
    }
  }

  TEST_CASE("direct solve matches the dense LU oracle") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
      oracle::RandomNetOptions opt;
      opt.n = 5 + 2 * trial;
      const auto net = oracle::random_network(rng, opt);
      CHECK(relative_deviation(impact_direct(net).values, oracle::impact(net)) < 1e-12);
    }
  }

  TEST_CASE("LP impact on a single node") {
    const auto p = impact_lp(fixture::single(0.2, 1.0, 1.0, 3.5));
    CHECK(p.values(0) == doctest::Approx(1.0 / 3.7).epsilon(1e-8));
  }

  TEST_CASE("LP impact matches the direct solve on a random 20-node net") {
    std::mt19937_64 rng(20);
    oracle::RandomNetOptions opt;
    opt.n = 20;
    const auto net = oracle::random_network(rng, opt);
    CHECK(relative_deviation(impact_lp(net).values, impact_direct(net).values) <= 1e-6);
  }

  TEST_CASE("impact is monotone in every rate") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    oracle::RandomNetOptions opt;
    opt.n = 12;
    opt.free_delta = true;
    for (int trial = 0; trial < 60; ++trial) {
      const auto net = oracle::random_network(rng, opt);
      const Vector p = impact_direct(net).values;
      Vector beta = net.betas(), delta = net.deltas();
      if (net.edge_count() > 0 && unit(rng) < 0.5) {
        const int k = static_cast<int>(unit(rng) * net.edge_count());
        beta(k) *= unit(rng);
      } else {
        const int i = static_cast<int>(unit(rng) * net.size());
        delta(i) += (0.99 - delta(i)) * unit(rng);
      }
      const Vector q = oracle::impact(net, beta, delta, net.costs());
      CHECK((q - p).maxCoeff() <= 1e-10);
    }
  }

  TEST_CASE("impact and risk are nonnegative") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
      oracle::RandomNetOptions opt;
      opt.n = 15;
      const auto net = oracle::random_network(rng, opt);
      const auto p = impact_direct(net);
      CHECK(p.values.minCoeff() >= 0.0);
      CHECK(risk(net, p).values.minCoeff() >= 0.0);
    }
  }

  TEST_CASE("risk weights impact by likelihood") {
    const auto net = fixture::pair(0.5, 0.2, 1.0, 0.0);
    Vector x0(2);
    x0 << 0.5, 1.0;
    const auto weighted = with_likelihoods(net, x0);
    const auto r = risk(weighted, impact_direct(weighted));
    CHECK(r.values(0) == doctest::Approx(0.5 / 3.7).epsilon(1e-14));
    CHECK(r.values(1) == doctest::Approx(0.5 / 3.7 / 3.7).epsilon(1e-14));
    CHECK(r.max_risk == doctest::Approx(0.13513513514).epsilon(1e-10));
    CHECK(r.argmax == 0);

    const auto none = with_likelihoods(net, Vector::Zero(2));
    const auto zero = risk(none, impact_direct(none));
    CHECK(zero.max_risk == 0.0);
    CHECK(zero.values.cwiseAbs().maxCoeff() == 0.0);

    const auto ones = with_likelihoods(net, Vector::Ones(2));
    const auto p = impact_direct(ones);
    CHECK((risk(ones, p).values - p.values).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("dominant eigenvalue") {
    CHECK(dominant_eigenvalue(fixture::single(0.2, 1.0, 1.0, 3.5)) == doctest::Approx(-0.2));
    using fixture::edge;
    using fixture::node;
    const SpreadingNetwork cycle({node(0.2, 1, 1), node(0.2, 1, 1)}, {edge(0, 1, 0.5), edge(1, 0, 0.5)}, 1.0);
    CHECK(dominant_eigenvalue(cycle) == doctest::Approx(0.3).epsilon(1e-12));
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
      oracle::RandomNetOptions opt;
      opt.n = 5 + 4 * trial;
      const auto net = oracle::random_network(rng, opt);
      CHECK(std::abs(dominant_eigenvalue(net) - oracle::abscissa(net)) <= 1e-8);
    }
  }
}
