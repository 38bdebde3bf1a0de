#include "spreadalloc/scenario.hpp"
#include "spreadalloc/wildfire.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <string>

using namespace spreadalloc;

namespace {

Landscape grid(int rows, int cols, const std::string& codes, Wind wind = {}) {
  Landscape land;
  land.rows = rows;
  land.cols = cols;
  for (char ch : codes) land.cells.push_back(parse_cell(ch));
  land.wind = wind;
  land.likelihood = Vector::Constant(rows * cols, 0.5);
  return land;
}

// Rate of the edge carrying spread from source to target, or -1 when absent.
double rate(const SpreadingNetwork& net, int target, int source) {
  for (const auto& e : net.edges())
    if (e.target == target && e.source == source) return e.params.beta;
  return -1.0;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_SUITE("wildfire") {
  TEST_CASE("cell codes") {
    CHECK(parse_cell('D') == CellType::Desert);
    CHECK(parse_cell('G') == CellType::Grassland);
    CHECK(parse_cell('E') == CellType::EucalyptForest);
    CHECK(parse_cell('C') == CellType::City);
    CHECK(parse_cell('W') == CellType::Water);
    CHECK_THROWS_AS(parse_cell('X'), std::invalid_argument);
    for (char ch : std::string("DGECW")) CHECK(cell_code(parse_cell(ch)) == ch);
  }

  TEST_CASE("vegetation factors") {
    CHECK(vegetation_factor(CellType::Desert) == 0.1);
    CHECK(vegetation_factor(CellType::Grassland) == 1.0);
    CHECK(vegetation_factor(CellType::EucalyptForest) == 1.4);
    CHECK(vegetation_factor(CellType::City) == 1.0);
    CHECK_THROWS_AS(vegetation_factor(CellType::Water), std::invalid_argument);
  }

  TEST_CASE("wind factor") {
    CHECK(wind_factor(0.3, Wind{0.0, 1.0}) == 1.0);
    // wind from the north travels south (bearing pi)
    const Wind north{4.0, 0.0};
    CHECK(wind_factor(kPi, north) == doctest::Approx(std::exp(0.045 * 4.0)).epsilon(1e-14));
    CHECK(wind_factor(0.0, north) == doctest::Approx(std::exp(0.045 * 4.0 - 2.0 * 4.0 * 0.131)).epsilon(1e-14));
    CHECK(wind_factor(kPi / 2.0, north) == doctest::Approx(std::exp(0.045 * 4.0 - 4.0 * 0.131)).epsilon(1e-14));
    for (double bearing = 0.0; bearing < 2.0 * kPi; bearing += 0.1) {
      CHECK(wind_factor(bearing, north) <= wind_factor(kPi, north) + 1e-15);
      CHECK(wind_factor(bearing, north) >= wind_factor(0.0, north) - 1e-15);
    }
    CHECK_THROWS(wind_factor(0.0, Wind{-1.0, 0.0}));
  }

  TEST_CASE("2x2 grassland without wind") {
    const auto net = compile(grid(2, 2, "GGGG"));
    CHECK(net.size() == 4);
    CHECK(net.edge_count() == 12);
    CHECK(rate(net, 1, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rate(net, 2, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rate(net, 3, 0) == doctest::Approx(0.5 * 0.785).epsilon(1e-15));
    for (const auto& e : net.edges()) {
      CHECK(e.params.beta_hi == e.params.beta);
      CHECK(e.params.beta_lo == 1e-4);
      CHECK(rate(net, e.source, e.target) == doctest::Approx(e.params.beta).epsilon(1e-15));
    }
    for (int i = 0; i < 4; ++i) {
      CHECK(net.node(i).delta == 0.2);
      CHECK(net.node(i).cost == 0.01);
      CHECK(net.node(i).likelihood == 0.5);
    }
    CHECK(net.discount_rate() == 3.5);
  }

  TEST_CASE("water blocks spread") {
    CHECK(compile(grid(2, 3, "WWWWWW")).edge_count() == 0);
    // a water column splits the grid in two
    const auto net = compile(grid(2, 3, "GWGGWG"));
    CHECK(net.edge_count() == 4);
    for (const auto& e : net.edges()) CHECK(std::abs(e.source % 3 - e.target % 3) == 0);
  }

  TEST_CASE("source vegetation scales outgoing rates") {
    const auto net = compile(grid(1, 3, "DGE"));
    CHECK(rate(net, 1, 0) == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(rate(net, 0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rate(net, 1, 2) == doctest::Approx(0.7).epsilon(1e-15));
  }

  TEST_CASE("cities carry the high cost") {
    const auto net = compile(grid(1, 2, "CG"));
    CHECK(net.node(0).cost == 1.0);
    CHECK(net.node(1).cost == 0.01);
  }

  TEST_CASE("downwind spread is fastest") {
    // wind from the west blows east
    const auto net = compile(grid(3, 3, "GGGGGGGGG", Wind{5.0, 1.5 * kPi}));
    const int centre = 4;
    const double east = rate(net, 5, centre), west = rate(net, 3, centre);
    const double north = rate(net, 1, centre), south = rate(net, 7, centre);
    CHECK(east == doctest::Approx(0.5 * std::exp(0.045 * 5.0)).epsilon(1e-14));
    CHECK(east > north);
    CHECK(north > west);
    CHECK(north == doctest::Approx(south).epsilon(1e-14));
    CHECK(rate(net, 2, centre) > rate(net, 0, centre));
  }

  TEST_CASE("every edge has a reverse and uniform calm land is symmetric") {
    const auto mixed = compile(grid(3, 4, "GGEEGCCEDGGE"));
    for (const auto& e : mixed.edges()) CHECK(rate(mixed, e.source, e.target) > 0.0);
    const auto uniform = compile(grid(3, 3, "GGGGGGGGG"));
    for (const auto& e : uniform.edges())
      CHECK(rate(uniform, e.source, e.target) == doctest::Approx(e.params.beta).epsilon(1e-15));
  }

  TEST_CASE("rates never fall below the lower bound option") {
    CompileOptions opt;
    opt.beta_lo = 0.1;
    const auto net = compile(grid(1, 2, "DG"), {}, opt);
    CHECK(rate(net, 1, 0) == doctest::Approx(0.05));
    for (const auto& e : net.edges()) CHECK(e.params.beta_lo <= e.params.beta_hi);
  }

  TEST_CASE("landscape validation") {
    auto land = grid(2, 2, "GGGG");
    land.likelihood(0) = 1.5;
    CHECK_THROWS_AS(compile(land), std::invalid_argument);
    land = grid(2, 2, "GGG");
    CHECK_THROWS_AS(compile(land), std::invalid_argument);
    land = grid(2, 2, "GGGG");
    land.likelihood = Vector::Zero(3);
    CHECK_THROWS_AS(compile(land), std::invalid_argument);
    land = grid(2, 2, "GGGG", Wind{-1.0, 0.0});
    CHECK_THROWS_AS(compile(land), std::invalid_argument);
  }

  TEST_CASE("bundled analogue landscape") {
    const auto sc = load_scenario(fixture::scenario_dir() / "analogue_p1.json");
    REQUIRE(sc.landscape);
    const auto& land = *sc.landscape;
    CHECK(sc.network.size() == 1000);
    CHECK(sc.network.edge_count() > 3000);
    CHECK(sc.network.edge_count() < 4000);
    CHECK(sc.network.edge_count() < 8 * sc.network.size());
    std::map<CellType, int> counts;
    for (auto c : land.cells) ++counts[c];
    for (auto c : {CellType::Desert, CellType::Grassland, CellType::EucalyptForest, CellType::City, CellType::Water})
      CHECK(counts[c] > 0);
    CHECK(land.wind.speed == 4.0);
    for (const auto& e : sc.network.edges()) {
      CHECK(e.params.beta_lo == doctest::Approx(1e-4));
      CHECK(land.cells[static_cast<std::size_t>(e.source)] != CellType::Water);
      CHECK(land.cells[static_cast<std::size_t>(e.target)] != CellType::Water);
    }
    for (int i = 0; i < sc.network.size(); ++i) CHECK(sc.network.node(i).delta == 0.2);
    CHECK(sc.network.discount_rate() == 3.5);
  }
}
