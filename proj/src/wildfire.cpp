#include "spreadalloc/wildfire.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spreadalloc {

CellType parse_cell(char code) {
  switch (code) {
    case 'D': return CellType::Desert;
    case 'G': return CellType::Grassland;
    case 'E': return CellType::EucalyptForest;
    case 'C': return CellType::City;
    case 'W': return CellType::Water;
  }
  throw std::invalid_argument(std::string("unknown cell code '") + code + "'");
}

char cell_code(CellType type) {
  static constexpr char codes[] = {'D', 'G', 'E', 'C', 'W'};
  return codes[static_cast<int>(type)];
}

void Landscape::validate() const {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("landscape grid must be nonempty");
  if (cells.size() != static_cast<std::size_t>(size()))
    throw std::invalid_argument("landscape has " + std::to_string(cells.size()) + " cells, expected " +
                                std::to_string(size()));
  if (likelihood.size() != size())
    throw std::invalid_argument("likelihood grid size does not match the landscape");
  if (!(likelihood.array() >= 0.0).all() || !(likelihood.array() <= 1.0).all())
    throw std::invalid_argument("likelihoods must lie in [0, 1]");
  if (!(wind.speed >= 0.0) || !std::isfinite(wind.speed))
    throw std::invalid_argument("wind speed must be non-negative");
}

double vegetation_factor(CellType cell, const SpreadRateTable& table) {
  if (cell == CellType::Water) throw std::invalid_argument("water cells do not burn");
  return table.vegetation[static_cast<std::size_t>(cell)];
}

double wind_factor(double spread_bearing, const Wind& wind, const SpreadRateTable& table) {
  if (wind.speed < 0.0) throw std::invalid_argument("wind speed must be non-negative");
  const double toward = wind.direction + std::numbers::pi;
  const double theta = spread_bearing - toward;
  return std::exp(table.c1 * wind.speed) * std::exp(wind.speed * table.c2 * (std::cos(theta) - 1.0));
}

SpreadingNetwork compile(const Landscape& land, const SpreadRateTable& table,
                         const CompileOptions& options) {
  land.validate();
  if (table.base < 0.0 || table.diagonal < 0.0 || table.c2 < 0.0)
    throw std::invalid_argument("spread-rate factors must be non-negative");
  for (double v : table.vegetation)
    if (v < 0.0) throw std::invalid_argument("vegetation factors must be non-negative");

  std::vector<NodeParams> nodes(static_cast<std::size_t>(land.size()));
  for (int i = 0; i < land.size(); ++i) {
    auto& p = nodes[static_cast<std::size_t>(i)];
    p.delta = options.delta;
    p.delta_lo = options.delta_lo;
    p.delta_hi = options.delta_hi;
    p.weight = options.node_weight;
    p.cost = land.cells[static_cast<std::size_t>(i)] == CellType::City ? options.city_cost
                                                                        : options.other_cost;
    p.likelihood = land.likelihood(i);
  }

  std::vector<Edge> edges;
  for (int r = 0; r < land.rows; ++r) {
    for (int c = 0; c < land.cols; ++c) {
      const CellType src = land.at(r, c);
      if (src == CellType::Water) continue;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const int tr = r + dr, tc = c + dc;
          if (tr < 0 || tr >= land.rows || tc < 0 || tc >= land.cols) continue;
          if (land.at(tr, tc) == CellType::Water) continue;
          // north is -row, east is +col
          const double bearing = std::atan2(static_cast<double>(dc), static_cast<double>(-dr));
          double beta = table.base * vegetation_factor(src, table) * wind_factor(bearing, land.wind, table);
          if (dr != 0 && dc != 0) beta *= table.diagonal;
          if (!(beta > 0.0)) continue;
          Edge e;
          e.source = land.index(r, c);
          e.target = land.index(tr, tc);
          e.params.beta = beta;
          e.params.beta_hi = beta;
          e.params.beta_lo = std::min(options.beta_lo, beta);
          e.params.weight = options.edge_weight;
          edges.push_back(e);
        }
      }
    }
  }
  return SpreadingNetwork(std::move(nodes), std::move(edges), options.discount_rate);
}

}  // namespace spreadalloc
