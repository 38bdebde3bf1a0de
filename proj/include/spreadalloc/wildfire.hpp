#pragma once

#include "spreadalloc/network.hpp"

#include <array>
#include <string>
#include <vector>

namespace spreadalloc {

enum class CellType { Desert, Grassland, EucalyptForest, City, Water };

/// One-letter codes D, G, E, C, W. Throws std::invalid_argument otherwise.
CellType parse_cell(char code);
char cell_code(CellType type);

struct Wind {
  double speed = 0.0;      // m/s
  double direction = 0.0;  // radians clockwise from north, the direction the wind blows from
};

/// Rectangular grid, row 0 at the north edge, row-major storage.
struct Landscape {
  int rows = 0;
  int cols = 0;
  std::vector<CellType> cells;
  Wind wind;
  Vector likelihood;

  int size() const { return rows * cols; }
  int index(int row, int col) const { return row * cols + col; }
  CellType at(int row, int col) const { return cells[static_cast<std::size_t>(index(row, col))]; }
  void validate() const;
};

struct SpreadRateTable {
  double base = 0.5;
  /// Indexed by CellType; Water is never consulted.
  std::array<double, 5> vegetation{0.1, 1.0, 1.4, 1.0, 0.0};
  double c1 = 0.045;
  double c2 = 0.131;
  double diagonal = 0.785;
};

/// Everything besides the rates: recovery, bounds, weights and costs.
struct CompileOptions {
  double discount_rate = 3.5;
  double delta = 0.2;
  double delta_lo = 0.2;
  double delta_hi = 0.2;
  /// Lower spread-rate bound; the upper bound is the nominal rate.
  double beta_lo = 1e-4;
  double edge_weight = 1.0;
  double node_weight = 1.0;
  double city_cost = 1.0;
  double other_cost = 0.01;
};

double vegetation_factor(CellType cell, const SpreadRateTable& table = {});

/// exp(c1 V) exp(V c2 (cos(theta) - 1)) with theta the angle between the
/// spread bearing and the bearing the wind travels toward.
double wind_factor(double spread_bearing, const Wind& wind, const SpreadRateTable& table = {});

/// 8-neighbour directed edges in both directions, none touching Water.
SpreadingNetwork compile(const Landscape& land, const SpreadRateTable& table = {},
                         const CompileOptions& options = {});

}  // namespace spreadalloc
