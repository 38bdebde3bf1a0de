#include "spreadalloc/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace spreadalloc {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_impact_csv(std::ostream& out, const ImpactVector& impact, const RiskVector& risk) {
  out << "i,p,risk\n";
  for (Eigen::Index i = 0; i < impact.values.size(); ++i)
    out << i << ',' << format_number(impact.values(i)) << ',' << format_number(risk.values(i)) << '\n';
}

void write_edge_allocation_csv(std::ostream& out, const SpreadingNetwork& net,
                               const SolveReport& report, double active_fraction) {
  out << "i,j,u,beta_before,beta_after\n";
  const auto& a = report.allocation;
  if (a.edge_investment.size() != net.edge_count()) return;
  for (int k = 0; k < net.edge_count(); ++k) {
    const auto& e = net.edge(k);
    if (!(a.edge_investment(k) > active_fraction * edge_cap(e.params, a.model))) continue;
    out << e.target << ',' << e.source << ',' << format_number(a.edge_investment(k)) << ','
        << format_number(e.params.beta) << ','
        << format_number(recover_edge(e.params, a.model, a.edge_investment(k))) << '\n';
  }
}

void write_node_allocation_csv(std::ostream& out, const SpreadingNetwork& net,
                               const SolveReport& report, double active_fraction) {
  out << "i,v,delta_before,delta_after\n";
  const auto& a = report.allocation;
  if (a.node_investment.size() != net.size()) return;
  for (int i = 0; i < net.size(); ++i) {
    const auto& p = net.node(i);
    if (!(a.node_investment(i) > active_fraction * node_cap(p, a.model))) continue;
    out << i << ',' << format_number(a.node_investment(i)) << ',' << format_number(p.delta) << ','
        << format_number(recover_node(p, a.model, a.node_investment(i))) << '\n';
  }
}

namespace {

nlohmann::json number_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

void write_solve_summary(std::ostream& out, const SpreadingNetwork& net, const SolveReport& report,
                         const SummaryExtras& extras) {
  nlohmann::ordered_json j;
  j["scenario"] = extras.scenario;
  j["problem"] = extras.problem;
  j["model"] = extras.model;
  if (extras.budget) j["budget"] = *extras.budget;
  if (extras.risk_bound) j["risk_bound"] = *extras.risk_bound;
  j["status"] = to_string(report.status);
  j["message"] = report.message;
  j["nodes"] = net.size();
  j["edges"] = net.edge_count();
  j["objective"] = number_json(report.objective);
  if (report.status == SolveStatus::Optimal) {
    j["max_risk"] = report.risk.max_risk;
    j["argmax_risk"] = report.risk.argmax;
    j["total_risk"] = report.risk.total_risk;
    j["total_investment"] = report.allocation.total();
    j["active_edges"] = report.active.edges;
    j["active_nodes"] = report.active.nodes;
  }
  j["min_achievable_risk"] = number_json(report.min_achievable_risk);
  if (std::isfinite(report.eigenvalue)) j["eigenvalue"] = report.eigenvalue;
  j["iterations"] = report.iterations;
  j["wall_time_s"] = report.wall_time;
  if (extras.reweighted) {
    auto& rw = j["reweighted"];
    rw["selected_iteration"] = extras.reweighted->selected;
    rw["polished"] = extras.reweighted->polished;
    auto trace = nlohmann::ordered_json::array();
    for (const auto& r : extras.reweighted->trace) {
      nlohmann::ordered_json t;
      t["iteration"] = r.iteration;
      t["status"] = to_string(r.status);
      t["surrogate"] = number_json(r.surrogate);
      t["total_investment"] = number_json(r.total_investment);
      t["max_risk"] = number_json(r.max_risk);
      t["active_edges"] = r.active.edges;
      t["active_nodes"] = r.active.nodes;
      trace.push_back(std::move(t));
    }
    rw["trace"] = std::move(trace);
  }
  out << j.dump(2) << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "value,status,objective,active_edges,wall_time\n";
  for (const auto& r : rows) {
    out << format_number(r.value) << ',' << to_string(r.status) << ',';
    if (r.status == SolveStatus::Optimal) out << format_number(r.objective);
    out << ',';
    if (r.status == SolveStatus::Optimal) out << r.active_edges;
    out << ',' << format_number(r.wall_time) << '\n';
  }
}

namespace {

const char* cell_fill(CellType t) {
  switch (t) {
    case CellType::Desert: return "#e8d8a8";
    case CellType::Grassland: return "#b8d890";
    case CellType::EucalyptForest: return "#4f8a4a";
    case CellType::City: return "#9a9a9a";
    case CellType::Water: return "#7fb2e0";
  }
  return "#ffffff";
}

std::string ramp(double s) {
  // blue (0) to red (1)
  s = std::clamp(s, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255.0 * s));
  const int b = static_cast<int>(std::lround(255.0 * (1.0 - s)));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x30%02x", r, b);
  return buf;
}

}  // namespace

void write_allocation_svg(std::ostream& out, const SpreadingNetwork& net, const SolveReport& report,
                          const Landscape* landscape, double active_fraction) {
  constexpr double cell = 20.0, legend_h = 60.0;
  const int n = net.size();
  std::vector<std::pair<double, double>> pos(static_cast<std::size_t>(n));
  double width = 0.0, height = 0.0;
  if (landscape) {
    width = cell * landscape->cols;
    height = cell * landscape->rows;
    for (int i = 0; i < n; ++i)
      pos[static_cast<std::size_t>(i)] = {cell * (i % landscape->cols + 0.5), cell * (i / landscape->cols + 0.5)};
  } else {
    width = height = std::max(200.0, 12.0 * n);
    const double rad = 0.4 * width;
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * std::numbers::pi * i / std::max(1, n);
      pos[static_cast<std::size_t>(i)] = {0.5 * width + rad * std::sin(a), 0.5 * height - rad * std::cos(a)};
    }
  }
  width = std::max(width, 260.0);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(width) << "\" height=\""
      << format_number(height + legend_h) << "\" viewBox=\"0 0 " << format_number(width) << ' '
      << format_number(height + legend_h) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (landscape) {
    for (int r = 0; r < landscape->rows; ++r)
      for (int c = 0; c < landscape->cols; ++c)
        out << "<rect x=\"" << format_number(cell * c) << "\" y=\"" << format_number(cell * r)
            << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"" << cell_fill(landscape->at(r, c))
            << "\" stroke=\"#ffffff\" stroke-width=\"0.5\"/>\n";
  } else {
    for (const auto& [x, y] : pos)
      out << "<circle cx=\"" << format_number(x) << "\" cy=\"" << format_number(y)
          << "\" r=\"4\" fill=\"#666666\"/>\n";
  }

  const auto& a = report.allocation;
  if (a.edge_investment.size() == net.edge_count()) {
    for (int k = 0; k < net.edge_count(); ++k) {
      const auto& e = net.edge(k);
      const double cap = edge_cap(e.params, a.model);
      const double u = a.edge_investment(k);
      if (!(u > active_fraction * cap)) continue;
      const auto [x0, y0] = pos[static_cast<std::size_t>(e.source)];
      const auto [x1, y1] = pos[static_cast<std::size_t>(e.target)];
      // offset each direction slightly so opposite edges stay visible
      const double dx = x1 - x0, dy = y1 - y0, len = std::hypot(dx, dy);
      const double ox = len > 0 ? -dy / len * 1.5 : 0.0, oy = len > 0 ? dx / len * 1.5 : 0.0;
      out << "<line x1=\"" << format_number(x0 + ox) << "\" y1=\"" << format_number(y0 + oy)
          << "\" x2=\"" << format_number(x1 + ox) << "\" y2=\"" << format_number(y1 + oy) << "\" stroke=\""
          << ramp(cap > 0 ? u / cap : 0.0) << "\" stroke-width=\"2\"/>\n";
    }
  }

  const double ly = height + 15.0;
  out << "<defs><linearGradient id=\"ramp\"><stop offset=\"0\" stop-color=\"" << ramp(0.0)
      << "\"/><stop offset=\"1\" stop-color=\"" << ramp(1.0) << "\"/></linearGradient></defs>\n";
  out << "<rect x=\"10\" y=\"" << format_number(ly) << "\" width=\"160\" height=\"12\" fill=\"url(#ramp)\"/>\n";
  out << "<text x=\"10\" y=\"" << format_number(ly + 28) << "\" font-size=\"11\" font-family=\"sans-serif\">0</text>\n";
  out << "<text x=\"160\" y=\"" << format_number(ly + 28)
      << "\" font-size=\"11\" font-family=\"sans-serif\">1</text>\n";
  out << "<text x=\"180\" y=\"" << format_number(ly + 10)
      << "\" font-size=\"11\" font-family=\"sans-serif\">u / cap</text>\n";
  out << "</svg>\n";
}

}  // namespace spreadalloc
