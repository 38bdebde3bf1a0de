#include "spreadalloc/interior_point.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

namespace spreadalloc {

namespace {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Sparse = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// terms . z <= rhs (+ sigma when relaxed in phase I)
struct Row {
  std::vector<LinearTerm> terms;
  double rhs = 0.0;
  bool relaxed = true;
  int source = -1;  // index into ConeProgram::linear(), -1 for bounds
  double sign = 1.0;
};

struct ConeEntry {
  int var;
  int comp;
  double coeff;
};

struct Cone {
  std::vector<ConeEntry> entries;
  std::array<double, 3> offset{};
};

struct ConeState {
  std::array<double, 3> v{};
  double psi = 0.0;
};

bool cone_interior(const std::array<double, 3>& v, double* psi) {
  const double a = v[0], b = v[1], c = v[2];
  if (!(b > 0.0) || !(c > 0.0)) return false;
  const double p = b * std::log(c / b) - a;
  if (!(p > 0.0) || !std::isfinite(p)) return false;
  if (psi) *psi = p;
  return true;
}

/// Barrier problem over z = x (phase II) or z = [x; sigma] (phase I).
class BarrierProblem {
 public:
  BarrierProblem(const ConeProgram& prog, bool phase1) : n_(prog.variable_count()), phase1_(phase1) {
    dim_ = phase1 ? n_ + 1 : n_;
    objective_ = Vector::Zero(dim_);
    if (phase1) {
      objective_(n_) = 1.0;
    } else {
      // large coefficients are scaled down to keep the central path well scaled
      objective_ = prog.objective();
      const double norm = objective_.lpNorm<Eigen::Infinity>();
      if (norm > 1.0) {
        objective_scale_ = norm;
        objective_ /= norm;
      }
    }

    for (int i = 0; i < n_; ++i) {
      const double lo = prog.lower()(i), hi = prog.upper()(i);
      if (lo == hi) {
        eq_rows_.push_back({{{i, 1.0}}, lo, false, -1, 1.0});
        continue;
      }
      if (std::isfinite(lo)) add_row({{{i, -1.0}}, -lo, true, -1, 1.0});
      if (std::isfinite(hi)) add_row({{{i, 1.0}}, hi, true, -1, 1.0});
    }
    for (std::size_t r = 0; r < prog.linear().size(); ++r) {
      const auto& row = prog.linear()[r];
      const int src = static_cast<int>(r);
      switch (row.sense) {
        case Sense::LessEqual: add_row({row.terms, row.rhs, true, src, 1.0}); break;
        case Sense::GreaterEqual: {
          auto neg = row.terms;
          for (auto& t : neg) t.coeff = -t.coeff;
          add_row({std::move(neg), -row.rhs, true, src, -1.0});
          break;
        }
        case Sense::Equal: eq_rows_.push_back({row.terms, row.rhs, false, src, 1.0}); break;
      }
    }
    if (phase1) add_row({{{n_, -1.0}}, 1.0, false, -1, 1.0});  // sigma >= -1

    for (const auto& k : prog.cones()) {
      Cone cone;
      const std::array<const AffineExpr*, 3> parts{&k.a, &k.b, &k.c};
      for (int comp = 0; comp < 3; ++comp) {
        cone.offset[comp] = parts[comp]->constant;
        for (const auto& t : parts[comp]->terms) cone.entries.push_back({t.var, comp, t.coeff});
      }
      if (phase1) {
        cone.entries.push_back({n_, 0, -1.0});
        cone.entries.push_back({n_, 1, 1.0});
        cone.entries.push_back({n_, 2, 1.0});
      }
      cones_.push_back(std::move(cone));
    }

    nu_ = static_cast<double>(sparse_rows_.size() + dense_rows_.size()) + 3.0 * cones_.size();
    eq_matrix_ = Matrix::Zero(static_cast<Eigen::Index>(eq_rows_.size()), dim_);
    eq_rhs_ = Vector::Zero(static_cast<Eigen::Index>(eq_rows_.size()));
    for (std::size_t r = 0; r < eq_rows_.size(); ++r) {
      for (const auto& t : eq_rows_[r].terms) eq_matrix_(static_cast<Eigen::Index>(r), t.var) += t.coeff;
      eq_rhs_(static_cast<Eigen::Index>(r)) = eq_rows_[r].rhs;
    }
  }

  int dim() const { return dim_; }
  int n() const { return n_; }
  double nu() const { return nu_; }
  const Vector& objective() const { return objective_; }
  /// The program objective equals objective_scale() * objective().
  double objective_scale() const { return objective_scale_; }
  const Matrix& eq_matrix() const { return eq_matrix_; }
  const Vector& eq_rhs() const { return eq_rhs_; }

  double slack(const Row& row, const Vector& z) const {
    double s = row.rhs;
    for (const auto& t : row.terms) s -= t.coeff * z(t.var);
    if (phase1_ && row.relaxed) s += z(n_);
    return s;
  }

  double slack_rate(const Row& row, const Vector& dz) const {
    double ds = 0.0;
    for (const auto& t : row.terms) ds -= t.coeff * dz(t.var);
    if (phase1_ && row.relaxed) ds += dz(n_);
    return ds;
  }

  std::array<double, 3> cone_values(const Cone& k, const Vector& z) const {
    auto v = k.offset;
    for (const auto& e : k.entries) v[static_cast<std::size_t>(e.comp)] += e.coeff * z(e.var);
    return v;
  }

  std::array<double, 3> cone_rates(const Cone& k, const Vector& dz) const {
    std::array<double, 3> d{};
    for (const auto& e : k.entries) d[static_cast<std::size_t>(e.comp)] += e.coeff * dz(e.var);
    return d;
  }

  /// Largest violation of the unrelaxed constraints (<= 0 means strictly inside).
  double worst_linear_violation(const Vector& x) const {
    double worst = -kInf;
    for (const auto* rows : {&sparse_rows_, &dense_rows_})
      for (const auto& r : *rows) {
        if (!r.relaxed) continue;
        double s = r.rhs;
        for (const auto& t : r.terms) s -= t.coeff * x(t.var);
        worst = std::max(worst, -s);
      }
    return worst;
  }

  bool cones_interior_at(const Vector& x, double sigma) const {
    for (const auto& k : cones_) {
      auto v = k.offset;
      for (const auto& e : k.entries)
        if (e.var < n_) v[static_cast<std::size_t>(e.comp)] += e.coeff * x(e.var);
      v[0] -= sigma;
      v[1] += sigma;
      v[2] += sigma;
      if (!cone_interior(v, nullptr)) return false;
    }
    return true;
  }

  bool in_domain(const Vector& z) const {
    for (const auto* rows : {&sparse_rows_, &dense_rows_})
      for (const auto& r : *rows)
        if (!(slack(r, z) > 0.0)) return false;
    for (const auto& k : cones_)
      if (!cone_interior(cone_values(k, z), nullptr)) return false;
    return true;
  }

  /// Gradient of t*obj + barrier; lower-triangular sparse Hessian triplets
  /// (fixed ordering) and dense low-rank factor columns.
  void derivatives(const Vector& z, double t, Vector& grad, std::vector<Triplet>& trip,
                   Matrix& lowrank) const {
    grad = t * objective_;
    trip.clear();
    for (int i = 0; i < dim_; ++i) trip.emplace_back(i, i, 0.0);
    for (const auto& r : sparse_rows_) {
      const double s = slack(r, z);
      scatter_row(r, 1.0 / s, grad, &trip, nullptr);
    }
    lowrank.setZero(dim_, static_cast<Eigen::Index>(dense_rows_.size()));
    for (std::size_t d = 0; d < dense_rows_.size(); ++d) {
      const auto& r = dense_rows_[d];
      const double s = slack(r, z);
      Vector col = Vector::Zero(dim_);
      scatter_row(r, 1.0 / s, grad, nullptr, &col);
      lowrank.col(static_cast<Eigen::Index>(d)) = col;
    }
    for (const auto& k : cones_) {
      const auto v = cone_values(k, z);
      const double b = v[1], c = v[2];
      const double psi = b * std::log(c / b) - v[0];
      const std::array<double, 3> dpsi{-1.0, std::log(c / b) - 1.0, b / c};
      std::array<std::array<double, 3>, 3> hpsi{};
      hpsi[1][1] = -1.0 / b;
      hpsi[1][2] = hpsi[2][1] = 1.0 / c;
      hpsi[2][2] = -b / (c * c);
      std::array<double, 3> g{};
      std::array<std::array<double, 3>, 3> h{};
      for (int p = 0; p < 3; ++p) {
        g[p] = -dpsi[p] / psi;
        for (int q = 0; q < 3; ++q) h[p][q] = dpsi[p] * dpsi[q] / (psi * psi) - hpsi[p][q] / psi;
      }
      g[1] -= 1.0 / b;
      g[2] -= 1.0 / c;
      h[1][1] += 1.0 / (b * b);
      h[2][2] += 1.0 / (c * c);
      for (const auto& e : k.entries) grad(e.var) += e.coeff * g[static_cast<std::size_t>(e.comp)];
      for (const auto& ep : k.entries)
        for (const auto& eq : k.entries)
          if (ep.var >= eq.var)
            trip.emplace_back(ep.var, eq.var,
                              ep.coeff * eq.coeff *
                                  h[static_cast<std::size_t>(ep.comp)][static_cast<std::size_t>(eq.comp)]);
    }
  }

  /// Precomputed slack/cone data along a search direction.
  struct LineData {
    std::vector<double> s, ds;
    std::vector<ConeState> cone;
    std::vector<std::array<double, 3>> cone_rate;
    double max_linear_step = kInf;
    double max_cone_step = kInf;
  };

  LineData line_data(const Vector& z, const Vector& dz) const {
    LineData ld;
    const auto add = [&](const Row& r) {
      const double s = slack(r, z), ds = slack_rate(r, dz);
      ld.s.push_back(s);
      ld.ds.push_back(ds);
      if (ds < 0.0) ld.max_linear_step = std::min(ld.max_linear_step, -s / ds);
    };
    for (const auto& r : sparse_rows_) add(r);
    for (const auto& r : dense_rows_) add(r);
    for (const auto& k : cones_) {
      ConeState st;
      st.v = cone_values(k, z);
      cone_interior(st.v, &st.psi);
      const auto d = cone_rates(k, dz);
      ld.cone.push_back(st);
      ld.cone_rate.push_back(d);
      double reach = kInf;
      if (d[1] < 0.0) reach = std::min(reach, -st.v[1] / d[1]);
      if (d[2] < 0.0) reach = std::min(reach, -st.v[2] / d[2]);
      ld.max_linear_step = std::min(ld.max_linear_step, reach);
      // psi is concave along the line, so the points where it stays positive
      // form an interval; steps beyond 2 are never taken
      const double rate = (std::log(st.v[2] / st.v[1]) - 1.0) * d[1] + st.v[1] / st.v[2] * d[2] - d[0];
      const auto psi_at = [&](double alpha) {
        double p = 0.0;
        const std::array<double, 3> v{st.v[0] + alpha * d[0], st.v[1] + alpha * d[1], st.v[2] + alpha * d[2]};
        return cone_interior(v, &p) ? p : -1.0;
      };
      double hi = std::min(reach, 2.0), lo = 0.0;
      if (rate < 0.0) hi = std::min(hi, 2.0 * st.psi / -rate);
      if (psi_at(hi) <= 0.0) {
        for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          (psi_at(mid) > 0.0 ? lo : hi) = mid;
        }
        ld.max_cone_step = std::min(ld.max_cone_step, lo);
      }
    }
    return ld;
  }

  /// barrier(z + alpha dz) - barrier(z); +inf outside the domain.
  static double barrier_change(const LineData& ld, double alpha) {
    double change = 0.0;
    for (std::size_t i = 0; i < ld.s.size(); ++i) {
      const double ratio = alpha * ld.ds[i] / ld.s[i];
      if (!(ratio > -1.0)) return kInf;
      change -= std::log1p(ratio);
    }
    for (std::size_t k = 0; k < ld.cone.size(); ++k) {
      const auto& st = ld.cone[k];
      const auto& d = ld.cone_rate[k];
      std::array<double, 3> v{st.v[0] + alpha * d[0], st.v[1] + alpha * d[1], st.v[2] + alpha * d[2]};
      double psi = 0.0;
      if (!cone_interior(v, &psi)) return kInf;
      change -= std::log(psi / st.psi) + std::log1p(alpha * d[1] / st.v[1]) +
                std::log1p(alpha * d[2] / st.v[2]);
    }
    return change;
  }

  /// d/dalpha of barrier(z + alpha dz); +inf outside the domain.
  static double barrier_slope(const LineData& ld, double alpha) {
    double slope = 0.0;
    for (std::size_t i = 0; i < ld.s.size(); ++i) {
      const double s = ld.s[i] + alpha * ld.ds[i];
      if (!(s > 0.0)) return kInf;
      slope -= ld.ds[i] / s;
    }
    for (std::size_t k = 0; k < ld.cone.size(); ++k) {
      const auto& st = ld.cone[k];
      const auto& d = ld.cone_rate[k];
      const std::array<double, 3> v{st.v[0] + alpha * d[0], st.v[1] + alpha * d[1], st.v[2] + alpha * d[2]};
      double psi = 0.0;
      if (!cone_interior(v, &psi)) return kInf;
      const double dpsi = (std::log(v[2] / v[1]) - 1.0) * d[1] + v[1] / v[2] * d[2] - d[0];
      slope -= dpsi / psi + d[1] / v[1] + d[2] / v[2];
    }
    return slope;
  }

  const std::vector<Row>& sparse_rows() const { return sparse_rows_; }
  const std::vector<Row>& dense_rows() const { return dense_rows_; }
  const std::vector<Row>& eq_rows() const { return eq_rows_; }
  const std::vector<Cone>& cones() const { return cones_; }

 private:
  void add_row(Row r) {
    const std::size_t threshold = std::max<std::size_t>(64, static_cast<std::size_t>(4.0 * std::sqrt(static_cast<double>(dim_))));
    if (r.terms.size() > threshold)
      dense_rows_.push_back(std::move(r));
    else
      sparse_rows_.push_back(std::move(r));
  }

  /// Adds the barrier -log(s) of one row: gradient a/s and Hessian a a'/s^2
  /// where a = -ds/dz.
  void scatter_row(const Row& r, double inv_s, Vector& grad, std::vector<Triplet>* trip,
                   Vector* col) const {
    thread_local std::vector<LinearTerm> entries;
    entries.assign(r.terms.begin(), r.terms.end());
    if (phase1_ && r.relaxed) entries.push_back({n_, -1.0});
    for (const auto& e : entries) grad(e.var) += e.coeff * inv_s;
    if (trip) {
      const double w = inv_s * inv_s;
      for (const auto& p : entries)
        for (const auto& q : entries)
          if (p.var >= q.var) trip->emplace_back(p.var, q.var, p.coeff * q.coeff * w);
    }
    if (col)
      for (const auto& e : entries) (*col)(e.var) += e.coeff * inv_s;
  }

  int n_;
  bool phase1_;
  int dim_ = 0;
  Vector objective_;
  double objective_scale_ = 1.0;
  std::vector<Row> sparse_rows_;
  std::vector<Row> dense_rows_;
  std::vector<Row> eq_rows_;
  std::vector<Cone> cones_;
  Matrix eq_matrix_;
  Vector eq_rhs_;
  double nu_ = 0.0;
};

/// Solves (H_s + U U') x = r with equality constraints handled by the caller.
class NewtonSystem {
 public:
  bool factor(int dim, const std::vector<Triplet>& trip, const Matrix& lowrank) {
    Sparse h(dim, dim);
    h.setFromTriplets(trip.begin(), trip.end());
    if (!analyzed_) {
      ldlt_.analyzePattern(h);
      analyzed_ = true;
    }
    double max_diag = 0.0;
    for (int i = 0; i < dim; ++i) max_diag = std::max(max_diag, std::abs(h.coeff(i, i)));
    double reg = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      h_ = h;
      if (reg > 0.0)
        for (int i = 0; i < dim; ++i) h_.coeffRef(i, i) += reg;
      ldlt_.factorize(h_);
      if (ldlt_.info() == Eigen::Success && (ldlt_.vectorD().array() > 0.0).all()) break;
      reg = reg == 0.0 ? 1e-14 * std::max(1.0, max_diag) : reg * 100.0;
      if (attempt == 7) return false;
    }
    lowrank_ = lowrank;
    if (lowrank_.cols() > 0) {
      hinv_u_.resize(dim, lowrank_.cols());
      for (Eigen::Index j = 0; j < lowrank_.cols(); ++j) hinv_u_.col(j) = ldlt_.solve(lowrank_.col(j));
      Matrix cap = Matrix::Identity(lowrank_.cols(), lowrank_.cols()) + lowrank_.transpose() * hinv_u_;
      capacitance_.compute(cap);
    }
    return true;
  }

  /// Solve with iterative refinement until the residual stops shrinking.
  Vector solve(const Vector& r) const {
    Vector x = solve_once(r);
    Vector res = r - apply(x);
    double norm = res.norm();
    for (int k = 0; k < 4 && norm > 0.0; ++k) {
      const Vector candidate = x + solve_once(res);
      const Vector cres = r - apply(candidate);
      const double cnorm = cres.norm();
      if (!(cnorm < 0.5 * norm)) break;
      x = candidate;
      res = cres;
      norm = cnorm;
    }
    return x;
  }

  Vector apply(const Vector& x) const {
    Vector y = h_.selfadjointView<Eigen::Lower>() * x;
    if (lowrank_.cols() > 0) y += lowrank_ * (lowrank_.transpose() * x);
    return y;
  }

 private:
  Vector solve_once(const Vector& r) const {
    Vector x = ldlt_.solve(r);
    if (lowrank_.cols() > 0) x -= hinv_u_ * capacitance_.solve(lowrank_.transpose() * x);
    return x;
  }

  Eigen::SimplicialLDLT<Sparse, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  bool analyzed_ = false;
  Sparse h_;
  Matrix lowrank_;
  Matrix hinv_u_;
  Eigen::LDLT<Matrix> capacitance_;
};

/// Solves H dz + E' w = -g, E dz = 0 with H already factored.
void equality_newton(const NewtonSystem& system, const Matrix& eq, const Vector& g, Vector& dz,
                     Vector& w) {
  if (eq.rows() == 0) {
    dz = -system.solve(g);
    w.resize(0);
    return;
  }
  Matrix hinv_et(g.size(), eq.rows());
  for (Eigen::Index r = 0; r < eq.rows(); ++r) hinv_et.col(r) = system.solve(eq.row(r).transpose());
  const Eigen::LDLT<Matrix> schur(eq * hinv_et);
  // [H E'; E 0] [dz; w] = [a; b] by block elimination
  const auto block_solve = [&](const Vector& a, const Vector& b, Vector& x, Vector& y) {
    const Vector hinv_a = system.solve(a);
    y = schur.solve(eq * hinv_a - b);
    x = hinv_a - hinv_et * y;
  };
  const Vector rhs = -g;
  block_solve(rhs, Vector::Zero(eq.rows()), dz, w);
  // refine against the full system; the Schur complement loses accuracy near the boundary
  double norm = kInf;
  for (int k = 0; k < 4; ++k) {
    const Vector ra = rhs - system.apply(dz) - eq.transpose() * w;
    const Vector rb = -eq * dz;
    const double next = std::sqrt(ra.squaredNorm() + rb.squaredNorm());
    if (!(next < 0.5 * norm) || next == 0.0) break;
    norm = next;
    Vector cx, cy;
    block_solve(ra, rb, cx, cy);
    dz += cx;
    w += cy;
  }
}

enum class CenterResult { Converged, Stalled, Stopped, Failed };

class PathFollower {
 public:
  PathFollower(const BarrierProblem& prob, const SolverOptions& opt, const char* tag)
      : prob_(prob), opt_(opt), tag_(tag) {}

  /// Newton centering at barrier weight t. `stop` is polled after every step.
  CenterResult center(Vector& z, double t, int& iterations,
                      const std::function<bool(const Vector&)>& stop) {
    const Matrix& eq = prob_.eq_matrix();
    for (int inner = 0; inner < 200; ++inner) {
      if (iterations >= opt_.max_iterations) return CenterResult::Stalled;
      prob_.derivatives(z, t, grad_, trip_, lowrank_);
      if (!system_.factor(prob_.dim(), trip_, lowrank_)) return CenterResult::Failed;
      Vector dz, multipliers;
      equality_newton(system_, eq, grad_, dz, multipliers);
      const double lambda2 = -grad_.dot(dz);
      if (!std::isfinite(lambda2)) return CenterResult::Failed;
      if (lambda2 < 0.0 || lambda2 / 2.0 <= opt_.centering_tolerance) return CenterResult::Converged;

      const auto ld = prob_.line_data(z, dz);
      const double slope = grad_.dot(dz);
      double alpha = std::min({1.0, 0.99 * ld.max_linear_step, 0.99 * ld.max_cone_step});
      const double obj_rate = t * prob_.objective().dot(dz);
      // minimize the convex line function on [0, alpha] by bisection on its slope
      const auto phi_slope = [&](double a) { return obj_rate + BarrierProblem::barrier_slope(ld, a); };
      if (phi_slope(alpha) > 0.0) {
        double lo = 0.0, hi = alpha;
        for (int it = 0; it < 50 && hi - lo > 1e-3 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          (phi_slope(mid) > 0.0 ? hi : lo) = mid;
        }
        alpha = lo > 0.0 ? lo : hi;
      }
      bool accepted = false;
      while (alpha > 1e-18) {
        const double change = obj_rate * alpha + BarrierProblem::barrier_change(ld, alpha);
        if (std::isfinite(change) && change <= 0.25 * alpha * slope) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) return CenterResult::Stalled;
      z += alpha * dz;
      ++iterations;
      if (opt_.verbose)
        std::cerr << "  [" << tag_ << "] it " << iterations << " t=" << t << " lambda2=" << lambda2
                  << " step=" << alpha << "\n";
      if (stop && stop(z)) return CenterResult::Stopped;
    }
    return CenterResult::Stalled;
  }

 private:
  const BarrierProblem& prob_;
  const SolverOptions& opt_;
  const char* tag_;
  NewtonSystem system_;
  Vector grad_;
  std::vector<Triplet> trip_;
  Matrix lowrank_;
};

/// Affine map over the local variables of one inequality.
struct LocalMap {
  std::vector<std::pair<int, double>> terms;
  double offset = 0.0;
};

/// One smooth convex inequality f(x) <= 0 over a few variables:
///   Linear     f = map(x)
///   Cone       f = a - b log(c/b) with (a, b, c) = maps(x)
///   LogSumExp  f = log sum_k exp(map_k(x))
struct Inequality {
  enum class Kind { Linear, Cone, LogSumExp };
  Kind kind = Kind::Linear;
  std::vector<int> vars;
  std::vector<LocalMap> maps;
  bool dense = false;
  int row = -1;                // program row (Linear, LogSumExp)
  int cone = -1;               // program cone (Cone)
  std::vector<int> aux_cones;  // LogSumExp: absorbed cones and their variables
  std::vector<int> aux_vars;
  std::vector<double> aux_coeff;  // row coefficient of s_k
  std::vector<double> aux_scale;  // s_k = aux_scale_k * exp(map_k) on the boundary
  double rhs = 0.0;
};

/// Phase II problem with every log-sum-exp encoding (a row sum_k s_k <= rhs
/// whose s_k each occur only in their own cone (z_k, b_k, s_k)) folded back
/// into one smooth inequality. The absorbed variables are frozen during
/// the iteration and reconstructed afterwards.
class SmoothProblem {
 public:
  SmoothProblem(const BarrierProblem& prob) : prob_(prob), frozen_(prob.dim(), false) {
    const int dim = prob.dim();
    std::vector<int> cone_uses(dim, 0), row_uses(dim, 0), owner(dim, -1);
    for (std::size_t k = 0; k < prob.cones().size(); ++k)
      for (const auto& e : prob.cones()[k].entries) {
        ++cone_uses[e.var];
        if (e.comp == 2) owner[e.var] = static_cast<int>(k);
      }
    for (const auto* rows : {&prob.sparse_rows(), &prob.dense_rows(), &prob.eq_rows()})
      for (const auto& r : *rows)
        for (const auto& t : r.terms) ++row_uses[t.var];

    // s is absorbable when it is the sole c-entry of a cone with constant
    // positive b and occurs in exactly one other place, an inequality row
    const auto absorbable = [&](int var) {
      const int k = owner[var];
      if (k < 0 || cone_uses[var] != 1 || row_uses[var] != 1 || prob.objective()(var) != 0.0) return false;
      const auto& cone = prob.cones()[static_cast<std::size_t>(k)];
      int c_entries = 0;
      for (const auto& e : cone.entries) {
        if (e.comp == 1) return false;
        if (e.comp == 2) ++c_entries;
      }
      return c_entries == 1 && cone.offset[1] > 0.0 && cone.offset[2] == 0.0;
    };

    std::vector<bool> cone_absorbed(prob.cones().size(), false);
    const auto add_row = [&](const Row& r, bool dense) {
      bool fold = r.source >= 0 && r.rhs > 0.0 && !r.terms.empty();
      for (const auto& t : r.terms) fold = fold && t.coeff > 0.0 && absorbable(t.var);
      if (!fold) {
        Inequality q;
        q.kind = Inequality::Kind::Linear;
        q.dense = dense;
        q.row = r.source;
        LocalMap map;
        map.offset = -r.rhs;
        for (const auto& t : r.terms) map.terms.push_back({local(q, t.var), t.coeff});
        q.maps.push_back(std::move(map));
        ineq_.push_back(std::move(q));
        return;
      }
      Inequality q;
      q.kind = Inequality::Kind::LogSumExp;
      q.row = r.source;
      q.rhs = r.rhs;
      for (const auto& t : r.terms) {
        const int k = owner[t.var];
        const auto& cone = prob.cones()[static_cast<std::size_t>(k)];
        double gamma = 0.0;
        for (const auto& e : cone.entries)
          if (e.comp == 2) gamma = e.coeff;
        // b exp(a/b) <= gamma s  and  coeff * s summed <= rhs
        const double b = cone.offset[1];
        LocalMap map;
        map.offset = cone.offset[0] / b + std::log(b / gamma) + std::log(t.coeff / r.rhs);
        for (const auto& e : cone.entries)
          if (e.comp == 0) map.terms.push_back({local(q, e.var), e.coeff / b});
        q.maps.push_back(std::move(map));
        q.aux_cones.push_back(k);
        q.aux_vars.push_back(t.var);
        q.aux_coeff.push_back(t.coeff);
        q.aux_scale.push_back(r.rhs / t.coeff);
        cone_absorbed[static_cast<std::size_t>(k)] = true;
        frozen_[static_cast<std::size_t>(t.var)] = true;
      }
      ineq_.push_back(std::move(q));
    };
    for (const auto& r : prob.sparse_rows()) add_row(r, false);
    for (const auto& r : prob.dense_rows()) add_row(r, true);
    for (std::size_t k = 0; k < prob.cones().size(); ++k) {
      if (cone_absorbed[k]) continue;
      Inequality q;
      q.kind = Inequality::Kind::Cone;
      q.cone = static_cast<int>(k);
      const auto& cone = prob.cones()[k];
      q.maps.resize(3);
      for (int p = 0; p < 3; ++p) q.maps[static_cast<std::size_t>(p)].offset = cone.offset[static_cast<std::size_t>(p)];
      for (const auto& e : cone.entries)
        q.maps[static_cast<std::size_t>(e.comp)].terms.push_back({local(q, e.var), e.coeff});
      ineq_.push_back(std::move(q));
    }
  }

  const BarrierProblem& base() const { return prob_; }
  const std::vector<Inequality>& inequalities() const { return ineq_; }
  bool frozen(int var) const { return frozen_[static_cast<std::size_t>(var)]; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(ineq_.size()); }

  /// Map values and rates at x along dx.
  static void map_values(const Inequality& q, const Vector& x, const Vector* dx, std::vector<double>& v,
                         std::vector<double>& dv) {
    v.assign(q.maps.size(), 0.0);
    dv.assign(q.maps.size(), 0.0);
    for (std::size_t m = 0; m < q.maps.size(); ++m) {
      v[m] = q.maps[m].offset;
      for (const auto& [l, coeff] : q.maps[m].terms) {
        const int var = q.vars[static_cast<std::size_t>(l)];
        v[m] += coeff * x(var);
        if (dx) dv[m] += coeff * (*dx)(var);
      }
    }
  }

  /// f at map values v + alpha dv; +inf outside the domain.
  static double value_along(const Inequality& q, const std::vector<double>& v, const std::vector<double>& dv,
                            double alpha) {
    switch (q.kind) {
      case Inequality::Kind::Linear: return v[0] + alpha * dv[0];
      case Inequality::Kind::Cone: {
        const double a = v[0] + alpha * dv[0], b = v[1] + alpha * dv[1], c = v[2] + alpha * dv[2];
        if (!(b > 0.0) || !(c > 0.0)) return kInf;
        return a - b * std::log(c / b);
      }
      case Inequality::Kind::LogSumExp: {
        double top = -kInf;
        for (std::size_t k = 0; k < v.size(); ++k) top = std::max(top, v[k] + alpha * dv[k]);
        double sum = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) sum += std::exp(v[k] + alpha * dv[k] - top);
        return top + std::log(sum);
      }
    }
    return kInf;
  }

  /// f, local gradient and local Hessian (left empty for linear rows).
  static double evaluate(const Inequality& q, const Vector& x, Vector& grad, Matrix& hess) {
    std::vector<double> v, dv;
    map_values(q, x, nullptr, v, dv);
    const auto nv = static_cast<Eigen::Index>(q.vars.size());
    // weights in map space
    Vector gm = Vector::Zero(static_cast<Eigen::Index>(q.maps.size()));
    Matrix hm;
    double f = 0.0;
    switch (q.kind) {
      case Inequality::Kind::Linear:
        f = v[0];
        gm(0) = 1.0;
        break;
      case Inequality::Kind::Cone: {
        const double a = v[0], b = v[1], c = v[2];
        if (!(b > 0.0) || !(c > 0.0)) return kInf;
        f = a - b * std::log(c / b);
        gm << 1.0, 1.0 - std::log(c / b), -b / c;
        hm = Matrix::Zero(3, 3);
        hm(1, 1) = 1.0 / b;
        hm(1, 2) = hm(2, 1) = -1.0 / c;
        hm(2, 2) = b / (c * c);
        break;
      }
      case Inequality::Kind::LogSumExp: {
        const double top = *std::max_element(v.begin(), v.end());
        double sum = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
          gm(static_cast<Eigen::Index>(k)) = std::exp(v[k] - top);
          sum += gm(static_cast<Eigen::Index>(k));
        }
        gm /= sum;
        f = top + std::log(sum);
        hm = Matrix(gm.asDiagonal()) - gm * gm.transpose();
        break;
      }
    }
    // chain rule through the local Jacobian
    Matrix jac = Matrix::Zero(static_cast<Eigen::Index>(q.maps.size()), nv);
    for (std::size_t m = 0; m < q.maps.size(); ++m)
      for (const auto& [l, coeff] : q.maps[m].terms) jac(static_cast<Eigen::Index>(m), l) += coeff;
    grad = jac.transpose() * gm;
    if (hm.size() > 0)
      hess = jac.transpose() * hm * jac;
    else
      hess.resize(0, 0);
    return f;
  }

 private:
  static int local(Inequality& q, int var) {
    for (std::size_t l = 0; l < q.vars.size(); ++l)
      if (q.vars[l] == var) return static_cast<int>(l);
    q.vars.push_back(var);
    return static_cast<int>(q.vars.size()) - 1;
  }

  const BarrierProblem& prob_;
  std::vector<bool> frozen_;
  std::vector<Inequality> ineq_;
};

/// Primal-dual path following on the smooth phase II problem with
/// multipliers lambda_i > 0 for f_i(x) <= 0 and nu for equality rows.
class PrimalDual {
 public:
  PrimalDual(const SmoothProblem& prob, const SolverOptions& opt)
      : prob_(prob), opt_(opt), m_(prob.size()), grads_(static_cast<std::size_t>(m_)),
        hess_(static_cast<std::size_t>(m_)) {}

  /// Runs from a strictly feasible x with initial multipliers 1/(t0 (-f)).
  /// On failure x, lam, nu hold the iterate with the smallest residuals.
  ConeStatus run(Vector& x, double t0, Vector& lam, Vector& nu, int& iterations, double& gap,
                 std::string& message) {
    const auto& base = prob_.base();
    Vector f(m_);
    if (!evaluate_all(x, f)) {
      message = "phase II start is not strictly feasible";
      return ConeStatus::NumericalError;
    }
    lam = (-f).cwiseInverse() / t0;
    nu = Vector::Zero(base.eq_matrix().rows());
    const double m = static_cast<double>(m_);
    const double feas_tol = opt_.feasibility_tolerance * std::max(1.0, base.objective().lpNorm<Eigen::Infinity>());

    struct Snapshot {
      Vector x, lam, nu;
      double gap = kInf, score = kInf;
    } best;
    const auto finish = [&](ConeStatus status, const char* why) {
      message = why;
      if (best.score < kInf) {
        x = best.x;
        lam = best.lam;
        nu = best.nu;
        gap = best.gap;
      }
      return status;
    };

    Vector g, dx, dlam, dnu, rate(m_), f1(m_), lam1;
    while (true) {
      gap = -f.dot(lam);
      const double rd_norm = dual_residual(lam, nu).norm();
      const double gap_tol = opt_.gap_tolerance * std::max(1.0, std::abs(base.objective().dot(x)));
      if (opt_.verbose)
        std::cerr << "[primal-dual] it " << iterations << " obj=" << base.objective().dot(x) << " gap=" << gap
                  << " dual_res=" << rd_norm << "\n";
      if (gap <= gap_tol && rd_norm <= feas_tol) return ConeStatus::Optimal;
      const double score = std::max(gap / gap_tol, rd_norm / feas_tol);
      if (score < best.score) best = {x, lam, nu, gap, score};
      if (iterations >= opt_.max_iterations) return finish(ConeStatus::IterationLimit, "iteration limit in phase II");

      // the Newton matrix does not depend on the centering target
      assemble_matrix(f, lam);
      if (!system_.factor(base.dim(), trip_, lowrank_))
        return finish(ConeStatus::NumericalError, "Newton system factorization failed");

      // predictor: pure affine scaling direction, then centering weight
      // sigma = (predicted gap / gap)^3
      if (!direction(f, lam, nu, 0.0, dx, dlam, dnu, rate))
        return finish(ConeStatus::NumericalError, "non-finite Newton direction");
      const double alpha_aff = max_step(x, f, lam, dx, dlam, rate);
      const double gap_aff = -((f + alpha_aff * rate).array() * (lam + alpha_aff * dlam).array()).sum();
      // once the gap is small enough, hold it and only reduce the dual residual
      const double sigma = gap <= gap_tol
                               ? 1.0
                               : std::clamp(std::pow(std::max(gap_aff, 0.0) / gap, 3.0), kMinCentering, 1.0);
      const double inv_t = sigma * gap / m;
      if (!direction(f, lam, nu, inv_t, dx, dlam, dnu, rate))
        return finish(ConeStatus::NumericalError, "non-finite Newton direction");
      double step = 0.99 * max_step(x, f, lam, dx, dlam, rate);

      // backtrack into a wide neighborhood of the central path
      bool accepted = false;
      Vector x1;
      for (; step > 1e-14; step *= 0.5) {
        x1 = x + step * dx;
        if (!evaluate_all(x1, f1)) continue;
        lam1 = lam + step * dlam;
        const Vector prod = (-f1.array() * lam1.array()).matrix();
        if (prod.minCoeff() >= kNeighborhood * prod.sum() / m) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        evaluate_all(x, f);
        return finish(ConeStatus::NumericalError, "line search failed in phase II");
      }
      if (opt_.verbose) std::cerr << "   sigma=" << sigma << " step=" << step << "\n";
      x = std::move(x1);
      lam = std::move(lam1);
      nu += step * dnu;
      f = f1;
      ++iterations;
    }
  }

  /// Writes the absorbed variables back so every row and cone holds strictly.
  void restore(Vector& x) const {
    std::vector<double> v, dv;
    for (const auto& q : prob_.inequalities()) {
      if (q.kind != Inequality::Kind::LogSumExp) continue;
      SmoothProblem::map_values(q, x, nullptr, v, dv);
      const double slack = std::exp(-SmoothProblem::value_along(q, v, dv, 0.0));  // rhs / used >= 1
      const double spread = 0.5 * (1.0 + slack);
      for (std::size_t k = 0; k < q.aux_vars.size(); ++k)
        x(q.aux_vars[k]) = q.aux_scale[k] * std::exp(v[k]) * spread;
    }
  }

  /// Multipliers for the program's linear rows in program order.
  Vector linear_duals(const Vector& x, const Vector& lam, const Vector& nu, std::size_t program_rows) const {
    Vector dual = Vector::Zero(static_cast<Eigen::Index>(program_rows));
    std::vector<double> v, dv;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const auto& q = prob_.inequalities()[static_cast<std::size_t>(i)];
      if (q.row < 0) continue;
      if (q.kind == Inequality::Kind::LogSumExp) {
        // log(sum/rhs) <= 0 with multiplier lambda is sum <= rhs with lambda / sum
        SmoothProblem::map_values(q, x, nullptr, v, dv);
        dual(q.row) = lam(i) / (q.rhs * std::exp(SmoothProblem::value_along(q, v, dv, 0.0)));
      } else {
        dual(q.row) = lam(i);
      }
    }
    const auto& eq = prob_.base().eq_rows();
    for (std::size_t r = 0; r < eq.size(); ++r)
      if (eq[r].source >= 0) dual(eq[r].source) = nu(static_cast<Eigen::Index>(r));
    return dual;
  }

  /// Dual cone points lambda * grad psi with psi = b log(c/b) - a; these lie
  /// on the dual cone boundary.
  Vector cone_duals(const Vector& x, const Vector& lam, const Vector& row_duals) const {
    const auto& cones = prob_.base().cones();
    Vector dual = Vector::Zero(3 * static_cast<Eigen::Index>(cones.size()));
    const auto put = [&](std::size_t k, double l) {
      const auto v = prob_.base().cone_values(cones[k], x);
      const double b = v[1], c = v[2];
      dual(static_cast<Eigen::Index>(3 * k)) = -l;
      dual(static_cast<Eigen::Index>(3 * k + 1)) = l * (std::log(c / b) - 1.0);
      dual(static_cast<Eigen::Index>(3 * k + 2)) = l * b / c;
    };
    for (Eigen::Index i = 0; i < m_; ++i) {
      const auto& q = prob_.inequalities()[static_cast<std::size_t>(i)];
      if (q.kind == Inequality::Kind::Cone) put(static_cast<std::size_t>(q.cone), lam(i));
      if (q.kind != Inequality::Kind::LogSumExp) continue;
      // stationarity in s_k: row dual * coeff = gamma * (dual point's c entry)
      for (std::size_t k = 0; k < q.aux_cones.size(); ++k) {
        const auto cone = static_cast<std::size_t>(q.aux_cones[k]);
        const auto v = prob_.base().cone_values(cones[cone], x);
        double gamma = 0.0;
        for (const auto& e : cones[cone].entries)
          if (e.comp == 2) gamma = e.coeff;
        put(cone, row_duals(q.row) * q.aux_coeff[k] * v[2] / (gamma * v[1]));
      }
    }
    return dual;
  }

 private:
  static constexpr double kNeighborhood = 1e-3;
  static constexpr double kMinCentering = 1e-3;

  bool evaluate_all(const Vector& x, Vector& f) {
    for (Eigen::Index i = 0; i < m_; ++i) {
      f(i) = SmoothProblem::evaluate(prob_.inequalities()[static_cast<std::size_t>(i)], x,
                                     grads_[static_cast<std::size_t>(i)], hess_[static_cast<std::size_t>(i)]);
      if (!(f(i) < 0.0)) return false;
    }
    return true;
  }

  /// objective + sum lambda_i grad f_i + E' nu
  Vector dual_residual(const Vector& lam, const Vector& nu) const {
    Vector r = prob_.base().objective();
    for (Eigen::Index i = 0; i < m_; ++i) {
      const auto& q = prob_.inequalities()[static_cast<std::size_t>(i)];
      const auto& gi = grads_[static_cast<std::size_t>(i)];
      for (std::size_t l = 0; l < q.vars.size(); ++l) r(q.vars[l]) += lam(i) * gi(static_cast<Eigen::Index>(l));
    }
    if (nu.size() > 0) r += prob_.base().eq_matrix().transpose() * nu;
    for (int j = 0; j < r.size(); ++j)
      if (prob_.frozen(j)) r(j) = 0.0;
    return r;
  }

  /// Newton matrix sum lambda_i hess f_i + (lambda_i / -f_i) grad f_i grad f_i'.
  void assemble_matrix(const Vector& f, const Vector& lam) {
    const int dim = prob_.base().dim();
    trip_.clear();
    for (int j = 0; j < dim; ++j) trip_.emplace_back(j, j, prob_.frozen(j) ? 1.0 : 0.0);
    Eigen::Index dense_cols = 0;
    for (const auto& q : prob_.inequalities()) dense_cols += q.dense ? 1 : 0;
    lowrank_.setZero(dim, dense_cols);
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const auto& q = prob_.inequalities()[static_cast<std::size_t>(i)];
      const auto& gi = grads_[static_cast<std::size_t>(i)];
      const auto& hi = hess_[static_cast<std::size_t>(i)];
      const double w = lam(i) / -f(i);
      if (q.dense) {
        for (std::size_t l = 0; l < q.vars.size(); ++l)
          lowrank_(q.vars[l], col) += std::sqrt(w) * gi(static_cast<Eigen::Index>(l));
        ++col;
        continue;
      }
      for (std::size_t p = 0; p < q.vars.size(); ++p)
        for (std::size_t r = 0; r < q.vars.size(); ++r) {
          if (q.vars[p] < q.vars[r]) continue;
          const auto lp = static_cast<Eigen::Index>(p), lr = static_cast<Eigen::Index>(r);
          double h = w * gi(lp) * gi(lr);
          if (hi.size() > 0) h += lam(i) * hi(lp, lr);
          trip_.emplace_back(q.vars[p], q.vars[r], h);
        }
    }
  }

  /// Primal-dual direction for the centering target lambda_i (-f_i) = inv_t.
  /// The right-hand side is objective + sum grad f_i inv_t / (-f_i).
  bool direction(const Vector& f, const Vector& lam, const Vector& nu, double inv_t, Vector& dx, Vector& dlam,
                 Vector& dnu, Vector& rate) const {
    Vector g = prob_.base().objective();
    for (Eigen::Index i = 0; i < m_; ++i) {
      const auto& q = prob_.inequalities()[static_cast<std::size_t>(i)];
      const auto& gi = grads_[static_cast<std::size_t>(i)];
      const double coef = inv_t / -f(i);
      for (std::size_t l = 0; l < q.vars.size(); ++l) g(q.vars[l]) += coef * gi(static_cast<Eigen::Index>(l));
    }
    for (int j = 0; j < g.size(); ++j)
      if (prob_.frozen(j)) g(j) = 0.0;
    Vector nu_plus;
    equality_newton(system_, prob_.base().eq_matrix(), g, dx, nu_plus);
    if (!dx.allFinite()) return false;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const auto& q = prob_.inequalities()[static_cast<std::size_t>(i)];
      const auto& gi = grads_[static_cast<std::size_t>(i)];
      double r = 0.0;
      for (std::size_t l = 0; l < q.vars.size(); ++l) r += gi(static_cast<Eigen::Index>(l)) * dx(q.vars[l]);
      rate(i) = r;
    }
    dlam = (-lam.array() + (inv_t + lam.array() * rate.array()) / (-f.array())).matrix();
    dnu = nu_plus - nu;
    return dlam.allFinite();
  }

  /// Largest step in (0, 1] keeping lambda > 0 and every f_i < 0.
  double max_step(const Vector& x, const Vector& f, const Vector& lam, const Vector& dx, const Vector& dlam,
                  const Vector& rate) {
    double step = 1.0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (dlam(i) < 0.0) step = std::min(step, -lam(i) / dlam(i));
      const auto& q = prob_.inequalities()[static_cast<std::size_t>(i)];
      if (q.kind == Inequality::Kind::Linear && rate(i) > 0.0) step = std::min(step, -f(i) / rate(i));
    }
    // f is convex along the line, so feasible steps form an interval
    for (Eigen::Index i = 0; i < m_; ++i) {
      const auto& q = prob_.inequalities()[static_cast<std::size_t>(i)];
      if (q.kind == Inequality::Kind::Linear) continue;
      SmoothProblem::map_values(q, x, &dx, v_, dv_);
      if (SmoothProblem::value_along(q, v_, dv_, step) < 0.0) continue;
      double lo = 0.0, hi = step;
      for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (SmoothProblem::value_along(q, v_, dv_, mid) < 0.0 ? lo : hi) = mid;
      }
      step = lo;
    }
    return step;
  }

  const SmoothProblem& prob_;
  const SolverOptions& opt_;
  Eigen::Index m_;
  std::vector<Vector> grads_;
  std::vector<Matrix> hess_;
  NewtonSystem system_;
  std::vector<Triplet> trip_;
  Matrix lowrank_;
  std::vector<double> v_, dv_;
};

}  // namespace

ConeSolution InteriorPointSolver::solve(const ConeProgram& program,
                                  const std::optional<Eigen::VectorXd>& start) const {
  const int n = program.variable_count();
  ConeSolution sol;
  Vector x = start ? *start : Vector::Zero(n);
  if (x.size() != n) throw std::invalid_argument("start point has wrong length");

  // Pull the start into the open box where both bounds are finite.
  for (int i = 0; i < n; ++i) {
    const double lo = program.lower()(i), hi = program.upper()(i);
    if (std::isfinite(lo) && std::isfinite(hi) && lo < hi && !(x(i) > lo && x(i) < hi))
      x(i) = lo + 0.5 * (hi - lo);
  }

  BarrierProblem phase2(program, false);
  if (phase2.eq_matrix().rows() > 0) {
    const Matrix& e = phase2.eq_matrix();
    const Vector resid = e * x - phase2.eq_rhs();
    x -= e.transpose() * (e * e.transpose()).ldlt().solve(resid);
  }

  int iterations = 0;
  if (!phase2.in_domain(x)) {
    BarrierProblem phase1(program, true);
    double sigma = std::max(0.0, phase1.worst_linear_violation(x)) + 1.0;
    for (int k = 0; k < 200 && !phase1.cones_interior_at(x, sigma); ++k) sigma = 2.0 * sigma + 1.0;
    Vector z(n + 1);
    z << x, sigma;
    if (!phase1.in_domain(z)) {
      sol.status = ConeStatus::NumericalError;
      sol.message = "could not construct a phase I starting point";
      sol.primal = x;
      return sol;
    }
    PathFollower follower(phase1, options_, "phase1");
    double t = 1.0;
    bool feasible = false;
    const auto early = [&](const Vector& v) { return v(n) <= -1e-3; };
    for (int outer = 0; outer < 100; ++outer) {
      const auto res = follower.center(z, t, iterations, early);
      if (res == CenterResult::Failed) {
        sol.status = ConeStatus::NumericalError;
        sol.message = "phase I factorization failed";
        sol.primal = z.head(n);
        sol.iterations = iterations;
        return sol;
      }
      if (z(n) < 0.0) {
        feasible = true;
        break;
      }
      if (res != CenterResult::Stopped && z(n) - phase1.nu() / t > 0.0) break;
      if (phase1.nu() / t < 1e-13 || iterations >= options_.max_iterations) break;
      t *= options_.barrier_growth;
    }
    if (!feasible) {
      sol.status = iterations >= options_.max_iterations ? ConeStatus::IterationLimit
                                                          : ConeStatus::Infeasible;
      std::ostringstream os;
      os << "no strictly feasible point; minimal uniform relaxation " << z(n);
      sol.message = os.str();
      sol.primal = z.head(n);
      sol.gap = z(n);
      sol.iterations = iterations;
      return sol;
    }
    x = z.head(n);
  }

  // start the primal-dual iteration from a point on the central path
  const double t0 = 1.0;
  PathFollower follower(phase2, options_, "center");
  if (follower.center(x, t0, iterations, nullptr) == CenterResult::Failed) {
    sol.status = ConeStatus::NumericalError;
    sol.message = "Newton system factorization failed";
    sol.primal = x;
    return sol;
  }
  const SmoothProblem smooth(phase2);
  PrimalDual pd(smooth, options_);
  Vector lam, nu;
  sol.status = pd.run(x, t0, lam, nu, iterations, sol.gap, sol.message);
  pd.restore(x);
  const double scale = phase2.objective_scale();
  lam *= scale;
  nu *= scale;
  sol.gap *= scale;
  sol.primal = x;
  sol.objective = program.evaluate_objective(x);
  sol.iterations = iterations;
  sol.dual_linear = pd.linear_duals(x, lam, nu, program.linear().size());
  sol.dual_cone = pd.cone_duals(x, lam, sol.dual_linear);
  return sol;
}

}  // namespace spreadalloc
