#include "spreadalloc/cone_program.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spreadalloc {

double AffineExpr::evaluate(const Eigen::VectorXd& x) const {
  double v = constant;
  for (const auto& t : terms) v += t.coeff * x(t.var);
  return v;
}

int ConeProgram::add_variable(std::string name, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("variable " + name + ": lower > upper");
  const auto idx = static_cast<int>(names_.size());
  names_.push_back(std::move(name));
  lower_.conservativeResize(idx + 1);
  upper_.conservativeResize(idx + 1);
  objective_.conservativeResize(idx + 1);
  lower_(idx) = lower;
  upper_(idx) = upper;
  objective_(idx) = 0.0;
  return idx;
}

void ConeProgram::add_linear(std::vector<LinearTerm> terms, Sense sense, double rhs) {
  for (const auto& t : terms)
    if (t.var < 0 || t.var >= variable_count())
      throw std::out_of_range("linear constraint references unknown variable");
  linear_.push_back({std::move(terms), sense, rhs});
}

void ConeProgram::add_exp_cone(AffineExpr a, AffineExpr b, AffineExpr c) {
  for (const auto* e : {&a, &b, &c})
    for (const auto& t : e->terms)
      if (t.var < 0 || t.var >= variable_count())
        throw std::out_of_range("cone constraint references unknown variable");
  cones_.push_back({std::move(a), std::move(b), std::move(c)});
}

std::vector<int> ConeProgram::add_log_sum_exp(const std::vector<AffineExpr>& exponents,
                                              double bound, const std::string& label) {
  std::vector<int> aux;
  std::vector<LinearTerm> row;
  double rhs = bound;
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    const auto& z = exponents[k];
    if (z.is_constant()) {
      rhs -= std::exp(z.constant);
      continue;
    }
    // s > 0 is implied by the cone membership
    const int s = add_variable(label + ".s" + std::to_string(k));
    add_exp_cone(z, AffineExpr(1.0), AffineExpr({{s, 1.0}}, 0.0));
    aux.push_back(s);
    row.push_back({s, 1.0});
  }
  if (row.empty()) {
    if (rhs < 0.0) throw std::domain_error(label + ": constant terms exceed the bound");
    return aux;
  }
  add_linear(std::move(row), Sense::LessEqual, rhs);
  return aux;
}

void ConeProgram::set_objective(std::vector<LinearTerm> terms, double constant) {
  objective_.setZero(variable_count());
  for (const auto& t : terms) objective_(t.var) += t.coeff;
  objective_constant_ = constant;
}

double ConeProgram::evaluate_objective(const Eigen::VectorXd& x) const {
  return objective_.dot(x) + objective_constant_;
}

double ConeProgram::max_violation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (int i = 0; i < variable_count(); ++i)
    worst = std::max({worst, lower_(i) - x(i), x(i) - upper_(i)});
  for (const auto& row : linear_) {
    double lhs = 0.0;
    for (const auto& t : row.terms) lhs += t.coeff * x(t.var);
    switch (row.sense) {
      case Sense::LessEqual: worst = std::max(worst, lhs - row.rhs); break;
      case Sense::GreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
      case Sense::Equal: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  for (const auto& k : cones_) {
    const double a = k.a.evaluate(x), b = k.b.evaluate(x), c = k.c.evaluate(x);
    if (b <= 0.0) {
      worst = std::max(worst, -b);
      continue;
    }
    worst = std::max(worst, b * std::exp(a / b) - c);
  }
  return worst;
}

std::string to_string(ConeStatus status) {
  switch (status) {
    case ConeStatus::Optimal: return "optimal";
    case ConeStatus::Infeasible: return "infeasible";
    case ConeStatus::IterationLimit: return "iteration_limit";
    case ConeStatus::NumericalError: return "numerical_error";
  }
  return "unknown";
}

}  // namespace spreadalloc
