#pragma once

#include "spreadalloc/cone_program.hpp"
#include "spreadalloc/network.hpp"

#include <stdexcept>
#include <string>

namespace spreadalloc {

/// The discounted cost is infinite: the spectral abscissa is not below r.
class StabilityError : public std::runtime_error {
 public:
  StabilityError(const std::string& what, double margin)
      : std::runtime_error(what), margin_(margin) {}
  double margin() const { return margin_; }

 private:
  double margin_;
};

/// An iterative eigenvalue method did not converge.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

/// Discounted cost-to-go per unit initial infection probability.
struct ImpactVector {
  Vector values;
};

struct RiskVector {
  Vector values;
  double max_risk = 0.0;
  int argmax = -1;  // smallest maximizing index, -1 for an empty network
  double total_risk = 0.0;
};

struct StabilityReport {
  bool stable = false;
  double abscissa = 0.0;
  double margin = 0.0;  // r - abscissa
  bool dense = true;
  int iterations = 0;
};

/// Networks up to this size use a dense eigensolver for the abscissa.
inline constexpr int kDenseEigenLimit = 2000;

/// Largest real part among the eigenvalues of A. Dense for n <= 2000;
/// otherwise Collatz-Wielandt bracketed power iteration on A + I.
double spectral_abscissa(const SpreadingNetwork& net, int* iterations = nullptr,
                         bool* dense = nullptr);

/// Stable iff r - abscissa > 1e-9.
StabilityReport check_discount_stability(const SpreadingNetwork& net);

/// Solves (rI - A)' p = C' by sparse LU. The solve also computes
/// q = (rI - A)^{-T} 1, whose strict positivity certifies that rI - A is a
/// nonsingular M-matrix; a StabilityError is thrown otherwise.
ImpactVector impact_direct(const SpreadingNetwork& net);

/// Node impact from the linear program  min |p|_1  s.t. p >= 0,
/// p'(A - rI) <= -C, solved with the given backend (native barrier if null).
ImpactVector impact_lp(const SpreadingNetwork& net, const ConeSolver* solver = nullptr);

RiskVector risk(const SpreadingNetwork& net, const ImpactVector& impact);

/// Perron root of the Metzler state matrix (real by Perron-Frobenius).
double dominant_eigenvalue(const SpreadingNetwork& net);

}  // namespace spreadalloc
