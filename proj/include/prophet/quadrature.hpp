#pragma once

// Numerical building blocks shared by the constants, engine and verify
// modules: adaptive Gauss-Kronrod integration, Gauss-Legendre rules and
// monotone bisection.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace prophet {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Adaptive 15-point Gauss-Kronrod on a finite interval. Stops when the
// estimated error is below max(abs_tol, rel_tol * |value|).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-13, double rel_tol = 1e-13,
                           unsigned max_depth = 30);

// Integral over [a, +inf) through the map x = a + s / (1 - s).
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       double abs_tol = 1e-13, double rel_tol = 1e-13);

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;  // sum to 2
};

// n-point rule, cached per n.
const GaussLegendreRule& gauss_legendre(std::size_t n);

class BisectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BisectionOptions {
  // Stop once hi - lo <= tol * max(|lo|, |hi|, tiny). tol = 0 means "until lo
  // and hi are adjacent doubles".
  double tol = 1e-12;
  int max_iterations = 200;
};

// Finds the boundary of a monotone predicate: pred(lo) is false, pred(hi) is
// true. Returns the final hi, so pred(result) holds. Throws BisectionError if
// the iteration cap is hit before the tolerance.
double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi,
                        const BisectionOptions& options = {});

// Root of a continuous function with f(lo) and f(hi) of opposite sign.
// Throws BisectionError when the bracket does not straddle zero.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   const BisectionOptions& options = {});

}  // namespace prophet
