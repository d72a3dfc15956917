#include "prophet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

namespace prophet {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double rel_tol, unsigned max_depth) {
  if (a == b) return {};
  // Boost's termination is relative; recurse by hand so an absolute floor
  // also ends the refinement (integrands that vanish on the interval).
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  QuadratureResult total;
  struct Panel {
    double lo, hi;
    unsigned depth;
  };
  std::vector<Panel> stack{{a, b, 0}};
  const double full_width = std::abs(b - a);
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    double err = 0.0;
    const double val = Rule::integrate(f, p.lo, p.hi, 0, 0.0, &err);
    // With max_depth 0 the reported error is that of the rule on [-1, 1],
    // before the change of variables.
    err *= 0.5 * std::abs(p.hi - p.lo);
    const double share = std::abs(p.hi - p.lo) / full_width;
    const bool ok = err <= std::max(abs_tol * share, rel_tol * std::abs(val)) ||
                    p.depth >= max_depth;
    if (ok) {
      total.value += val;
      total.error_estimate += err;
    } else {
      const double mid = 0.5 * (p.lo + p.hi);
      stack.push_back({mid, p.hi, p.depth + 1});
      stack.push_back({p.lo, mid, p.depth + 1});
    }
  }
  return total;
}

QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       double abs_tol, double rel_tol) {
  auto mapped = [&](double s) {
    if (s >= 1.0) return 0.0;
    const double one_minus = 1.0 - s;
    const double x = a + s / one_minus;
    const double val = f(x);
    return val == 0.0 ? 0.0 : val / (one_minus * one_minus);
  };
  return integrate(mapped, 0.0, 1.0, abs_tol, rel_tol);
}

const GaussLegendreRule& gauss_legendre(std::size_t n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  static std::mutex mu;
  static std::map<std::size_t, GaussLegendreRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const int order = static_cast<int>(n);
  // Nonnegative zeros, ascending; mirror them for the full rule.
  const std::vector<double> half = boost::math::legendre_p_zeros<double>(order);
  GaussLegendreRule rule;
  for (auto z = half.rbegin(); z != half.rend(); ++z) {
    if (*z != 0.0) rule.nodes.push_back(-*z);
  }
  for (double z : half) rule.nodes.push_back(z);
  for (double x : rule.nodes) {
    const double dp = boost::math::legendre_p_prime<double>(order, x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi,
                        const BisectionOptions& options) {
  for (int it = 0; it < options.max_iterations; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) return hi;
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
    if (options.tol > 0.0 && hi - lo <= options.tol * scale) return hi;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw BisectionError("bisection did not converge within the iteration cap");
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   const BisectionOptions& options) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) throw BisectionError("bracket does not straddle a root");
  const bool increasing = flo < 0.0;
  auto pred = [&](double x) { return increasing ? f(x) >= 0.0 : f(x) <= 0.0; };
  const double upper = bisect_predicate(pred, lo, hi, options);
  return upper;
}

}  // namespace prophet
