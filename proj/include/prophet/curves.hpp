#pragma once

// Threshold curve tau(t) and the exceedance curves p_i(t), q_i(t) on a
// uniform grid t_k = k / N.
//
//   tau(t)  : Pr[max_i v_i > tau(t)] = t
//   p_i(t)  : Pr[v_i > tau(t)]
//   q_i(t)  : Pr[max_{j != i} v_j > tau(t)] = 1 - prod_{j != i} (1 - p_j(t))
//
// Derivatives of p_i and q_i are never formed; integrals against dq_i are
// Riemann-Stieltjes sums over grid increments.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "prophet/distributions.hpp"

namespace prophet {

// Pr[max_i v_i > v] = 1 - prod_i cdf_i(v).
double survival_of_max(const Instance& inst, double v) noexcept;

// Threshold with Pr[max_i v_i > tau] = t, by bisection on the value axis.
// tol is relative on the value axis; tol = 0 bisects to adjacent doubles.
// t = 1 gives max_i ess_inf; t = 0 gives max_i ess_sup (+inf if unbounded).
// Throws std::domain_error for t outside [0, 1].
double eval_tau(const Instance& inst, double t, double tol = 1e-12);

struct CurveSet {
  std::size_t n_items = 0;
  std::size_t grid_n = 0;       // N; the grid has N + 1 points
  std::vector<double> t;        // t_k = k / N
  std::vector<double> tau;      // nonincreasing; tau[0] may be +inf
  std::vector<double> p;        // n_items x (N + 1), row-major
  std::vector<double> q;        // n_items x (N + 1), row-major
  std::vector<double> none_above;  // prod_i (1 - p_i(t_k)); equals 1 - t_k

  std::size_t cols() const noexcept { return grid_n + 1; }
  std::span<const double> p_row(std::size_t i) const noexcept {
    return {p.data() + i * cols(), cols()};
  }
  std::span<const double> q_row(std::size_t i) const noexcept {
    return {q.data() + i * cols(), cols()};
  }
};

// N >= 16. Each grid point is an independent full-precision bisection, so
// values at shared grid points do not depend on N.
CurveSet build_curveset(const Instance& inst, std::size_t grid_n = 4096);

// tau at an arbitrary time by linear interpolation of the grid (fast mode).
// Falls back to exact evaluation in the first cell when tau(0) is infinite.
double interpolate_tau(const CurveSet& cs, const Instance& inst, double t);

// The curves of one item re-parameterized by x = q_i(t):
//   q_inv(x) = sup{t : q_i(t) <= x},  p_tilde(x) = p_i(q_inv(x)),  g_tilde(x) = g(q_inv(x)).
// Nodes are the grid pairs (q_i(t_k), t_k). Where q_i is flat the run is
// reduced to its first and last node, so the x values repeat once and the
// node pair carries the left and right limits of the jump in q_inv.
struct InverseCurve {
  std::size_t item = 0;
  std::vector<double> x;        // nondecreasing, from 0 to q_i(1)
  std::vector<double> q_inv;    // nondecreasing
  std::vector<double> p_tilde;
  std::vector<double> g_tilde;  // empty unless an auxiliary function was supplied

  double x_max() const noexcept { return x.back(); }
  // Values at an arbitrary x in [0, x_max], sup convention at repeated nodes.
  double eval_q_inv(double xv) const noexcept;
  double eval_p_tilde(double xv) const noexcept;
  double eval_g_tilde(double xv) const noexcept;
};

// g is the auxiliary function on the same grid (ArrivalSchedule::g); pass an
// empty span to leave g_tilde unset.
InverseCurve build_inverse_curve(const CurveSet& cs, std::size_t item,
                                 std::span<const double> g = {});

// CSV: t, tau, p_1..p_n, q_1..q_n. Doubles printed with 17 significant digits.
void write_curves_csv(std::ostream& out, const CurveSet& cs);

}  // namespace prophet
