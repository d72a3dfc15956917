#include "prophet/curves.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "prophet/kernels.hpp"
#include "prophet/quadrature.hpp"

namespace prophet {
namespace {

double product_of_cdfs(const Instance& inst, double v) noexcept {
  double prod = 1.0;
  for (const auto& d : inst.items) prod *= d.cdf(v);
  return prod;
}

double max_ess_inf(const Instance& inst) noexcept {
  double m = 0.0;
  for (const auto& d : inst.items) m = std::max(m, d.support().ess_inf);
  return m;
}

double max_ess_sup(const Instance& inst) noexcept {
  double m = 0.0;
  for (const auto& d : inst.items) m = std::max(m, d.support().ess_sup);
  return m;
}

// Linear interpolation between nodes (xs[j], ys[j]) using the last node with
// xs[j] <= xv, which realizes the sup convention at repeated x values.
double eval_sup(const std::vector<double>& xs, const std::vector<double>& ys, double xv) noexcept {
  if (xs.empty()) return 0.0;
  auto it = std::upper_bound(xs.begin(), xs.end(), xv);
  if (it == xs.begin()) return ys.front();
  const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
  if (j + 1 == xs.size()) return ys.back();
  const double w = (xv - xs[j]) / (xs[j + 1] - xs[j]);
  return ys[j] + w * (ys[j + 1] - ys[j]);
}

}  // namespace

double survival_of_max(const Instance& inst, double v) noexcept {
  return 1.0 - product_of_cdfs(inst, v);
}

double eval_tau(const Instance& inst, double t, double tol) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("eval_tau: t outside [0, 1]");
  const double lo = max_ess_inf(inst);
  if (t == 1.0) return lo;
  if (t == 0.0) return max_ess_sup(inst);

  const double target = 1.0 - t;
  double hi = max_ess_sup(inst);
  if (std::isinf(hi)) {
    // Each item at its (1 - t)^(1/n) quantile puts the product at or above 1 - t.
    const double u = std::pow(target, 1.0 / static_cast<double>(inst.size()));
    hi = lo;
    for (const auto& d : inst.items) hi = std::max(hi, d.quantile(u));
    double step = std::max(hi - lo, 1.0);
    while (product_of_cdfs(inst, hi) < target) {
      hi = lo + 2.0 * step;
      step *= 2.0;
      if (std::isinf(hi)) throw BisectionError("eval_tau: could not bracket the threshold");
    }
  }
  auto above = [&](double v) { return product_of_cdfs(inst, v) >= target; };
  BisectionOptions opts;
  opts.tol = tol;
  opts.max_iterations = 200;
  return bisect_predicate(above, lo, hi, opts);
}

CurveSet build_curveset(const Instance& inst, std::size_t grid_n) {
  if (grid_n < 16) throw std::invalid_argument("build_curveset: grid resolution must be >= 16");
  if (inst.items.empty()) throw std::invalid_argument("build_curveset: empty instance");
  CurveSet cs;
  cs.n_items = inst.size();
  cs.grid_n = grid_n;
  const std::size_t cols = grid_n + 1;
  cs.t.resize(cols);
  cs.tau.resize(cols);
  cs.p.assign(cs.n_items * cols, 0.0);
  cs.q.assign(cs.n_items * cols, 0.0);
  cs.none_above.assign(cols, 1.0);

  for (std::size_t k = 0; k < cols; ++k) {
    cs.t[k] = static_cast<double>(k) / static_cast<double>(grid_n);
  }
  cs.t.back() = 1.0;

  for (std::size_t k = 0; k < cols; ++k) {
    const double tau = eval_tau(inst, cs.t[k], 0.0);
    cs.tau[k] = tau;
    if (k == 0) continue;  // p_i(0) = 0 exactly
    for (std::size_t i = 0; i < cs.n_items; ++i) {
      cs.p[i * cols + k] = 1.0 - inst.items[i].cdf(tau);
    }
  }
  kernels::complement_products(cs.p, cs.n_items, cs.none_above, cs.q);
  return cs;
}

double interpolate_tau(const CurveSet& cs, const Instance& inst, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("interpolate_tau: t outside [0, 1]");
  const double scaled = t * static_cast<double>(cs.grid_n);
  std::size_t k = std::min(static_cast<std::size_t>(scaled), cs.grid_n - 1);
  if (std::isinf(cs.tau[k])) return eval_tau(inst, t);
  const double w = scaled - static_cast<double>(k);
  return cs.tau[k] + w * (cs.tau[k + 1] - cs.tau[k]);
}

double InverseCurve::eval_q_inv(double xv) const noexcept { return eval_sup(x, q_inv, xv); }
double InverseCurve::eval_p_tilde(double xv) const noexcept { return eval_sup(x, p_tilde, xv); }
double InverseCurve::eval_g_tilde(double xv) const noexcept { return eval_sup(x, g_tilde, xv); }

InverseCurve build_inverse_curve(const CurveSet& cs, std::size_t item, std::span<const double> g) {
  if (item >= cs.n_items) throw std::out_of_range("build_inverse_curve: item index");
  if (!g.empty() && g.size() != cs.cols()) {
    throw std::invalid_argument("build_inverse_curve: auxiliary function size mismatch");
  }
  const auto q = cs.q_row(item);
  const auto p = cs.p_row(item);
  InverseCurve ic;
  ic.item = item;
  auto push = [&](std::size_t k) {
    ic.x.push_back(q[k]);
    ic.q_inv.push_back(cs.t[k]);
    ic.p_tilde.push_back(p[k]);
    if (!g.empty()) ic.g_tilde.push_back(g[k]);
  };
  const std::size_t cols = cs.cols();
  std::size_t k = 0;
  while (k < cols) {
    std::size_t end = k;
    while (end + 1 < cols && q[end + 1] == q[k]) ++end;
    push(k);
    if (end != k) push(end);
    k = end + 1;
  }
  return ic;
}

void write_curves_csv(std::ostream& out, const CurveSet& cs) {
  const auto old_prec = out.precision(17);
  out << "t,tau";
  for (std::size_t i = 0; i < cs.n_items; ++i) out << ",p_" << i + 1;
  for (std::size_t i = 0; i < cs.n_items; ++i) out << ",q_" << i + 1;
  out << "\r\n";
  for (std::size_t k = 0; k < cs.cols(); ++k) {
    out << cs.t[k] << ',' << cs.tau[k];
    for (std::size_t i = 0; i < cs.n_items; ++i) out << ',' << cs.p_row(i)[k];
    for (std::size_t i = 0; i < cs.n_items; ++i) out << ',' << cs.q_row(i)[k];
    out << "\r\n";
  }
  out.precision(old_prec);
}

}  // namespace prophet
