#include "prophet/constants.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "prophet/quadrature.hpp"

namespace prophet {
namespace {

// -x ln x + x, with the limit 0 at x = 0.
double xlogx_term(double x) noexcept { return x == 0.0 ? 0.0 : -x * std::log(x) + x; }

constexpr double kQuadTol = 1e-13;

}  // namespace

double gamma_iid_integral(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("gamma_iid_integral: gamma in (0, 1)");
  const double c = 1.0 / gamma - 1.0;
  // y (1 - ln y) -> 0 as y -> 0, so the integrand tends to 1 / c there.
  auto integrand = [c](double y) { return 1.0 / (xlogx_term(y) + c); };
  return integrate(integrand, 0.0, 1.0, kQuadTol, kQuadTol).value;
}

double solve_gamma_iid(double tol) {
  BisectionOptions opts;
  opts.tol = tol;
  return bisect_root([](double g) { return gamma_iid_integral(g) - 1.0; }, 0.6, 0.9, opts);
}

double y_function(double z) {
  if (!(z > 0.0 && z < 1.0)) throw std::domain_error("y_function: z outside (0, 1)");
  const double a = std::log(z) + 1.0;
  // At z = 1/e the numerator vanishes while the denominator is -z, so the
  // integral is 0 and Y = 1/ln z = -1; the general formula already gives that.
  auto integrand = [a, z](double x) { return a / (a * xlogx_term(x) - z); };
  return integrate(integrand, z, 1.0, kQuadTol, kQuadTol).value + 1.0 / std::log(z);
}

double gamma_from_alpha(double alpha) {
  const double l = std::log(alpha) + 1.0;
  return l / (l - alpha);
}

AlphaSolution solve_alpha(double tol) {
  BisectionOptions opts;
  opts.tol = tol;
  AlphaSolution s;
  s.alpha = bisect_root(y_function, 0.05, 0.9, opts);
  s.gamma_sel = gamma_from_alpha(s.alpha);
  return s;
}

double h_function(double gamma, double z) {
  const double w = 1.0 - z;
  const double ent = w <= 0.0 ? 0.0 : -w * std::log(w);
  return gamma * ent / (gamma * (ent - z) + 1.0);
}

double k_function(double gamma, double z) { return gamma * (1.0 - z) / (1.0 - gamma * z); }

double alpha_consistency_residual(double gamma, double alpha) {
  auto integrand = [gamma](double y) { return gamma / (gamma * (xlogx_term(y) - 1.0) + 1.0); };
  return integrate(integrand, alpha, 1.0, kQuadTol, kQuadTol).value + 1.0 / std::log(alpha);
}

HkTable hk_curves(double gamma, double alpha, std::size_t m) {
  if (m < 2) throw std::invalid_argument("hk_curves: need M >= 2");
  HkTable table;
  table.z1 = 1.0 - alpha;
  table.rows.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double z = static_cast<double>(j) / static_cast<double>(m);
    const double h = h_function(gamma, z);
    const double k = k_function(gamma, z);
    table.rows.push_back({z, h, k});
    // Grid points within 1e-9 of the crossing are exempt; H - K vanishes there.
    if (z == 0.0 || std::abs(z - table.z1) < 1e-9) continue;
    const bool before = z < table.z1;
    if (before ? !(h < k) : !(h > k)) {
      table.violations.push_back("z=" + std::to_string(z) + (before ? ": H >= K" : ": H <= K"));
    }
  }
  table.crossing_ok = table.violations.empty();
  return table;
}

void write_hk_csv(std::ostream& out, const HkTable& table) {
  const auto old_prec = out.precision(17);
  out << "z,H,K\r\n";
  for (const auto& r : table.rows) out << r.z << ',' << r.h << ',' << r.k << "\r\n";
  out.precision(old_prec);
}

const Constants& constants() {
  static const Constants cached = [] {
    Constants c;
    c.gamma_iid = solve_gamma_iid();
    const auto sol = solve_alpha();
    c.alpha = sol.alpha;
    c.gamma_sel = sol.gamma_sel;
    c.z1 = 1.0 - sol.alpha;
    c.residual_gamma_iid = std::abs(gamma_iid_integral(c.gamma_iid) - 1.0);
    c.residual_alpha = std::abs(y_function(c.alpha));
    c.residual_consistency = std::abs(alpha_consistency_residual(c.gamma_sel, c.alpha));
    return c;
  }();
  return cached;
}

std::string constants_to_json(const Constants& c) {
  nlohmann::json j;
  j["gamma_iid"] = c.gamma_iid;
  j["alpha"] = c.alpha;
  j["gamma_sel"] = c.gamma_sel;
  j["z1"] = c.z1;
  j["residuals"] = {{"gamma_iid", c.residual_gamma_iid},
                    {"alpha", c.residual_alpha},
                    {"consistency", c.residual_consistency}};
  return j.dump(2);
}

}  // namespace prophet
