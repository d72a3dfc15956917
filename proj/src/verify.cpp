#include "prophet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "prophet/constants.hpp"
#include "prophet/engine.hpp"
#include "prophet/quadrature.hpp"

namespace prophet {
namespace {

constexpr std::size_t kWorstKept = 10;

// Keeps the points with the largest residuals.
class Worst {
 public:
  void add(CheckPoint p) {
    max_ = std::max(max_, p.residual);
    pts_.push_back(std::move(p));
    if (pts_.size() > 4 * kWorstKept) trim();
  }
  double max() const { return max_; }
  std::vector<CheckPoint> take() {
    trim();
    return std::move(pts_);
  }

 private:
  void trim() {
    std::sort(pts_.begin(), pts_.end(),
              [](const CheckPoint& a, const CheckPoint& b) { return a.residual > b.residual; });
    if (pts_.size() > kWorstKept) pts_.resize(kWorstKept);
  }
  double max_ = -std::numeric_limits<double>::infinity();
  std::vector<CheckPoint> pts_;
};

// (1 - x) ln(1 - x) with the limit 0 at x = 1.
double one_minus_log(double x) {
  const double w = 1.0 - x;
  return w <= 0.0 ? 0.0 : w * std::log(w);
}

double gp_bound(double gamma, double x, double p) {
  return gamma * (-one_minus_log(x) * (1.0 - p) - x) + 1.0;
}

std::string item_label(std::size_t i) { return "item " + std::to_string(i + 1); }

// Linear interpolation of a table on the uniform grid k / N.
double on_grid(const std::vector<double>& table, std::size_t grid_n, double t) {
  const double s = t * static_cast<double>(grid_n);
  const std::size_t k = std::min(static_cast<std::size_t>(s), grid_n - 1);
  const double w = s - static_cast<double>(k);
  return table[k] + w * (table[k + 1] - table[k]);
}

}  // namespace

CheckReport check_identities(const CurveSet& cs) {
  CheckReport rep;
  rep.check_name = "identities";
  rep.grid_n = cs.grid_n;
  const std::size_t n = cs.n_items;
  const std::size_t cols = cs.cols();
  const double tol1 = 1e-9, tol2 = 1e-9;
  const double tol3 = 2.0 / static_cast<double>(cs.grid_n) + 1e-6;

  Worst w;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0;
  double integrated = 0.0;
  for (std::size_t k = 0; k < cols; ++k) {
    const double t = cs.t[k];
    double prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) prod *= 1.0 - cs.p_row(i)[k];
    const double e1 = std::abs(prod - (1.0 - t));
    r1 = std::max(r1, e1);
    w.add({"eq1", t, prod, 1.0 - t, e1 / tol1});

    for (std::size_t i = 0; i < n; ++i) {
      // Cross-multiplied so that the eq1 error is not amplified by 1 / (1 - p_i)^2 near t = 1.
      const double lhs = (1.0 - cs.q_row(i)[k]) * (1.0 - cs.p_row(i)[k]);
      const double e2 = std::abs(lhs - (1.0 - t));
      r2 = std::max(r2, e2);
      w.add({"eq2 " + item_label(i), t, lhs, 1.0 - t, e2 / tol2});
    }

    if (k > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto p = cs.p_row(i);
        const auto q = cs.q_row(i);
        integrated += (p[k] - p[k - 1]) * (1.0 - 0.5 * (q[k] + q[k - 1]));
      }
    }
    const double e3 = std::abs(integrated - t);
    r3 = std::max(r3, e3);
    w.add({"eq3", t, integrated, t, e3 / tol3});
  }
  rep.metrics = {{"eq1_residual", r1}, {"eq2_residual", r2}, {"eq3_residual", r3},
                 {"eq3_tolerance", tol3}};
  rep.max_residual = w.max();
  rep.tolerance = 1.0;
  rep.passed = rep.max_residual <= 1.0;
  rep.note = "residuals normalized by their tolerances (1e-9, 1e-9, 2/N + 1e-6)";
  rep.details = w.take();
  return rep;
}

CheckReport check_mathfacts(const ArrivalSchedule& sched, const CurveSet& cs) {
  CheckReport rep;
  rep.check_name = "mathfacts";
  rep.grid_n = cs.grid_n;
  rep.tolerance = 5e-3;
  const std::size_t n = cs.n_items;
  const std::size_t cols = cs.cols();
  if (sched.exponent.empty()) throw std::invalid_argument("check_mathfacts: schedule has no exponent table");

  Worst w;
  std::vector<double> survived(n, 1.0);  // 1 - int_0^t p_i f_i
  double r1 = 0.0, r2 = 0.0;
  for (std::size_t k = 0; k < cols; ++k) {
    const double t = cs.t[k];
    double prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (k > 0) {
        const auto p = cs.p_row(i);
        const auto F = sched.cdf_row(i);
        survived[i] -= 0.5 * (p[k] + p[k - 1]) * (F[k] - F[k - 1]);
      }
      const double target = std::exp(-sched.exponent_row(i)[k]);
      const double e1 = std::abs(survived[i] - target);
      r1 = std::max(r1, e1);
      w.add({"statement1 " + item_label(i), t, survived[i], target, e1});
      prod *= survived[i];
    }
    const double e2 = std::abs(sched.g[k] - prod);
    r2 = std::max(r2, e2);
    w.add({"statement2", t, sched.g[k], prod, e2});
  }
  rep.metrics = {{"statement1_residual", r1}, {"statement2_residual", r2}};
  rep.max_residual = std::max(r1, r2);
  rep.passed = rep.max_residual <= rep.tolerance;
  rep.details = w.take();
  return rep;
}

CheckReport check_mathfacts_refined(const Instance& inst, double gamma, std::size_t grid_n) {
  ScheduleOptions so;
  so.allow_invalid = true;
  const CurveSet cs = build_curveset(inst, grid_n);
  const ArrivalSchedule sched = build_schedule(cs, gamma, so);
  CheckReport rep = check_mathfacts(sched, cs);
  const CurveSet cs2 = build_curveset(inst, 2 * grid_n);
  const ArrivalSchedule sched2 = build_schedule(cs2, gamma, so);
  const CheckReport fine = check_mathfacts(sched2, cs2);

  const double ratio = fine.max_residual > 0.0 ? rep.max_residual / fine.max_residual
                                               : std::numeric_limits<double>::infinity();
  const bool refines = rep.max_residual <= kRefinementFloor || ratio >= 1.8;
  rep.instance_label = inst.label;
  rep.metrics.push_back({"gamma", gamma});
  rep.metrics.push_back({"residual_at_2N", fine.max_residual});
  rep.metrics.push_back({"refinement_ratio", ratio});
  rep.passed = rep.passed && fine.max_residual <= rep.tolerance && refines;
  if (!refines) rep.note = "residual did not shrink by 1.8x at 2N";
  return rep;
}

CheckReport check_validity(const ArrivalSchedule& sched, const CurveSet& cs, double gamma) {
  CheckReport rep;
  rep.check_name = "validity";
  rep.grid_n = cs.grid_n;
  rep.tolerance = 1.0;
  rep.note = "residuals normalized: mass excess / 1e-6 and inequality shortfall / 5e-3";
  const std::size_t last = cs.grid_n;
  Worst w;
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_mass = 0.0;
  for (std::size_t i = 0; i < cs.n_items; ++i) {
    const double mass = sched.cdf_row(i)[last];
    worst_mass = std::max(worst_mass, mass);
    w.add({"mass " + item_label(i), 1.0, mass, 1.0, (mass - 1.0) / 1e-6});

    const double q1 = cs.q_row(i)[last];
    const double lhs = (1.0 - gamma * q1) * (1.0 - mass) * std::exp(sched.exponent_row(i)[last]);
    const double rhs = gamma * (1.0 - q1);
    worst_margin = std::min(worst_margin, lhs - rhs);
    w.add({"inequality " + item_label(i), q1, lhs, rhs, (rhs - lhs) / 5e-3});
  }
  rep.metrics = {{"gamma", gamma}, {"max_mass", worst_mass}, {"min_margin", worst_margin}};
  rep.max_residual = w.max();
  rep.passed = rep.max_residual <= rep.tolerance;
  rep.details = w.take();
  return rep;
}

CheckReport check_claim_iid(std::size_t n, double gamma, std::size_t m) {
  if (n < 2) throw std::invalid_argument("check_claim_iid: n >= 2");
  if (m < 2) throw std::invalid_argument("check_claim_iid: M >= 2");
  CheckReport rep;
  rep.check_name = "claim_iid";
  rep.instance_label = "iid n=" + std::to_string(n);
  rep.grid_n = m;
  rep.tolerance = 1e-6;
  const double nn = static_cast<double>(n);
  auto p = [nn](double x) { return 1.0 - std::pow(1.0 - x, 1.0 / (nn - 1.0)); };
  auto g = [nn, gamma](double x) {
    const double a = std::pow(1.0 - x, nn / (nn - 1.0));
    return gamma * (nn * (1.0 - x - a) - 1.0 + a) + 1.0;
  };
  auto ratio = [&](double x) { return p(x) / g(x); };

  Worst w;
  double integral = 0.0;
  double prev = 0.0;
  for (std::size_t j = 0; j <= m; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(m);
    if (j > 0) integral += integrate(ratio, prev, x, 1e-15, 1e-14).value;
    prev = x;
    const double lhs = g(x) * std::exp(gamma * integral);
    const double rhs = gamma * (-one_minus_log(x) - x) + 1.0;
    w.add({"claim", x, lhs, rhs, rhs - lhs});
  }
  rep.max_residual = w.max();
  rep.passed = rep.max_residual <= rep.tolerance;
  rep.metrics = {{"gamma", gamma}, {"n", nn}};
  rep.details = w.take();
  return rep;
}

CheckReport check_claim_gp(const CurveSet& cs, const ArrivalSchedule& sched) {
  CheckReport rep;
  rep.check_name = "claim_gp";
  rep.grid_n = cs.grid_n;
  rep.tolerance = 1e-6;
  const double gamma = sched.gamma;
  Worst w;
  for (std::size_t i = 0; i < cs.n_items; ++i) {
    const InverseCurve ic = build_inverse_curve(cs, i, sched.g);
    for (std::size_t j = 0; j < ic.x.size(); ++j) {
      const double x = ic.x[j];
      const double rhs = gp_bound(gamma, x, ic.p_tilde[j]);
      w.add({item_label(i), x, ic.g_tilde[j], rhs, rhs - ic.g_tilde[j]});
    }
    const double xm = ic.x_max();
    if (xm < 1.0) {
      // The extension starts from p~ = 1, g~ = 1 - G q_i(1); the curve's own
      // end point must agree.
      const double gap_g = std::abs(ic.g_tilde.back() - (1.0 - gamma * xm));
      const double gap_p = std::abs(ic.p_tilde.back() - 1.0);
      w.add({item_label(i) + " extension continuity", xm, ic.g_tilde.back(), 1.0 - gamma * xm,
             std::max(gap_g, gap_p)});
      for (int k = 1; k <= 16; ++k) {
        const double x = xm + (1.0 - xm) * k / 16.0;
        const double ext = 1.0 - gamma * x;
        const double rhs = gp_bound(gamma, x, 1.0);
        w.add({item_label(i) + " extension", x, ext, rhs, rhs - ext});
      }
    }
  }
  rep.max_residual = w.max();
  rep.passed = rep.max_residual <= rep.tolerance;
  rep.metrics = {{"gamma", gamma}};
  rep.details = w.take();
  return rep;
}

FunctionTable extended_table(const InverseCurve& ic, double gamma, std::size_t extension_nodes) {
  if (ic.g_tilde.size() != ic.x.size()) {
    throw std::invalid_argument("extended_table: inverse curve has no auxiliary function");
  }
  FunctionTable t{ic.x, ic.p_tilde, ic.g_tilde};
  const double xm = ic.x_max();
  if (xm < 1.0) {
    t.x.push_back(xm);
    t.p.push_back(1.0);
    t.g.push_back(1.0 - gamma * xm);
    const std::size_t k_max = std::max<std::size_t>(extension_nodes, 1);
    for (std::size_t k = 1; k <= k_max; ++k) {
      const double x = k == k_max ? 1.0 : xm + (1.0 - xm) * static_cast<double>(k) / static_cast<double>(k_max);
      t.x.push_back(x);
      t.p.push_back(1.0);
      t.g.push_back(1.0 - gamma * x);
    }
  }
  return t;
}

CheckReport check_lemma_integral(const FunctionTable& table, double gamma) {
  CheckReport rep;
  rep.check_name = "lemma_integral";
  rep.grid_n = table.x.size();
  rep.tolerance = 1.0 + 1e-4;
  const std::size_t m = table.x.size();
  if (m < 2 || table.p.size() != m || table.g.size() != m) {
    throw std::invalid_argument("check_lemma_integral: malformed table");
  }
  if (table.x.front() != 0.0 || table.x.back() != 1.0) {
    throw std::invalid_argument("check_lemma_integral: table must span [0, 1]");
  }

  Worst pre;
  for (std::size_t j = 0; j < m; ++j) {
    const double rhs = gp_bound(gamma, table.x[j], table.p[j]);
    pre.add({"hypothesis", table.x[j], table.g[j], rhs, rhs - table.g[j]});
  }
  if (pre.max() > 1e-6) {
    rep.note = "precondition failed";
    rep.max_residual = pre.max();
    rep.tolerance = 1e-6;
    rep.passed = false;
    rep.details = pre.take();
    return rep;
  }

  double inner = 0.0;
  double outer = 0.0;
  double prev_integrand = gamma / table.g[0];
  for (std::size_t j = 1; j < m; ++j) {
    const double h = table.x[j] - table.x[j - 1];
    inner += 0.5 * h * (table.p[j - 1] / table.g[j - 1] + table.p[j] / table.g[j]);
    const double integrand = gamma / (table.g[j] * std::exp(gamma * inner));
    outer += 0.5 * h * (prev_integrand + integrand);
    prev_integrand = integrand;
  }
  rep.max_residual = outer;
  rep.passed = outer <= rep.tolerance;
  rep.metrics = {{"G0", outer}, {"gamma", gamma}};
  rep.details.push_back({"G(0)", 0.0, outer, 1.0, outer - 1.0});
  return rep;
}

CheckReport check_alpha_uniqueness(std::size_t m) {
  if (m < 100) throw std::invalid_argument("check_alpha_uniqueness: M >= 100");
  CheckReport rep;
  rep.check_name = "alpha_uniqueness";
  rep.grid_n = m;
  rep.tolerance = 0.0;
  std::vector<double> z(m), y(m);
  for (std::size_t j = 0; j < m; ++j) {
    z[j] = 0.02 + 0.96 * static_cast<double>(j) / static_cast<double>(m - 1);
    y[j] = y_function(z[j]);
  }
  std::size_t increases = 0, sign_changes = 0;
  double max_step = -std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = 0.0;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double step = y[j + 1] - y[j];
    max_step = std::max(max_step, step);
    if (!(step < 0.0)) {
      ++increases;
      rep.details.push_back({"not decreasing", z[j], y[j + 1], y[j], step});
    }
    if ((y[j] > 0.0) != (y[j + 1] > 0.0)) {
      ++sign_changes;
      lo = z[j];
      hi = z[j + 1];
    }
  }
  const bool bracket_ok = sign_changes == 1 && lo > 0.21 && hi < 0.212;
  const double failures = static_cast<double>(increases) + (sign_changes == 1 ? 0.0 : 1.0) +
                          (bracket_ok ? 0.0 : 1.0);
  rep.max_residual = failures;
  rep.passed = failures == 0.0;
  rep.metrics = {{"sign_changes", static_cast<double>(sign_changes)},
                 {"bracket_lo", lo},
                 {"bracket_hi", hi},
                 {"max_step", max_step},
                 {"y_first", y.front()},
                 {"y_last", y.back()}};
  rep.note = "residual counts failed conditions";
  return rep;
}

CheckReport check_hk_crossing(double gamma, double alpha, std::size_t m) {
  CheckReport rep;
  rep.check_name = "hk_crossing";
  rep.grid_n = m;
  rep.tolerance = 1e-6;
  const HkTable table = hk_curves(gamma, alpha, m);
  const double z1 = 1.0 - alpha;
  const double gap = std::abs(h_function(gamma, z1) - k_function(gamma, z1));
  rep.max_residual = gap;
  rep.passed = gap <= rep.tolerance && table.crossing_ok;
  rep.metrics = {{"z1", z1}, {"violations", static_cast<double>(table.violations.size())}};
  for (const auto& v : table.violations) rep.details.push_back({v, 0.0, 0.0, 0.0, 1.0});
  return rep;
}

CheckReport check_simulation_lemmas(const Instance& inst, const CurveSet& cs,
                                    const ArrivalSchedule& sched,
                                    const SimulationCheckOptions& options) {
  CheckReport rep;
  rep.check_name = "simulation_lemmas";
  rep.instance_label = inst.label;
  rep.grid_n = cs.grid_n;
  rep.tolerance = 3.0;
  rep.note = "residual is the worst violation in standard errors";
  const SimContext ctx = make_context(inst, cs, &sched);
  SimOptions so;
  so.alg = Algorithm::main;
  so.trials = options.trials;
  so.seed = options.seed;
  so.workers = options.workers;
  const SimReport sim = estimate(ctx, so);
  const double m = static_cast<double>(sim.trials);
  const double gamma = sched.gamma;

  // Standard error at the larger of the estimate and the reference, so an
  // empirical frequency of 0 or 1 does not collapse the band.
  auto sigma = [m](const SurvivalRow& row, double reference) {
    const double r = std::clamp(reference, 0.0, 1.0);
    return std::max(row.std_error, std::sqrt(r * (1.0 - r) / m));
  };
  auto z_score = [](double excess, double s) {
    if (excess <= 0.0) return 0.0;
    if (s == 0.0) return excess > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0;
    return excess / s;
  };

  Worst w;
  const auto times = tabulated_times();
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double t = times[j];
    const double stop_ref = 1.0 - on_grid(sched.g, sched.grid_n, t);
    const auto& stop = sim.stop_before[j];
    w.add({"stop_before", t, stop.prob, stop_ref,
           z_score(std::abs(stop.prob - stop_ref), sigma(stop, stop_ref))});

    const auto& surv = sim.survival[j];
    w.add({"survival", t, surv.prob, gamma * t,
           z_score(gamma * t - surv.prob, sigma(surv, gamma * t))});

    const double tau = eval_tau(inst, t, 0.0);
    std::vector<double> p(inst.size());
    double none = 1.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      p[i] = 1.0 - inst.items[i].cdf(tau);
      none *= 1.0 - p[i];
    }
    for (std::size_t i = 0; i < inst.size(); ++i) {
      double others = 1.0;
      for (std::size_t k = 0; k < inst.size(); ++k) {
        if (k != i) others *= 1.0 - p[k];
      }
      const double bound = gamma * p[i] * others;
      const auto& b = sim.b_event[i][j];
      w.add({"b_event " + item_label(i), t, b.prob, bound, z_score(bound - b.prob, sigma(b, bound))});
    }
  }
  rep.max_residual = w.max();
  rep.passed = rep.max_residual <= rep.tolerance;
  rep.metrics = {{"gamma", gamma},
                 {"trials", m},
                 {"seed", static_cast<double>(options.seed)},
                 {"ratio", sim.ratio},
                 {"ratio_stderr", sim.ratio_stderr}};
  rep.details = w.take();
  return rep;
}

std::vector<Instance> load_corpus(const std::string& dir, const ParseOptions& options) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Instance> out;
  for (const auto& f : files) out.push_back(load_instance(f.string(), options));
  return out;
}

std::vector<CheckReport> verify_all(const std::vector<Instance>& corpus, const VerifyOptions& options) {
  const Constants& c = constants();
  std::vector<CheckReport> reports;

  CheckReport consts;
  consts.check_name = "constants";
  consts.tolerance = 1e-10;
  consts.max_residual = std::max(c.residual_gamma_iid, c.residual_alpha);
  consts.metrics = {{"gamma_iid", c.gamma_iid},
                    {"alpha", c.alpha},
                    {"gamma_sel", c.gamma_sel},
                    {"consistency_residual", c.residual_consistency}};
  consts.passed = consts.max_residual <= consts.tolerance && c.residual_consistency <= 1e-8;
  reports.push_back(consts);
  reports.push_back(check_alpha_uniqueness(1000));
  reports.push_back(check_hk_crossing(c.gamma_sel, c.alpha, 1000));
  for (std::size_t n : {2, 3, 4, 8, 16, 64}) reports.push_back(check_claim_iid(n, c.gamma_iid, 10000));

  ScheduleOptions so;
  so.allow_invalid = true;
  for (const Instance& inst : corpus) {
    const CurveSet cs = build_curveset(inst, options.grid_n);
    auto tag = [&](CheckReport r, double gamma) {
      r.instance_label = inst.label;
      if (gamma > 0.0) r.metrics.push_back({"gamma", gamma});
      return r;
    };
    reports.push_back(tag(check_identities(cs), 0.0));

    std::vector<double> gammas{c.gamma_sel};
    if (inst.is_iid()) gammas.push_back(c.gamma_iid);
    for (double gamma : gammas) {
      const ArrivalSchedule sched = build_schedule(cs, gamma, so);
      reports.push_back(check_mathfacts_refined(inst, gamma, options.grid_n));
      reports.push_back(tag(check_validity(sched, cs, gamma), 0.0));
      reports.push_back(tag(check_claim_gp(cs, sched), 0.0));

      CheckReport lemma;
      lemma.check_name = "lemma_integral";
      lemma.instance_label = inst.label;
      lemma.grid_n = cs.grid_n;
      lemma.tolerance = 1.0 + 1e-4;
      lemma.passed = true;
      lemma.max_residual = 0.0;
      for (std::size_t i = 0; i < inst.size(); ++i) {
        const InverseCurve ic = build_inverse_curve(cs, i, sched.g);
        const CheckReport r = check_lemma_integral(extended_table(ic, gamma), gamma);
        lemma.passed = lemma.passed && r.passed;
        lemma.max_residual = std::max(lemma.max_residual, r.max_residual);
        if (!r.note.empty()) lemma.note = r.note;
        lemma.details.push_back({item_label(i), 0.0, r.max_residual, r.tolerance, r.max_residual});
      }
      lemma.metrics.push_back({"gamma", gamma});
      reports.push_back(lemma);

      if (options.run_simulation) {
        reports.push_back(check_simulation_lemmas(inst, cs, sched, options.sim));
      }
    }
  }
  return reports;
}

std::string reports_to_json(const std::vector<CheckReport>& reports) {
  using nlohmann::json;
  json arr = json::array();
  for (const auto& r : reports) {
    json j;
    j["check"] = r.check_name;
    j["instance"] = r.instance_label;
    j["max_residual"] = r.max_residual;
    j["tolerance"] = r.tolerance;
    j["passed"] = r.passed;
    j["grid_n"] = r.grid_n;
    if (!r.note.empty()) j["note"] = r.note;
    json metrics = json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = std::isfinite(v) ? json(v) : json(nullptr);
    j["metrics"] = metrics;
    json details = json::array();
    for (const auto& d : r.details) {
      details.push_back({{"label", d.label},
                         {"x", d.x},
                         {"value", d.value},
                         {"bound", d.bound},
                         {"residual", std::isfinite(d.residual) ? json(d.residual) : json(nullptr)}});
    }
    j["details"] = details;
    arr.push_back(j);
  }
  json out;
  out["reports"] = arr;
  out["all_passed"] = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
  return out.dump(2);
}

void write_check_csv(std::ostream& out, const CheckReport& report) {
  const auto old_prec = out.precision(17);
  out << "label,x,value,bound,residual\r\n";
  for (const auto& d : report.details) {
    std::string label = d.label;
    if (label.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : label) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      label = quoted + "\"";
    }
    out << label << ',' << d.x << ',' << d.value << ',' << d.bound << ',' << d.residual << "\r\n";
  }
  out.precision(old_prec);
}

}  // namespace prophet
