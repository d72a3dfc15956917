// Acceptance run over the shipped corpus. Prints one PASS/FAIL line per
// criterion and exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "prophet/constants.hpp"
#include "prophet/engine.hpp"
#include "prophet/verify.hpp"

using namespace prophet;

namespace {

constexpr std::uint64_t kTrials = 1000000;
constexpr std::uint64_t kSeed = 1;
constexpr std::size_t kGrid = 4096;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Band for an empirical frequency: the larger of its own standard error and
// the binomial standard error at the reference value.
double sigma(const SurvivalRow& row, double reference, double trials) {
  const double r = std::clamp(reference, 0.0, 1.0);
  return std::max(row.std_error, std::sqrt(r * (1.0 - r) / trials));
}

// Worst shortfall of Pr[ALG > tau(t)] below gamma t, in standard errors.
double survival_shortfall(const SimReport& rep) {
  double worst = 0.0;
  for (const auto& row : rep.survival) {
    const double bound = rep.gamma * row.t;
    const double s = sigma(row, bound, double(rep.trials));
    worst = std::max(worst, (bound - row.prob) / s);
  }
  return worst;
}

struct Run {
  const Instance* inst;
  double gamma;
  CurveSet cs;
  ArrivalSchedule sched;
  SimReport sim;
};

}  // namespace

int main() {
  const auto corpus = load_corpus(PROPHET_CORPUS_DIR);
  std::printf("corpus: %zu instances, %llu trials per simulation, seed %llu\n", corpus.size(),
              static_cast<unsigned long long>(kTrials), static_cast<unsigned long long>(kSeed));

  // 1. Constants, solved from scratch and timed.
  {
    const auto start = Clock::now();
    const double g_iid = solve_gamma_iid();
    const auto a = solve_alpha();
    const double elapsed = seconds_since(start);
    const double r_iid = std::abs(gamma_iid_integral(g_iid) - 1.0);
    const double r_alpha = std::abs(y_function(a.alpha));
    const bool ok = g_iid >= 0.7445 && g_iid <= 0.7455 && a.alpha >= 0.2105 && a.alpha <= 0.2115 &&
                    a.gamma_sel >= 0.7245 && a.gamma_sel <= 0.7255 && r_iid <= 1e-10 && r_alpha <= 1e-10 &&
                    elapsed < 2.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "constants gamma_iid=%.10f alpha=%.10f gamma_sel=%.10f residuals %.1e %.1e in %.3f s", g_iid,
                  a.alpha, a.gamma_sel, r_iid, r_alpha, elapsed);
    report(1, ok, buf);
  }
  const Constants& c = constants();

  auto gammas_for = [&](const Instance& inst) {
    std::vector<double> g{c.gamma_sel};
    if (inst.is_iid()) g.push_back(c.gamma_iid);
    return g;
  };

  // 2. Identities and the arrival-density facts with refinement.
  {
    const auto start = Clock::now();
    bool ok = true;
    double worst_eq1 = 0.0, worst_facts = 0.0, worst_ratio = 1e300;
    for (const auto& inst : corpus) {
      const auto cs = build_curveset(inst, kGrid);
      const auto id = check_identities(cs);
      for (const auto& [k, v] : id.metrics)
        if (k == "eq1_residual") worst_eq1 = std::max(worst_eq1, v);
      for (double g : gammas_for(inst)) {
        const auto r = check_mathfacts_refined(inst, g, kGrid);
        ok = ok && r.passed;
        worst_facts = std::max(worst_facts, r.max_residual);
        for (const auto& [k, v] : r.metrics)
          if (k == "refinement_ratio" && r.max_residual > kRefinementFloor) worst_ratio = std::min(worst_ratio, v);
        if (!r.passed) std::printf("  %s gamma=%.4f: %s\n", inst.label.c_str(), g, r.note.c_str());
      }
    }
    const double elapsed = seconds_since(start);
    ok = ok && worst_eq1 <= 1e-9 && elapsed < 30.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "identities max eq1 residual %.2e, density facts max residual %.2e, min refinement ratio "
                  "%.2f above the %.0e precision floor, %.1f s",
                  worst_eq1, worst_facts, worst_ratio, kRefinementFloor, elapsed);
    report(2, ok, buf);
  }

  // 3. Validity of the arrival distributions.
  {
    bool ok = true;
    double max_mass = 0.0, min_margin = 1e300;
    ScheduleOptions lenient;
    lenient.allow_invalid = true;
    for (const auto& inst : corpus) {
      const auto cs = build_curveset(inst, kGrid);
      for (double g : gammas_for(inst)) {
        const auto r = check_validity(build_schedule(cs, g, lenient), cs, g);
        ok = ok && r.passed;
        for (const auto& [k, v] : r.metrics) {
          if (k == "max_mass") max_mass = std::max(max_mass, v);
          if (k == "min_margin") min_margin = std::min(min_margin, v);
        }
        if (!r.passed) std::printf("  %s gamma=%.4f failed validity\n", inst.label.c_str(), g);
      }
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "validity max mass %.9f, min inequality margin %.3e", max_mass, min_margin);
    report(3, ok, buf);
  }

  // Simulations shared by criteria 4 to 7.
  const auto sim_start = Clock::now();
  std::vector<Run> runs;
  for (const auto& inst : corpus) {
    for (double g : gammas_for(inst)) {
      Run r{&inst, g, build_curveset(inst, kGrid), {}, {}};
      r.sched = build_schedule(r.cs, g);
      SimOptions so;
      so.trials = kTrials;
      so.seed = kSeed;
      r.sim = estimate(make_context(inst, r.cs, &r.sched), so);
      std::printf("  %-18s gamma=%.4f ratio=%.4f +- %.4f\n", inst.label.c_str(), g, r.sim.ratio,
                  r.sim.ratio_stderr);
      runs.push_back(std::move(r));
    }
  }
  const double sim_elapsed = seconds_since(sim_start);

  // 4. Survival lower bound.
  {
    double worst = 0.0;
    for (const auto& r : runs) worst = std::max(worst, survival_shortfall(r.sim));
    const bool ok = worst <= 3.0 && sim_elapsed < 300.0;
    char buf[256];
    std::snprintf(buf, sizeof buf, "survival worst shortfall %.2f sigma over %zu runs, simulations took %.1f s",
                  worst, runs.size(), sim_elapsed);
    report(4, ok, buf);
  }

  // 5. Competitive ratio.
  {
    bool ok = true;
    double worst_sel = 1e300, worst_iid = 1e300;
    for (const auto& r : runs) {
      const bool iid_gamma = r.gamma == c.gamma_iid;
      const double target = iid_gamma ? 0.745 - 0.005 : 0.725 - 0.005;
      ok = ok && r.sim.ratio >= target;
      (iid_gamma ? worst_iid : worst_sel) = std::min(iid_gamma ? worst_iid : worst_sel, r.sim.ratio);
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "ratio min %.4f at gamma_sel (target 0.720), min %.4f at gamma_iid (target 0.740)",
                  worst_sel, worst_iid);
    report(5, ok, buf);
  }

  // 6. Probability of stopping before t equals 1 - g(t).
  {
    double worst = 0.0;
    for (const auto& r : runs) {
      for (const auto& row : r.sim.stop_before) {
        const double pos = row.t * double(r.sched.grid_n);
        const std::size_t k = std::min<std::size_t>(std::size_t(pos), r.sched.grid_n - 1);
        const double w = pos - double(k);
        const double ref = 1.0 - (r.sched.g[k] + w * (r.sched.g[k + 1] - r.sched.g[k]));
        const double s = sigma(row, ref, double(r.sim.trials));
        const double dev = std::abs(row.prob - ref);
        worst = std::max(worst, s > 0.0 ? dev / s : (dev > 1e-12 ? 1e300 : 0.0));
      }
    }
    report(6, worst <= 3.0, fmt("stopping-time equality worst deviation %.2f sigma", worst));
  }

  // 7. No better than the best fixed order.
  {
    bool ok = true;
    double worst = -1e300;
    std::map<std::string, double> oracle;
    for (const auto& r : runs) {
      if (r.inst->size() > 6) continue;
      auto it = oracle.find(r.inst->label);
      if (it == oracle.end()) it = oracle.emplace(r.inst->label, brute_force_order(*r.inst).best_value).first;
      const double excess = (r.sim.alg_mean - it->second) / std::max(r.sim.alg_stderr, 1e-300);
      worst = std::max(worst, excess);
      ok = ok && r.sim.alg_mean <= it->second + 3.0 * r.sim.alg_stderr;
    }
    report(7, ok, fmt("E[ALG] minus best fixed-order value, worst %.2f sigma", worst));
  }

  // 8. Inequalities on the inverse curves and the constant-defining functions.
  {
    bool ok = true;
    std::string failed;
    auto note = [&](const CheckReport& r, const std::string& where) {
      if (!r.passed) {
        ok = false;
        failed += " " + r.check_name + "(" + where + ")";
      }
    };
    for (std::size_t n : {2, 3, 4, 8, 16, 64}) note(check_claim_iid(n, c.gamma_iid, 10000), std::to_string(n));
    double worst_g0 = 0.0;
    for (const auto& inst : corpus) {
      const auto cs = build_curveset(inst, kGrid);
      for (double g : gammas_for(inst)) {
        const auto sched = build_schedule(cs, g);
        note(check_claim_gp(cs, sched), inst.label);
        for (std::size_t i = 0; i < inst.size(); ++i) {
          const auto r = check_lemma_integral(extended_table(build_inverse_curve(cs, i, sched.g), g), g);
          if (r.note.empty()) worst_g0 = std::max(worst_g0, r.max_residual);
          note(r, inst.label + " item " + std::to_string(i + 1));
        }
      }
    }
    note(check_alpha_uniqueness(1000), "Y");
    note(check_hk_crossing(c.gamma_sel, c.alpha, 1000), "H/K");
    char buf[256];
    std::snprintf(buf, sizeof buf, "claims, lemma integral (max G(0) %.6f), alpha uniqueness, H/K crossing",
                  worst_g0);
    report(8, ok, std::string(buf) + (failed.empty() ? "" : "; failed:" + failed));
  }

  // 9. Single-threshold baseline.
  {
    bool ok = true;
    double worst = 1e300, hard = 0.0;
    for (const auto& inst : corpus) {
      const auto rep = single_threshold_baseline(inst, kTrials, kSeed);
      worst = std::min(worst, rep.ratio);
      ok = ok && rep.ratio >= 0.5 - 0.005;
      if (inst.label == "hard_two_point") {
        hard = rep.ratio;
        ok = ok && rep.ratio <= 0.56;
      }
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "single threshold min ratio %.4f, hard two-point instance %.4f", worst, hard);
    report(9, ok, buf);
  }

  // 10. An inflated constant must be caught.
  {
    const double inflated = 0.745;
    const Instance* adv = nullptr;
    for (const auto& inst : corpus)
      if (inst.label == "adversarial8") adv = &inst;
    bool caught = false;
    std::string how = "no adversarial instance";
    if (adv) {
      const auto cs = build_curveset(*adv, kGrid);
      ScheduleOptions lenient;
      lenient.allow_invalid = true;
      const auto sched = build_schedule(cs, inflated, lenient);
      const auto validity = check_validity(sched, cs, inflated);
      SimOptions so;
      so.trials = kTrials;
      so.seed = kSeed;
      const auto sim = estimate(make_context(*adv, cs, &sched), so);
      const double shortfall = survival_shortfall(sim);
      caught = !validity.passed || shortfall > 3.0;
      char buf[256];
      std::snprintf(buf, sizeof buf, "gamma %.3f on %s: validity %s, survival shortfall %.2f sigma", inflated,
                    adv->label.c_str(), validity.passed ? "passed" : "failed", shortfall);
      how = buf;
    }
    report(10, caught, how);
  }

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
