#include "prophet/engine.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "prophet/constants.hpp"
#include "prophet/quadrature.hpp"

namespace prophet {
namespace {

constexpr std::size_t kTabulated = 19;
constexpr std::uint64_t kBlockTrials = 8192;

double tabulated_time(std::size_t j) { return 0.05 * static_cast<double>(j + 1); }

bool exceeds_tau(const SimContext& ctx, ThresholdMode mode, double v, double t) {
  if (mode == ThresholdMode::exact) return survival_of_max(*ctx.inst, v) < t;
  return v > interpolate_tau(*ctx.curves, *ctx.inst, t);
}

struct BlockSums {
  double a = 0.0, aa = 0.0, o = 0.0, oo = 0.0, ao = 0.0;
  std::array<std::uint64_t, kTabulated> survival{};
  std::array<std::uint64_t, kTabulated> stop{};
  std::vector<std::uint64_t> b;  // n x kTabulated
};

void run_block(const SimContext& ctx, const SimOptions& opt, std::uint64_t first,
               std::uint64_t last, BlockSums& out) {
  const std::size_t n = ctx.inst->size();
  out.b.assign(n * kTabulated, 0);
  for (std::uint64_t trial = first; trial < last; ++trial) {
    StreamRng rng(opt.seed, trial);
    const TrialResult r = run_alg_trial(ctx, opt.alg, opt.mode, rng);
    out.a += r.accepted_value;
    out.aa += r.accepted_value * r.accepted_value;
    out.o += r.max_value;
    out.oo += r.max_value * r.max_value;
    out.ao += r.accepted_value * r.max_value;
    if (!r.accepted) continue;
    // ALG > tau(t) is measured exactly, whatever mode drove the decisions.
    const double s = survival_of_max(*ctx.inst, r.accepted_value);
    for (std::size_t j = 0; j < kTabulated; ++j) {
      const double t = tabulated_time(j);
      const bool above = s < t;
      if (above) ++out.survival[j];
      if (!r.accept_time) continue;
      if (*r.accept_time < t) {
        ++out.stop[j];
      } else if (above) {
        ++out.b[r.accepted_item * kTabulated + j];
      }
    }
  }
}

// Compensated running sum for the merge across blocks.
struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

SurvivalRow proportion(double t, std::uint64_t hits, std::uint64_t trials) {
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return {t, p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

// Expected maximum of v and a constant c >= 0: c F(c) + int_{F(c)}^1 Q(u) du.
double expected_max_with(const ValueDist& d, double c, const GaussLegendreRule& rule) {
  const double fc = d.cdf(c);
  if (fc >= 1.0) return c;
  const double half = 0.5 * (1.0 - fc);
  const double mid = 0.5 * (1.0 + fc);
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    acc += rule.weights[k] * d.quantile(mid + half * rule.nodes[k]);
  }
  return c * fc + half * acc;
}

void require_finite_means(const Instance& inst) {
  for (const auto& d : inst.items) {
    if (!std::isfinite(d.mean())) throw std::domain_error("infinite prophet value");
  }
}

}  // namespace

Algorithm parse_algorithm(std::string_view tag) {
  if (tag == "main") return Algorithm::main;
  if (tag == "single_threshold") return Algorithm::single_threshold;
  if (tag == "uniform_arrival") return Algorithm::uniform_arrival;
  throw std::invalid_argument("unknown algorithm '" + std::string(tag) + "'");
}

std::string_view algorithm_tag(Algorithm alg) noexcept {
  switch (alg) {
    case Algorithm::main: return "main";
    case Algorithm::single_threshold: return "single_threshold";
    case Algorithm::uniform_arrival: return "uniform_arrival";
  }
  return "main";
}

ThresholdMode parse_threshold_mode(std::string_view name) {
  if (name == "exact") return ThresholdMode::exact;
  if (name == "grid") return ThresholdMode::grid;
  throw std::invalid_argument("unknown threshold mode '" + std::string(name) + "'");
}

std::vector<double> tabulated_times() {
  std::vector<double> ts(kTabulated);
  for (std::size_t j = 0; j < kTabulated; ++j) ts[j] = tabulated_time(j);
  return ts;
}

SimContext make_context(const Instance& inst, const CurveSet& cs, const ArrivalSchedule* sched) {
  if (cs.n_items != inst.size()) throw std::invalid_argument("curves do not match the instance");
  if (sched != nullptr && sched->n_items != inst.size()) {
    throw std::invalid_argument("schedule does not match the instance");
  }
  SimContext ctx;
  ctx.inst = &inst;
  ctx.curves = &cs;
  ctx.sched = sched;
  ctx.single_threshold = eval_tau(inst, 0.5);
  return ctx;
}

TrialResult run_alg_trial(const SimContext& ctx, Algorithm alg, ThresholdMode mode,
                          StreamRng& rng) {
  const Instance& inst = *ctx.inst;
  const std::size_t n = inst.size();
  std::array<double, 64> small_v{};
  std::vector<double> big_v;
  double* v = small_v.data();
  if (n > small_v.size()) {
    big_v.resize(n);
    v = big_v.data();
  }
  TrialResult r;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = sample(inst.items[i], rng);
    r.max_value = std::max(r.max_value, v[i]);
  }

  if (alg == Algorithm::single_threshold) {
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i] > ctx.single_threshold) {
        r.accepted = true;
        r.accepted_value = v[i];
        r.accepted_item = i;
        break;
      }
    }
    return r;
  }

  if (alg == Algorithm::main && ctx.sched == nullptr) {
    throw std::invalid_argument("run_alg_trial: main algorithm needs a schedule");
  }
  using Arrival = std::pair<double, std::size_t>;
  std::array<Arrival, 64> small_a;
  std::vector<Arrival> big_a;
  Arrival* arrivals = small_a.data();
  if (n > small_a.size()) {
    big_a.resize(n);
    arrivals = big_a.data();
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double t = alg == Algorithm::main ? sample_arrival(*ctx.sched, i, rng)
                                            : uniform_open01(rng);
    arrivals[i] = {t, i};
  }
  std::sort(arrivals, arrivals + n);

  for (std::size_t k = 0; k < n; ++k) {
    const auto [t, i] = arrivals[k];
    bool accept;
    if (t >= 1.0) {
      // End of the horizon: the designated item is taken unseen, others are passed.
      accept = i == ctx.sched->item_one;
    } else {
      accept = exceeds_tau(ctx, mode, v[i], t);
    }
    if (accept) {
      r.accepted = true;
      r.accepted_value = v[i];
      r.accept_time = t;
      r.accepted_item = i;
      break;
    }
  }
  return r;
}

SimReport estimate(const SimContext& ctx, const SimOptions& opt) {
  if (opt.trials < 1) throw std::invalid_argument("estimate: trials must be >= 1");
  const std::size_t n = ctx.inst->size();
  const std::uint64_t blocks = (opt.trials + kBlockTrials - 1) / kBlockTrials;
  std::vector<BlockSums> sums(blocks);

  unsigned workers = opt.workers == 0 ? std::thread::hardware_concurrency() : opt.workers;
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(std::max(workers, 1u), 1, blocks));
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      const std::uint64_t first = b * kBlockTrials;
      run_block(ctx, opt, first, std::min(first + kBlockTrials, opt.trials), sums[b]);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  Kahan a, aa, o, oo, ao;
  std::array<std::uint64_t, kTabulated> survival{}, stop{};
  std::vector<std::uint64_t> bcount(n * kTabulated, 0);
  for (const auto& s : sums) {
    a.add(s.a);
    aa.add(s.aa);
    o.add(s.o);
    oo.add(s.oo);
    ao.add(s.ao);
    for (std::size_t j = 0; j < kTabulated; ++j) {
      survival[j] += s.survival[j];
      stop[j] += s.stop[j];
    }
    for (std::size_t k = 0; k < bcount.size(); ++k) bcount[k] += s.b[k];
  }

  const double m = static_cast<double>(opt.trials);
  SimReport rep;
  rep.trials = opt.trials;
  rep.seed = opt.seed;
  rep.algorithm_tag = std::string(algorithm_tag(opt.alg));
  rep.mode = opt.mode == ThresholdMode::exact ? "exact" : "grid";
  rep.gamma = opt.alg == Algorithm::single_threshold || ctx.sched == nullptr ? 0.0 : ctx.sched->gamma;
  rep.alg_mean = a.sum / m;
  rep.opt_mean = o.sum / m;
  const double denom = std::max(m - 1.0, 1.0);
  const double var_a = std::max(aa.sum - m * rep.alg_mean * rep.alg_mean, 0.0) / denom;
  const double var_o = std::max(oo.sum - m * rep.opt_mean * rep.opt_mean, 0.0) / denom;
  const double cov = (ao.sum - m * rep.alg_mean * rep.opt_mean) / denom;
  rep.alg_stderr = std::sqrt(var_a / m);
  rep.opt_stderr = std::sqrt(var_o / m);
  rep.ratio = rep.opt_mean > 0.0 ? rep.alg_mean / rep.opt_mean : 1.0;
  if (rep.opt_mean > 0.0) {
    const double r = rep.ratio;
    const double var_r = std::max(var_a - 2.0 * r * cov + r * r * var_o, 0.0) /
                         (m * rep.opt_mean * rep.opt_mean);
    rep.ratio_stderr = std::sqrt(var_r);
  }
  const bool timed = opt.alg != Algorithm::single_threshold;
  rep.b_event.assign(timed ? n : 0, {});
  for (std::size_t j = 0; j < kTabulated; ++j) {
    const double t = tabulated_time(j);
    rep.survival.push_back(proportion(t, survival[j], opt.trials));
    if (!timed) continue;
    rep.stop_before.push_back(proportion(t, stop[j], opt.trials));
    for (std::size_t i = 0; i < n; ++i) {
      rep.b_event[i].push_back(proportion(t, bcount[i * kTabulated + j], opt.trials));
    }
  }
  return rep;
}

double auto_gamma(const Instance& inst) {
  return inst.is_iid() ? constants().gamma_iid : constants().gamma_sel;
}

SimReport estimate(const Instance& inst, Algorithm alg, std::uint64_t trials, std::uint64_t seed) {
  const CurveSet cs = build_curveset(inst);
  std::optional<ArrivalSchedule> sched;
  if (alg == Algorithm::main) sched = build_schedule(cs, auto_gamma(inst));
  const SimContext ctx = make_context(inst, cs, sched ? &*sched : nullptr);
  SimOptions opt;
  opt.alg = alg;
  opt.trials = trials;
  opt.seed = seed;
  return estimate(ctx, opt);
}

SimReport single_threshold_baseline(const Instance& inst, std::uint64_t trials, std::uint64_t seed) {
  return estimate(inst, Algorithm::single_threshold, trials, seed);
}

SimReport uniform_arrival_baseline(const Instance& inst, std::uint64_t trials, std::uint64_t seed) {
  return estimate(inst, Algorithm::uniform_arrival, trials, seed);
}

std::string report_to_json(const SimReport& rep) {
  using nlohmann::json;
  auto rows = [](const std::vector<SurvivalRow>& v) {
    json arr = json::array();
    for (const auto& r : v) arr.push_back({{"t", r.t}, {"prob", r.prob}, {"stderr", r.std_error}});
    return arr;
  };
  json j;
  j["algorithm_tag"] = rep.algorithm_tag;
  j["mode"] = rep.mode;
  j["trials"] = rep.trials;
  j["seed"] = rep.seed;
  j["gamma"] = rep.gamma;
  j["alg_mean"] = rep.alg_mean;
  j["alg_stderr"] = rep.alg_stderr;
  j["opt_mean"] = rep.opt_mean;
  j["opt_stderr"] = rep.opt_stderr;
  j["ratio"] = rep.ratio;
  j["ratio_stderr"] = rep.ratio_stderr;
  j["survival"] = rows(rep.survival);
  j["stop_before"] = rows(rep.stop_before);
  json b = json::array();
  for (std::size_t i = 0; i < rep.b_event.size(); ++i) {
    b.push_back({{"item", i + 1}, {"rows", rows(rep.b_event[i])}});
  }
  j["b_event"] = b;
  return j.dump(2);
}

double prophet_value(const Instance& inst, ProphetMethod method, double precision) {
  require_finite_means(inst);
  const auto* first_uniform = std::get_if<Uniform>(&inst.items.front().law());
  const bool closed_form = inst.size() == 1 || (inst.is_iid() && first_uniform != nullptr);
  if (method == ProphetMethod::analytic && !closed_form) {
    throw std::invalid_argument("prophet_value: no closed form for this instance");
  }
  if (method == ProphetMethod::analytic ||
      (method == ProphetMethod::automatic && closed_form)) {
    if (inst.size() == 1) return inst.items.front().mean();
    const double n = static_cast<double>(inst.size());
    return first_uniform->lo + (first_uniform->hi - first_uniform->lo) * n / (n + 1.0);
  }
  if (method == ProphetMethod::monte_carlo) {
    const auto trials = static_cast<std::uint64_t>(std::max(precision, 1.0));
    Kahan acc;
    for (std::uint64_t k = 0; k < trials; ++k) {
      StreamRng rng(0x5eed, k);
      double mx = 0.0;
      for (const auto& d : inst.items) mx = std::max(mx, sample(d, rng));
      acc.add(mx);
    }
    return acc.sum / static_cast<double>(trials);
  }

  // int_0^inf Pr[max > v] dv, split where any cdf has a kink.
  std::vector<double> breaks{0.0};
  double scale = 0.0;
  bool unbounded = false;
  for (const auto& d : inst.items) {
    const auto s = d.support();
    breaks.push_back(s.ess_inf);
    if (std::isfinite(s.ess_sup)) {
      breaks.push_back(s.ess_sup);
    } else {
      unbounded = true;
    }
    if (const auto* pw = std::get_if<PiecewiseLinearCdf>(&d.law())) {
      for (const auto& pt : pw->points) breaks.push_back(pt.value);
    }
    scale = std::max(scale, d.mean());
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  auto tail = [&](double v) { return survival_of_max(inst, v); };
  const double tol = precision / static_cast<double>(breaks.size() + 1);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    total += integrate(tail, breaks[k], breaks[k + 1], tol, 1e-14).value;
  }
  if (unbounded) {
    const double a = breaks.back();
    const double sc = std::max(scale, 1e-300);
    auto scaled = [&](double x) { return sc * tail(a + sc * x); };
    total += integrate_to_infinity(scaled, 0.0, tol, 1e-14).value;
  }
  return total;
}

double backward_induction(const Instance& inst, const std::vector<std::size_t>& order,
                          std::size_t quad_points) {
  const std::size_t n = inst.size();
  std::vector<bool> seen(n, false);
  if (order.size() != n) throw std::invalid_argument("backward_induction: order is not a permutation");
  for (std::size_t i : order) {
    if (i >= n || seen[i]) throw std::invalid_argument("backward_induction: order is not a permutation");
    seen[i] = true;
  }
  require_finite_means(inst);
  const auto& rule = gauss_legendre(quad_points);
  double value = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    value = expected_max_with(inst.items[*it], value, rule);
  }
  return value;
}

OrderOracle brute_force_order(const Instance& inst, std::size_t quad_points) {
  if (inst.size() > 8) throw std::invalid_argument("brute_force_order: n > 8 is too large");
  std::vector<std::size_t> order(inst.size());
  std::iota(order.begin(), order.end(), 0);
  OrderOracle best;
  best.best_value = -1.0;
  do {
    const double v = backward_induction(inst, order, quad_points);
    if (v > best.best_value) {
      best.best_value = v;
      best.best_order = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace prophet
