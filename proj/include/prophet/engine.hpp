#pragma once

// Monte Carlo simulation of the arrival-time algorithm and of the baselines,
// the prophet benchmark E[max_i v_i], and the optimal fixed-order oracle.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prophet/curves.hpp"
#include "prophet/distributions.hpp"
#include "prophet/rng.hpp"
#include "prophet/schedule.hpp"

namespace prophet {

enum class Algorithm { main, single_threshold, uniform_arrival };

// Throws std::invalid_argument("unknown algorithm ...").
Algorithm parse_algorithm(std::string_view tag);
std::string_view algorithm_tag(Algorithm alg) noexcept;

// exact: v > tau(t) is decided as Pr[max > v] < t, which is the same event up
// to probability zero and needs no root finding. grid: v is compared with the
// linearly interpolated tau table.
enum class ThresholdMode { exact, grid };

ThresholdMode parse_threshold_mode(std::string_view name);

struct TrialResult {
  bool accepted = false;
  double accepted_value = 0.0;        // 0 when nothing was accepted
  std::optional<double> accept_time;  // none when nothing was accepted, or for
                                      // the single-threshold baseline
  std::size_t accepted_item = 0;      // meaningful only when accepted
  double max_value = 0.0;             // the prophet's value in the same trial
};

// Everything a trial needs, built once per instance and shared read-only.
struct SimContext {
  const Instance* inst = nullptr;
  const CurveSet* curves = nullptr;
  const ArrivalSchedule* sched = nullptr;  // main algorithm only
  double single_threshold = 0.0;           // tau(1/2)
};

SimContext make_context(const Instance& inst, const CurveSet& cs, const ArrivalSchedule* sched);

// One trial: draws v_1..v_n, then the arrival times, from rng.
TrialResult run_alg_trial(const SimContext& ctx, Algorithm alg, ThresholdMode mode,
                          StreamRng& rng);

struct SurvivalRow {
  double t = 0.0;
  double prob = 0.0;
  double std_error = 0.0;
};

struct SimReport {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string algorithm_tag;
  std::string mode;
  double gamma = 0.0;  // 0 for the single-threshold baseline
  double alg_mean = 0.0;
  double alg_stderr = 0.0;
  double opt_mean = 0.0;
  double opt_stderr = 0.0;
  double ratio = 0.0;
  double ratio_stderr = 0.0;  // delta method with the ALG/OPT covariance
  // Tabulated at t = 0.05, 0.10, ..., 0.95.
  std::vector<SurvivalRow> survival;     // Pr[ALG > tau(t)]
  std::vector<SurvivalRow> stop_before;  // Pr[accept time < t]
  // b_event[i][j]: Pr[item i accepted at time >= t_j with v_i > tau(t_j)].
  std::vector<std::vector<SurvivalRow>> b_event;
};

std::vector<double> tabulated_times();

struct SimOptions {
  Algorithm alg = Algorithm::main;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  ThresholdMode mode = ThresholdMode::exact;
  unsigned workers = 0;  // 0: hardware concurrency
};

// Trials run in fixed blocks with per-trial streams keyed by (seed, trial),
// merged in block order, so the report does not depend on the worker count.
SimReport estimate(const SimContext& ctx, const SimOptions& options);

// Gamma used when none is given: gamma_iid for identical items, gamma_sel otherwise.
double auto_gamma(const Instance& inst);

// Builds curves (N = 4096) and, for the main algorithm, the schedule at auto_gamma.
SimReport estimate(const Instance& inst, Algorithm alg, std::uint64_t trials, std::uint64_t seed);
SimReport single_threshold_baseline(const Instance& inst, std::uint64_t trials, std::uint64_t seed);
SimReport uniform_arrival_baseline(const Instance& inst, std::uint64_t trials, std::uint64_t seed);

std::string report_to_json(const SimReport& report);

enum class ProphetMethod { automatic, analytic, quadrature, monte_carlo };

// E[max_i v_i]. precision is the absolute quadrature tolerance, or the trial
// count for monte_carlo. Throws std::domain_error("infinite prophet value")
// when some item has infinite mean, and std::invalid_argument when analytic is
// requested for an instance without a closed form.
double prophet_value(const Instance& inst, ProphetMethod method = ProphetMethod::automatic,
                     double precision = 1e-11);

// Optimal online value when items are seen in the given order (0-based
// permutation): V_{n+1} = 0, V_k = E[max(v_{order_k}, V_{k+1})].
double backward_induction(const Instance& inst, const std::vector<std::size_t>& order,
                          std::size_t quad_points = 512);

struct OrderOracle {
  std::vector<std::size_t> best_order;
  double best_value = 0.0;
};

// All n! orders; n <= 8. Ties keep the lexicographically first order.
OrderOracle brute_force_order(const Instance& inst, std::size_t quad_points = 512);

}  // namespace prophet
