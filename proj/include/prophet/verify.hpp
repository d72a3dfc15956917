#pragma once

// Numerical checks of the identities and inequalities behind the algorithm.
// Each check returns a CheckReport with the worst measured residual.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "prophet/curves.hpp"
#include "prophet/distributions.hpp"
#include "prophet/schedule.hpp"

namespace prophet {

struct CheckPoint {
  std::string label;  // which quantity, e.g. "eq1" or "item 2"
  double x = 0.0;     // grid location (t, x or z)
  double value = 0.0;
  double bound = 0.0;
  double residual = 0.0;
};

struct CheckReport {
  std::string check_name;
  std::string instance_label;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::size_t grid_n = 0;
  std::vector<CheckPoint> details;                      // worst points, largest first
  std::vector<std::pair<std::string, double>> metrics;  // extra measured numbers
  std::string note;
};

// prod_i (1 - p_i) = 1 - t at 1e-9; (1 - q_i)(1 - p_i) = 1 - t at 1e-9; and the
// integrated form of
// sum_i p_i' (1 - q_i) = 1 at 2/N + 1e-6.
CheckReport check_identities(const CurveSet& cs);

// Discrete forms of 1 - int_0^t p_i f_i = exp(-E_i(t)) and
// g(t) = prod_i (1 - int_0^t p_i f_i), tolerance 5e-3.
CheckReport check_mathfacts(const ArrivalSchedule& sched, const CurveSet& cs);

// Below this the density facts are limited by the precision of the curves
// themselves (the identities check certifies them to 1e-9), not by the grid.
// A point mass smoothed over a sliver of width w quantizes p_i in steps of
// about ulp(v) / w, which is 2e-10 for w = 1e-6 at v = 1.
inline constexpr double kRefinementFloor = 1e-9;

// check_mathfacts at N and 2N; passes when both are within tolerance and the
// residual shrinks by at least 1.8x or is already below kRefinementFloor.
CheckReport check_mathfacts_refined(const Instance& inst, double gamma, std::size_t grid_n);

// F_i(1) <= 1 + 1e-6 and
// (1 - G q_i(1)) (1 - F_i(1)) exp(E_i(1)) >= G (1 - q_i(1)) - 5e-3 for every i.
CheckReport check_validity(const ArrivalSchedule& sched, const CurveSet& cs, double gamma);

// g(x) exp(G int_0^x p/g) >= G (-(1-x) ln(1-x) - x) + 1 with the closed-form
// i.i.d. curves p(x) = 1 - (1-x)^(1/(n-1)) and
// g(x) = G (n (1 - x - (1-x)^(n/(n-1))) - 1 + (1-x)^(n/(n-1))) + 1,
// on x = j/M, slack 1e-6. n >= 2.
CheckReport check_claim_iid(std::size_t n, double gamma, std::size_t m);

// g~_i(x) >= G (-(1-x) ln(1-x) (1 - p~_i(x)) - x) + 1 at every node of each
// item's inverse curve, plus the extension p~ = 1, g~ = 1 - G x on (q_i(1), 1]
// and its continuity at x = q_i(1). Slack 1e-6.
CheckReport check_claim_gp(const CurveSet& cs, const ArrivalSchedule& sched);

// Tabulated p~, g~ on [0, 1]; x nondecreasing from 0 to 1, repeated x values
// mark jumps.
struct FunctionTable {
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> g;
};

// An item's inverse curve extended by p~ = 1, g~ = 1 - G x on (q_i(1), 1].
FunctionTable extended_table(const InverseCurve& ic, double gamma, std::size_t extension_nodes = 1024);

// G(0) = int_0^1 G / (g~(x) exp(G int_0^x p~/g~)) dx by nested trapezoid
// sums. Pass iff G(0) <= 1 + 1e-4; a table violating the hypothesis
// (slack 1e-6) is reported as "precondition failed" instead.
CheckReport check_lemma_integral(const FunctionTable& table, double gamma);

// Y on an M-point grid of [0.02, 0.98]: strictly decreasing, one sign change,
// the sign change inside (0.21, 0.212). M >= 100.
CheckReport check_alpha_uniqueness(std::size_t m);

// H < K before z1 = 1 - alpha and H > K after on an M-point grid, and
// |H(z1) - K(z1)| <= 1e-6.
CheckReport check_hk_crossing(double gamma, double alpha, std::size_t m);

struct SimulationCheckOptions {
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

// Monte Carlo: Pr[stop before t] = 1 - g(t) within 3 sigma; Pr[B_i(t)] >=
// G p_i(t) (1 - q_i(t)) - 3 sigma; Pr[ALG > tau(t)] >= G t - 3 sigma. The
// residual is the worst violation in units of sigma; tolerance 3.
CheckReport check_simulation_lemmas(const Instance& inst, const CurveSet& cs,
                                    const ArrivalSchedule& sched,
                                    const SimulationCheckOptions& options);

// *.json instances in a directory, sorted by file name.
std::vector<Instance> load_corpus(const std::string& dir, const ParseOptions& options = {});

struct VerifyOptions {
  std::size_t grid_n = 4096;
  SimulationCheckOptions sim;
  bool run_simulation = true;
};

// Every check above over the given instances, plus the instance-free checks.
std::vector<CheckReport> verify_all(const std::vector<Instance>& corpus, const VerifyOptions& options);

std::string reports_to_json(const std::vector<CheckReport>& reports);
// Worst points of one report: label, x, value, bound, residual.
void write_check_csv(std::ostream& out, const CheckReport& report);

}  // namespace prophet
