#pragma once

// Arrival-time distributions F_i over [0, 1].
//
// With the auxiliary function
//   g(t) = gamma * (sum_i (1 - q_i(t)) * p_i(t) - t) + 1
// and the exponent
//   E_i(t) = gamma * int_0^t p_i(s) / g(s) dq_i(s),
// item i arrives with density f_i(t) = gamma * q_i'(t) * exp(-E_i(t)) / g(t)
// on [0, 1), and at t = 1 with the leftover probability 1 - int_0^1 f_i.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "prophet/curves.hpp"
#include "prophet/distributions.hpp"
#include "prophet/rng.hpp"

namespace prophet {

// Lowest index among the items with the largest essential infimum. That item
// has p_i(1) = 1, and it is the one accepted unseen if it arrives at t = 1.
std::size_t designate_item_one(const Instance& inst);

class ValidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ArrivalSchedule {
  double gamma = 0.0;
  std::size_t n_items = 0;
  std::size_t grid_n = 0;
  std::size_t item_one = 0;       // 0-based
  std::vector<double> t;          // N + 1 grid times
  std::vector<double> g;          // N + 1
  std::vector<double> exponent;   // n x (N + 1): E_i(t_k)
  // n x (N + 1): average of f_i over [t_k, t_{k+1}); the last column repeats
  // the final cell.
  std::vector<double> density;
  std::vector<double> cdf;        // n x (N + 1): F_i(t_k) = int_0^{t_k} f_i
  std::vector<double> atom;       // n: Pr[t_i = 1]
  std::vector<std::string> warnings;

  std::size_t cols() const noexcept { return grid_n + 1; }
  std::span<const double> cdf_row(std::size_t i) const noexcept {
    return {cdf.data() + i * cols(), cols()};
  }
  std::span<const double> exponent_row(std::size_t i) const noexcept {
    return {exponent.data() + i * cols(), exponent.empty() ? 0 : cols()};
  }
  std::span<const double> density_row(std::size_t i) const noexcept {
    return {density.data() + i * cols(), cols()};
  }
};

struct ScheduleOptions {
  // Atoms in (-clamp_slack, 0) are clamped to 0 with a warning; below that
  // construction fails with ValidityError.
  double clamp_slack = 1e-6;
  // Skip the ValidityError, keeping negative atoms (used by verification to
  // report instead of throw).
  bool allow_invalid = false;
};

// gamma in (0, 1). Cell integrals use midpoint values of p, g and E against
// the increments of q_i, so each grid cell contributes
//   dE = gamma * p_mid / g_mid * dq,   dF = gamma * dq * exp(-E_mid) / g_mid.
ArrivalSchedule build_schedule(const CurveSet& cs, double gamma,
                               const ScheduleOptions& options = {});

// F_i(1) = int_0^1 f_i.
double schedule_mass(const ArrivalSchedule& sched, std::size_t item);

// Inverse transform on the tabulated F_i: returns exactly 1 with probability
// atom_i, otherwise a time in [0, 1) with F_i linear inside each cell.
double sample_arrival_from_uniform(const ArrivalSchedule& sched, std::size_t item, double u);

template <class Urbg>
double sample_arrival(const ArrivalSchedule& sched, std::size_t item, Urbg& rng) {
  return sample_arrival_from_uniform(sched, item, uniform_open01(rng));
}

// CSV with a leading "# {json}" header line carrying gamma, item_one (1-based),
// grid_n and atoms; then columns t, g, f_1, F_1, ..., f_n, F_n.
void write_schedule_csv(std::ostream& out, const ArrivalSchedule& sched);

// Reads write_schedule_csv output back. The exponent table is not part of the
// dump and comes back empty. Throws ParseError on malformed input.
ArrivalSchedule read_schedule_csv(std::istream& in);

}  // namespace prophet
