#pragma once

// Value distributions and problem instances.
//
// Every downstream module talks to item values only through cdf(), quantile()
// and support_bounds(). Only continuous laws are admitted; point masses must
// be smoothed into narrow uniform slivers at ingestion time.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "prophet/rng.hpp"

namespace prophet {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Uniform {
  double lo = 0.0;
  double hi = 1.0;
  friend bool operator==(const Uniform&, const Uniform&) = default;
};

struct Exponential {
  double rate = 1.0;
  friend bool operator==(const Exponential&, const Exponential&) = default;
};

// Pr[v > x] = (scale / x)^shape for x >= scale.
struct Pareto {
  double scale = 1.0;
  double shape = 2.0;
  friend bool operator==(const Pareto&, const Pareto&) = default;
};

struct CdfPoint {
  double value = 0.0;
  double cumulative = 0.0;
  friend bool operator==(const CdfPoint&, const CdfPoint&) = default;
};

// Linear interpolation between knots. Values strictly increasing, cumulative
// probabilities nondecreasing from exactly 0 to exactly 1.
struct PiecewiseLinearCdf {
  std::vector<CdfPoint> points;
  friend bool operator==(const PiecewiseLinearCdf&, const PiecewiseLinearCdf&) = default;
};

struct SupportBounds {
  double ess_inf = 0.0;
  double ess_sup = kInfinity;  // +inf when unbounded
};

// Immutable after construction; construct through the factory functions,
// which validate parameters.
class ValueDist {
 public:
  using Law = std::variant<Uniform, Exponential, Pareto, PiecewiseLinearCdf>;

  static ValueDist uniform(double lo, double hi);
  static ValueDist exponential(double rate);
  static ValueDist pareto(double scale, double shape);
  static ValueDist piecewise_linear(std::vector<CdfPoint> points);

  const Law& law() const noexcept { return law_; }
  std::string_view kind_name() const noexcept;

  double cdf(double v) const noexcept;
  // Smallest v with cdf(v) >= u. Throws std::domain_error for u outside [0, 1].
  double quantile(double u) const;
  SupportBounds support() const noexcept;
  // E[v]; +inf for Pareto with shape <= 1.
  double mean() const noexcept;

  friend bool operator==(const ValueDist&, const ValueDist&) = default;

 private:
  explicit ValueDist(Law law) : law_(std::move(law)) {}
  Law law_;
};

inline double cdf_eval(const ValueDist& d, double v) noexcept { return d.cdf(v); }
inline double quantile_eval(const ValueDist& d, double u) { return d.quantile(u); }
inline SupportBounds support_bounds(const ValueDist& d) noexcept { return d.support(); }

// Inverse-transform sampling; the only sampling path in the library.
template <class Urbg>
double sample(const ValueDist& d, Urbg& rng) {
  return d.quantile(uniform_open01(rng));
}

struct Instance {
  std::vector<ValueDist> items;
  std::string label;

  std::size_t size() const noexcept { return items.size(); }
  // True when every item is field-for-field equal to the first.
  bool is_iid() const noexcept;
};

// Throws std::invalid_argument when items is empty.
Instance make_instance(std::vector<ValueDist> items, std::string label = {});

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultSmooth = 1e-6;

struct ParseOptions {
  // Relative sliver width for point masses ("discrete" items): an atom at v
  // becomes uniform on [v, v + smooth * v] (width smooth when v = 0). When
  // unset, the document's own "smooth" field is used, then kDefaultSmooth.
  std::optional<double> smooth;
};

// Parses the JSON instance format:
//   {"label": "...", "smooth": 1e-6, "items": [{"kind": "uniform", "lo": 0, "hi": 1}, ...]}
// Kinds: uniform(lo, hi), exponential(rate), pareto(scale, shape),
// piecewise_linear_cdf(points: [[value, cumulative], ...]),
// discrete(atoms: [[value, probability], ...]; needs smoothing).
Instance parse_instance(std::string_view doc, const ParseOptions& options = {});
Instance load_instance(const std::string& path, const ParseOptions& options = {});

// Inverse of parse_instance for the continuous kinds.
std::string instance_to_json(const Instance& inst);

}  // namespace prophet
