#include "prophet/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace prophet {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

ValueDist ValueDist::uniform(double lo, double hi) {
  require(finite_nonneg(lo) && std::isfinite(hi) && lo < hi,
          "uniform: need finite 0 <= lo < hi");
  return ValueDist(Uniform{lo, hi});
}

ValueDist ValueDist::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0.0, "exponential: need finite rate > 0");
  return ValueDist(Exponential{rate});
}

ValueDist ValueDist::pareto(double scale, double shape) {
  require(std::isfinite(scale) && scale > 0.0, "pareto: need finite scale > 0");
  require(std::isfinite(shape) && shape > 0.0, "pareto: need finite shape > 0");
  return ValueDist(Pareto{scale, shape});
}

ValueDist ValueDist::piecewise_linear(std::vector<CdfPoint> points) {
  require(points.size() >= 2, "piecewise_linear_cdf: need at least 2 points");
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& pt = points[k];
    const std::string where = " at point " + std::to_string(k + 1);
    require(finite_nonneg(pt.value), "value must be finite and nonnegative" + where);
    require(std::isfinite(pt.cumulative) && pt.cumulative >= 0.0 && pt.cumulative <= 1.0,
            "cumulative probability outside [0, 1]" + where);
    if (k > 0) {
      require(pt.value > points[k - 1].value, "values not strictly increasing" + where);
      require(pt.cumulative >= points[k - 1].cumulative,
              "cumulative probabilities decreasing" + where);
    }
  }
  require(points.front().cumulative == 0.0, "first cumulative probability must be 0");
  require(points.back().cumulative == 1.0, "last cumulative probability must be 1");
  return ValueDist(PiecewiseLinearCdf{std::move(points)});
}

std::string_view ValueDist::kind_name() const noexcept {
  return std::visit(Overloaded{
                        [](const Uniform&) { return std::string_view("uniform"); },
                        [](const Exponential&) { return std::string_view("exponential"); },
                        [](const Pareto&) { return std::string_view("pareto"); },
                        [](const PiecewiseLinearCdf&) {
                          return std::string_view("piecewise_linear_cdf");
                        },
                    },
                    law_);
}

double ValueDist::cdf(double v) const noexcept {
  return std::visit(
      Overloaded{
          [v](const Uniform& u) {
            if (v <= u.lo) return 0.0;
            if (v >= u.hi) return 1.0;
            return (v - u.lo) / (u.hi - u.lo);
          },
          [v](const Exponential& e) { return v <= 0.0 ? 0.0 : -std::expm1(-e.rate * v); },
          [v](const Pareto& p) {
            if (v <= p.scale) return 0.0;
            if (v == kInfinity) return 1.0;
            return -std::expm1(p.shape * std::log(p.scale / v));
          },
          [v](const PiecewiseLinearCdf& pw) {
            const auto& pts = pw.points;
            if (v <= pts.front().value) return 0.0;
            if (v >= pts.back().value) return 1.0;
            auto it = std::upper_bound(pts.begin(), pts.end(), v,
                                       [](double x, const CdfPoint& p) { return x < p.value; });
            const CdfPoint& right = *it;
            const CdfPoint& left = *(it - 1);
            const double w = (v - left.value) / (right.value - left.value);
            return left.cumulative + w * (right.cumulative - left.cumulative);
          },
      },
      law_);
}

double ValueDist::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile: probability outside [0, 1]");
  return std::visit(
      Overloaded{
          [u](const Uniform& d) {
            if (u >= 1.0) return d.hi;
            return d.lo + u * (d.hi - d.lo);
          },
          [u](const Exponential& e) { return u >= 1.0 ? kInfinity : -std::log1p(-u) / e.rate; },
          [u](const Pareto& p) {
            if (u >= 1.0) return kInfinity;
            return p.scale * std::exp(-std::log1p(-u) / p.shape);
          },
          [this, u](const PiecewiseLinearCdf& pw) {
            if (u <= 0.0) return support().ess_inf;
            const auto& pts = pw.points;
            // First knot whose cumulative reaches u; the knot before it is below u.
            auto it = std::lower_bound(pts.begin(), pts.end(), u,
                                       [](const CdfPoint& p, double x) { return p.cumulative < x; });
            const CdfPoint& right = *it;
            const CdfPoint& left = *(it - 1);
            const double w = (u - left.cumulative) / (right.cumulative - left.cumulative);
            return std::min(right.value, left.value + w * (right.value - left.value));
          },
      },
      law_);
}

SupportBounds ValueDist::support() const noexcept {
  return std::visit(Overloaded{
                        [](const Uniform& u) { return SupportBounds{u.lo, u.hi}; },
                        [](const Exponential&) { return SupportBounds{0.0, kInfinity}; },
                        [](const Pareto& p) { return SupportBounds{p.scale, kInfinity}; },
                        [](const PiecewiseLinearCdf& pw) {
                          const auto& pts = pw.points;
                          SupportBounds b{pts.front().value, pts.back().value};
                          for (const auto& p : pts) {
                            if (p.cumulative == 0.0) b.ess_inf = p.value;
                          }
                          for (const auto& p : pts) {
                            if (p.cumulative == 1.0) {
                              b.ess_sup = p.value;
                              break;
                            }
                          }
                          return b;
                        },
                    },
                    law_);
}

double ValueDist::mean() const noexcept {
  return std::visit(Overloaded{
                        [](const Uniform& u) { return 0.5 * (u.lo + u.hi); },
                        [](const Exponential& e) { return 1.0 / e.rate; },
                        [](const Pareto& p) {
                          return p.shape <= 1.0 ? kInfinity : p.shape * p.scale / (p.shape - 1.0);
                        },
                        [](const PiecewiseLinearCdf& pw) {
                          double m = 0.0;
                          const auto& pts = pw.points;
                          for (std::size_t k = 1; k < pts.size(); ++k) {
                            const double mass = pts[k].cumulative - pts[k - 1].cumulative;
                            m += mass * 0.5 * (pts[k].value + pts[k - 1].value);
                          }
                          return m;
                        },
                    },
                    law_);
}

bool Instance::is_iid() const noexcept {
  return std::all_of(items.begin(), items.end(),
                     [this](const ValueDist& d) { return d == items.front(); });
}

Instance make_instance(std::vector<ValueDist> items, std::string label) {
  if (items.empty()) throw std::invalid_argument("empty item list");
  return Instance{std::move(items), std::move(label)};
}

}  // namespace prophet
