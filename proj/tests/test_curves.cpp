#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "prophet/curves.hpp"
#include "prophet/schedule.hpp"

using namespace prophet;

namespace {

Instance iid_uniform(std::size_t n) {
  return make_instance(std::vector<ValueDist>(n, ValueDist::uniform(0, 1)));
}

}  // namespace

TEST_CASE("threshold examples") {
  CHECK(eval_tau(iid_uniform(2), 0.75) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eval_tau(make_instance({ValueDist::exponential(1)}), 0.5) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const auto mixed = make_instance({ValueDist::uniform(0, 1), ValueDist::uniform(0, 2)});
  const double tau = eval_tau(mixed, 0.5);
  CHECK(tau == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(1.0 - mixed.items[0].cdf(tau) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(1.0 - mixed.items[1].cdf(tau) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eval_tau(mixed, 1.0) == 0.0);
  CHECK(eval_tau(mixed, 0.0) == 2.0);
  CHECK(std::isinf(eval_tau(make_instance({ValueDist::exponential(1)}), 0.0)));
  CHECK_THROWS_AS(eval_tau(mixed, 1.5), std::domain_error);
  CHECK_THROWS_AS(eval_tau(mixed, -0.1), std::domain_error);
}

TEST_CASE("survival of the maximum") {
  const auto two = iid_uniform(2);
  CHECK(survival_of_max(two, 0.5) == doctest::Approx(0.75));
  CHECK(survival_of_max(two, -1.0) == 1.0);
  CHECK(survival_of_max(two, 2.0) == 0.0);
}

TEST_CASE("identical items match the closed forms") {
  for (std::size_t n : {2, 3, 5, 8}) {
    const auto cs = build_curveset(iid_uniform(n), 1024);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = cs.p_row(i);
      const auto q = cs.q_row(i);
      for (std::size_t k = 0; k < cs.cols(); ++k) {
        const double t = cs.t[k];
        const double p_expect = 1.0 - std::pow(1.0 - t, 1.0 / double(n));
        const double q_expect = 1.0 - std::pow(1.0 - t, double(n - 1) / double(n));
        worst = std::max({worst, std::abs(p[k] - p_expect), std::abs(q[k] - q_expect)});
      }
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("a single item has p = t and q = 0") {
  const auto cs = build_curveset(make_instance({ValueDist::exponential(2)}), 256);
  for (std::size_t k = 0; k < cs.cols(); ++k) {
    CHECK(cs.p_row(0)[k] == doctest::Approx(cs.t[k]).epsilon(1e-12));
    CHECK(cs.q_row(0)[k] == 0.0);
  }
}

TEST_CASE("curve shape and product identity") {
  const auto inst = make_instance({ValueDist::uniform(0, 1), ValueDist::exponential(1),
                                   ValueDist::uniform(0.5, 1.5)});
  const auto cs = build_curveset(inst, 512);
  CHECK(cs.t.front() == 0.0);
  CHECK(cs.t.back() == 1.0);
  for (std::size_t k = 1; k < cs.cols(); ++k) {
    CHECK(cs.tau[k] <= cs.tau[k - 1]);
    for (std::size_t i = 0; i < cs.n_items; ++i) {
      CHECK(cs.p_row(i)[k] >= cs.p_row(i)[k - 1]);
      CHECK(cs.q_row(i)[k] >= cs.q_row(i)[k - 1]);
    }
    CHECK(std::abs(cs.none_above[k] - (1.0 - cs.t[k])) <= 1e-9);
  }
  CHECK(cs.p_row(2).back() == 1.0);
  CHECK_THROWS_AS(build_curveset(inst, 8), std::invalid_argument);
}

TEST_CASE("grid values do not depend on the resolution") {
  const auto inst = make_instance({ValueDist::uniform(0, 1), ValueDist::pareto(1, 3),
                                   ValueDist::piecewise_linear({{0, 0}, {1, 0.5}, {2, 0.6}, {5, 1}})});
  const auto coarse = build_curveset(inst, 256);
  const auto fine = build_curveset(inst, 1024);
  double worst = 0.0;
  for (std::size_t k = 0; k < coarse.cols(); ++k) {
    for (std::size_t i = 0; i < inst.size(); ++i) {
      worst = std::max(worst, std::abs(coarse.p_row(i)[k] - fine.p_row(i)[4 * k]));
      worst = std::max(worst, std::abs(coarse.q_row(i)[k] - fine.q_row(i)[4 * k]));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("interpolated threshold") {
  const auto inst = iid_uniform(2);
  const auto cs = build_curveset(inst, 1024);
  for (double t : {0.0001, 0.1, 0.33, 0.75}) {
    CHECK(std::abs(interpolate_tau(cs, inst, t) - eval_tau(inst, t)) < 1e-5);
  }
  // tau = sqrt(1 - t) bends sharply near t = 1; the chord error there is
  // bounded by h^2 / 8 * |tau''| with tau'' = -(1 - t)^(-3/2) / 4.
  const double h = 1.0 / 1024.0;
  const double bound = h * h / 8.0 * 0.25 * std::pow(1.0 - 0.999 - h, -1.5);
  CHECK(std::abs(interpolate_tau(cs, inst, 0.999) - eval_tau(inst, 0.999)) <= bound);
  const auto expo = make_instance({ValueDist::exponential(1)});
  const auto ce = build_curveset(expo, 64);
  CHECK(interpolate_tau(ce, expo, 0.001) == doctest::Approx(-std::log(0.001)).epsilon(1e-9));
}

TEST_CASE("inverse curve relation") {
  const auto inst = make_instance({ValueDist::uniform(0, 1), ValueDist::uniform(0, 2),
                                   ValueDist::exponential(1)});
  const auto cs = build_curveset(inst, 2048);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const auto ic = build_inverse_curve(cs, i);
    CHECK(ic.x.front() == 0.0);
    CHECK(ic.x_max() == doctest::Approx(cs.q_row(i).back()));
    double worst = 0.0;
    for (std::size_t k = 0; k < ic.x.size(); ++k) {
      if (ic.x[k] >= 1.0 - 1e-6) continue;
      const double expect = (ic.q_inv[k] - ic.x[k]) / (1.0 - ic.x[k]);
      worst = std::max(worst, std::abs(ic.p_tilde[k] - expect));
    }
    CHECK(worst <= 1e-7);
    CHECK(ic.g_tilde.empty());
  }
}

TEST_CASE("inverse curve of identical items") {
  const std::size_t n = 4;
  const auto cs = build_curveset(iid_uniform(n), 2048);
  const auto ic = build_inverse_curve(cs, 1);
  double worst = 0.0;
  for (std::size_t k = 0; k < ic.x.size(); ++k) {
    const double expect = 1.0 - std::pow(1.0 - ic.x[k], 1.0 / double(n - 1));
    worst = std::max(worst, std::abs(ic.p_tilde[k] - expect));
  }
  CHECK(worst <= 1e-6);
  CHECK(ic.eval_p_tilde(0.5) == doctest::Approx(1.0 - std::pow(0.5, 1.0 / 3.0)).epsilon(1e-6));
}

TEST_CASE("inverse curve across a flat run of q") {
  // U(0,1) and U(0,2): q_2 = p_1 stays 0 while tau >= 1, that is for t <= 1/2.
  const auto inst = make_instance({ValueDist::uniform(0, 1), ValueDist::uniform(0, 2)});
  const auto cs = build_curveset(inst, 1024);
  const auto sched = build_schedule(cs, 0.725);
  const auto ic = build_inverse_curve(cs, 1, sched.g);
  REQUIRE(ic.x.size() >= 2);
  CHECK(ic.x[0] == 0.0);
  CHECK(ic.x[1] == 0.0);
  CHECK(ic.q_inv[0] == 0.0);
  CHECK(ic.q_inv[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(ic.eval_q_inv(0.0) == ic.q_inv[1]);
  CHECK(ic.g_tilde.size() == ic.x.size());
  CHECK_THROWS_AS(build_inverse_curve(cs, 2), std::out_of_range);
}

TEST_CASE("curves CSV") {
  const auto cs = build_curveset(iid_uniform(2), 16);
  std::ostringstream out;
  write_curves_csv(out, cs);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  CHECK(line == "t,tau,p_1,p_2,q_1,q_2");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 17);
}
