#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <json.hpp>

#include "prophet/constants.hpp"
#include "prophet/engine.hpp"

using namespace prophet;

namespace {

struct Segment {
  double a, b;
};

// E[max(v, c)] for v ~ U(a, b).
double expected_max_uniform(Segment u, double c) {
  if (c <= u.a) return 0.5 * (u.a + u.b);
  if (c >= u.b) return c;
  return c * (c - u.a) / (u.b - u.a) + (u.b * u.b - c * c) / (2.0 * (u.b - u.a));
}

// Best fixed-order value by dynamic programming over subsets of the items
// still to come: V(S) = max_{i in S} E[max(v_i, V(S \ i))].
double best_order_value(const std::vector<Segment>& items) {
  const std::size_t n = items.size();
  std::vector<double> v(std::size_t(1) << n, 0.0);
  for (std::size_t s = 1; s < v.size(); ++s) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (s & (std::size_t(1) << i))
        best = std::max(best, expected_max_uniform(items[i], v[s & ~(std::size_t(1) << i)]));
    v[s] = best;
  }
  return v.back();
}

Instance uniforms(const std::vector<Segment>& items) {
  std::vector<ValueDist> d;
  for (const auto& u : items) d.push_back(ValueDist::uniform(u.a, u.b));
  return make_instance(d);
}

struct Fixture {
  Instance inst;
  CurveSet cs;
  ArrivalSchedule sched;
  SimContext ctx;
  Fixture(Instance i, double gamma, std::size_t grid = 2048)
      : inst(std::move(i)), cs(build_curveset(inst, grid)), sched(build_schedule(cs, gamma)),
        ctx(make_context(inst, cs, &sched)) {}
};

}  // namespace

TEST_CASE("prophet value") {
  CHECK(std::abs(prophet_value(uniforms({{0, 1}, {0, 1}})) - 2.0 / 3.0) <= 1e-9);
  CHECK(std::abs(prophet_value(uniforms({{0, 1}, {0, 1}}), ProphetMethod::quadrature) - 2.0 / 3.0) <= 1e-9);
  CHECK(std::abs(prophet_value(make_instance({ValueDist::exponential(1)})) - 1.0) <= 1e-9);
  CHECK(std::abs(prophet_value(make_instance({ValueDist::exponential(1)}), ProphetMethod::quadrature) - 1.0) <=
        1e-9);
  CHECK(std::abs(prophet_value(uniforms({{0, 1}, {0, 2}})) - 13.0 / 12.0) <= 1e-9);
  const double mc = prophet_value(uniforms({{0, 1}, {0, 2}}), ProphetMethod::monte_carlo, 1e6);
  CHECK(std::abs(mc - 13.0 / 12.0) < 0.003);
  // E[max of 2 exponentials] = 1 + 1/2.
  CHECK(std::abs(prophet_value(make_instance({ValueDist::exponential(1), ValueDist::exponential(1)})) - 1.5) <=
        1e-9);
  CHECK_THROWS_WITH_AS(prophet_value(make_instance({ValueDist::pareto(1, 1)})), "infinite prophet value",
                       std::domain_error);
  CHECK_THROWS_AS(prophet_value(uniforms({{0, 1}, {0, 2}}), ProphetMethod::analytic), std::invalid_argument);
}

TEST_CASE("backward induction") {
  CHECK(backward_induction(uniforms({{0, 1}}), {0}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(backward_induction(uniforms({{0, 1}, {0, 1}}), {0, 1}) == doctest::Approx(0.625).epsilon(1e-12));
  const auto iid = make_instance(std::vector<ValueDist>(3, ValueDist::exponential(1)));
  CHECK(std::abs(backward_induction(iid, {0, 1, 2}) - backward_induction(iid, {2, 0, 1})) <= 1e-9);
  CHECK_THROWS_AS(backward_induction(uniforms({{0, 1}, {0, 1}}), {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(backward_induction(uniforms({{0, 1}, {0, 1}}), {0}), std::invalid_argument);
  CHECK_THROWS_AS(backward_induction(make_instance({ValueDist::pareto(1, 0.5)}), {0}), std::domain_error);
}

TEST_CASE("best fixed order") {
  const std::vector<Segment> items{{0, 1}, {0.4, 0.6}, {0, 2}, {0.5, 1.5}};
  const auto oracle = brute_force_order(uniforms(items));
  CHECK(std::abs(oracle.best_value - best_order_value(items)) <= 1e-9);
  CHECK(backward_induction(uniforms(items), oracle.best_order) == oracle.best_value);

  const auto iid = uniforms({{0, 1}, {0, 1}, {0, 1}});
  const auto tie = brute_force_order(iid);
  CHECK(tie.best_order == std::vector<std::size_t>{0, 1, 2});
  CHECK(tie.best_value == backward_induction(iid, {0, 1, 2}));

  const auto one = brute_force_order(make_instance({ValueDist::exponential(2)}));
  CHECK(one.best_order == std::vector<std::size_t>{0});
  CHECK(std::abs(one.best_value - 0.5) <= 1e-5);

  CHECK_THROWS_AS(brute_force_order(make_instance(std::vector<ValueDist>(9, ValueDist::uniform(0, 1)))),
                  std::invalid_argument);
}

TEST_CASE("algorithm tags") {
  CHECK(parse_algorithm("main") == Algorithm::main);
  CHECK(parse_algorithm("single_threshold") == Algorithm::single_threshold);
  CHECK(parse_algorithm("uniform_arrival") == Algorithm::uniform_arrival);
  CHECK(algorithm_tag(Algorithm::uniform_arrival) == "uniform_arrival");
  CHECK_THROWS_AS(parse_algorithm("greedy"), std::invalid_argument);
  CHECK(parse_threshold_mode("grid") == ThresholdMode::grid);
  CHECK_THROWS_AS(parse_threshold_mode("fuzzy"), std::invalid_argument);
}

TEST_CASE("a single item is always accepted at time 1") {
  Fixture f(make_instance({ValueDist::exponential(1)}), 0.725, 256);
  StreamRng rng(1, 0);
  for (int k = 0; k < 1000; ++k) {
    const auto r = run_alg_trial(f.ctx, Algorithm::main, ThresholdMode::exact, rng);
    CHECK(r.accepted);
    REQUIRE(r.accept_time.has_value());
    CHECK(*r.accept_time == 1.0);
    CHECK(r.accepted_value == r.max_value);
  }
  const auto rep = estimate(make_instance({ValueDist::exponential(1)}), Algorithm::main, 100000, 1);
  CHECK(std::abs(rep.ratio - 1.0) <= 0.002);
}

TEST_CASE("every accept obeys the threshold rule") {
  Fixture f(make_instance({ValueDist::uniform(0, 1), ValueDist::exponential(1), ValueDist::uniform(0.5, 1.5)}),
            constants().gamma_sel);
  for (auto mode : {ThresholdMode::exact, ThresholdMode::grid}) {
    StreamRng rng(2, 0);
    for (int k = 0; k < 20000; ++k) {
      const auto r = run_alg_trial(f.ctx, Algorithm::main, mode, rng);
      CHECK(r.accepted_value <= r.max_value);
      if (!r.accepted) {
        CHECK_FALSE(r.accept_time.has_value());
        CHECK(r.accepted_value == 0.0);
        continue;
      }
      REQUIRE(r.accept_time.has_value());
      const double t = *r.accept_time;
      if (t == 1.0) {
        CHECK(r.accepted_item == f.sched.item_one);
      } else if (mode == ThresholdMode::exact) {
        CHECK(r.accepted_value > eval_tau(f.inst, t, 1e-9) * (1.0 - 1e-9));
      } else {
        CHECK(r.accepted_value > interpolate_tau(f.cs, f.inst, t));
      }
    }
  }
}

TEST_CASE("survival splits into stopping early and late accepts") {
  Fixture f(make_instance({ValueDist::uniform(0, 1), ValueDist::exponential(1), ValueDist::uniform(0.5, 1.5)}),
            constants().gamma_sel);
  SimOptions opt;
  opt.trials = 50000;
  const auto rep = estimate(f.ctx, opt);
  const auto times = tabulated_times();
  REQUIRE(rep.survival.size() == times.size());
  REQUIRE(rep.b_event.size() == 3);
  for (std::size_t j = 0; j < times.size(); ++j) {
    double sum = rep.stop_before[j].prob;
    for (const auto& row : rep.b_event) sum += row[j].prob;
    CHECK(std::abs(rep.survival[j].prob - sum) <= 1e-12);
    CHECK(rep.survival[j].t == times[j]);
  }
  CHECK(rep.alg_mean <= rep.opt_mean + 3.0 * std::hypot(rep.alg_stderr, rep.opt_stderr));
  CHECK_THROWS_AS(estimate(f.ctx, SimOptions{Algorithm::main, 0}), std::invalid_argument);
}

TEST_CASE("reports do not depend on the worker count") {
  Fixture f(make_instance({ValueDist::uniform(0, 1), ValueDist::uniform(0, 2)}), constants().gamma_sel, 1024);
  SimOptions opt;
  opt.trials = 30000;
  opt.workers = 1;
  const auto a = estimate(f.ctx, opt);
  opt.workers = 4;
  const auto b = estimate(f.ctx, opt);
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(a.alg_mean == b.alg_mean);
  CHECK(a.ratio == b.ratio);
  opt.seed = 2;
  CHECK(estimate(f.ctx, opt).alg_mean != a.alg_mean);
}

TEST_CASE("competitive ratios") {
  const auto iid = estimate(uniforms({{0, 1}, {0, 1}}), Algorithm::main, 200000, 1);
  CHECK(iid.gamma == constants().gamma_iid);
  CHECK(std::abs(iid.opt_mean - 2.0 / 3.0) < 0.005);
  CHECK(iid.alg_mean / (2.0 / 3.0) >= 0.745 - 0.005);

  const auto mixed = make_instance({ValueDist::uniform(0, 1), ValueDist::exponential(1), ValueDist::uniform(0.5, 1.5)});
  const auto rep = estimate(mixed, Algorithm::main, 200000, 1);
  CHECK(rep.gamma == constants().gamma_sel);
  CHECK(rep.ratio >= 0.725 - 0.005);
}

TEST_CASE("survival lower bound for five identical items") {
  const auto rep = estimate(uniforms({{0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}}), Algorithm::main, 200000, 1);
  for (const auto& row : rep.survival) CHECK(row.prob >= constants().gamma_iid * row.t - 3.0 * row.std_error);
}

TEST_CASE("baselines") {
  const auto one = single_threshold_baseline(make_instance({ValueDist::uniform(0, 1)}), 100000, 1);
  CHECK(one.ratio >= 0.5);
  CHECK(one.ratio <= 1.0);
  CHECK(one.algorithm_tag == "single_threshold");

  ParseOptions smooth;
  smooth.smooth = 1e-6;
  const auto hard =
      parse_instance(R"({"items":[{"kind":"discrete","atoms":[[1,1]]},{"kind":"discrete","atoms":[[0,0.99],[100,0.01]]}]})",
                     smooth);
  const auto h = single_threshold_baseline(hard, 1000000, 1);
  CHECK(h.ratio >= 0.5 - 3.0 * h.ratio_stderr);
  CHECK(h.ratio <= 0.56 + 3.0 * h.ratio_stderr);

  const auto mixed = make_instance({ValueDist::uniform(0, 1), ValueDist::exponential(1), ValueDist::uniform(0.5, 1.5)});
  const auto st = single_threshold_baseline(mixed, 100000, 1);
  CHECK(st.ratio >= 0.5 - 3.0 * st.ratio_stderr);

  const auto ua1 = uniform_arrival_baseline(make_instance({ValueDist::uniform(0, 1)}), 100000, 1);
  CHECK(ua1.ratio <= 1.0 + 3.0 * ua1.ratio_stderr);
  const auto ua = uniform_arrival_baseline(uniforms({{0, 1}, {0, 1}, {0, 1}}), 100000, 1);
  CHECK(ua.ratio <= 1.0);
  CHECK(ua.algorithm_tag == "uniform_arrival");
}

TEST_CASE("the main algorithm never beats the best fixed order") {
  const std::vector<Segment> items{{0, 1}, {0.4, 0.6}};
  const auto inst = uniforms(items);
  const auto rep = estimate(inst, Algorithm::main, 200000, 1);
  CHECK(rep.alg_mean <= best_order_value(items) + 3.0 * rep.alg_stderr);
}

TEST_CASE("report JSON") {
  const auto rep = estimate(uniforms({{0, 1}, {0, 1}}), Algorithm::main, 1000, 7);
  const auto j = nlohmann::json::parse(report_to_json(rep));
  CHECK(j.at("trials").get<std::uint64_t>() == 1000);
  CHECK(j.at("seed").get<std::uint64_t>() == 7);
  CHECK(j.at("algorithm_tag").get<std::string>() == "main");
  CHECK(j.at("survival").size() == 19);
}
