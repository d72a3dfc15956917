#include "prophet/cli.hpp"

#include <bit>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prophet/constants.hpp"
#include "prophet/curves.hpp"
#include "prophet/engine.hpp"
#include "prophet/kernels.hpp"
#include "prophet/schedule.hpp"
#include "prophet/verify.hpp"

namespace prophet::cli {
namespace {

// Bad flags or inputs; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::string instance;
  std::string instance_dir;
  std::string out;
  std::string csv_dir;
  std::string gamma = "auto";
  std::string alg = "main";
  std::string mode = "exact";
  std::string isa = "auto";
  std::uint64_t trials = 100000;
  bool trials_given = false;
  std::uint64_t seed = 1;
  std::size_t grid = 4096;
  std::size_t quad_points = 512;
  std::size_t hk = 0;
  unsigned workers = 0;
  std::optional<double> smooth;
  bool no_simulation = false;
};

void emit(const Settings& s, const std::string& text) {
  if (s.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(s.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + s.out);
  f << text;
}

ParseOptions parse_options(const Settings& s) {
  ParseOptions po;
  po.smooth = s.smooth;
  return po;
}

Instance load(const Settings& s) {
  if (s.instance.empty()) throw UsageError("--instance is required");
  try {
    return load_instance(s.instance, parse_options(s));
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

double resolve_gamma(const Settings& s, const Instance& inst) {
  const Constants& c = constants();
  if (s.gamma == "auto") return auto_gamma(inst);
  if (s.gamma == "sel") return c.gamma_sel;
  if (s.gamma == "iid") return c.gamma_iid;
  char* end = nullptr;
  const double v = std::strtod(s.gamma.c_str(), &end);
  if (end == s.gamma.c_str() || *end != '\0' || !(v > 0.0 && v < 1.0)) {
    throw UsageError("--gamma must be auto, sel, iid or a number in (0, 1)");
  }
  return v;
}

void check_common(const Settings& s) {
  if (s.grid < 16 || !std::has_single_bit(s.grid)) throw UsageError("--grid must be a power of two >= 16");
  if (s.trials < 1) throw UsageError("--trials must be >= 1");
  if (s.quad_points < 1) throw UsageError("--quad-points must be >= 1");
  if (s.isa == "scalar") {
    kernels::set_active(kernels::Isa::scalar);
  } else if (s.isa == "avx2") {
    if (!kernels::avx2_available()) throw UsageError("--isa avx2 is not available on this machine");
    kernels::set_active(kernels::Isa::avx2);
  } else if (s.isa != "auto") {
    throw UsageError("--isa must be auto, scalar or avx2");
  }
}

int cmd_constants(const Settings& s) {
  const Constants& c = constants();
  if (s.hk > 0) {
    if (s.hk < 2) throw UsageError("--hk needs M >= 2");
    std::ostringstream os;
    write_hk_csv(os, hk_curves(c.gamma_sel, c.alpha, s.hk));
    emit(s, os.str());
    return 0;
  }
  emit(s, constants_to_json(c));
  return 0;
}

int cmd_curves(const Settings& s) {
  const Instance inst = load(s);
  std::ostringstream os;
  write_curves_csv(os, build_curveset(inst, s.grid));
  emit(s, os.str());
  return 0;
}

int cmd_schedule(const Settings& s) {
  const Instance inst = load(s);
  const double gamma = resolve_gamma(s, inst);
  const CurveSet cs = build_curveset(inst, s.grid);
  const ArrivalSchedule sched = build_schedule(cs, gamma);
  for (const auto& w : sched.warnings) std::cerr << "warning: " << w << '\n';
  std::ostringstream os;
  write_schedule_csv(os, sched);
  emit(s, os.str());
  return 0;
}

int cmd_simulate(const Settings& s) {
  const Instance inst = load(s);
  Algorithm alg;
  ThresholdMode mode;
  try {
    alg = parse_algorithm(s.alg);
    mode = parse_threshold_mode(s.mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const CurveSet cs = build_curveset(inst, s.grid);
  std::optional<ArrivalSchedule> sched;
  if (alg == Algorithm::main) sched = build_schedule(cs, resolve_gamma(s, inst));
  const SimContext ctx = make_context(inst, cs, sched ? &*sched : nullptr);
  SimOptions so;
  so.alg = alg;
  so.trials = s.trials;
  so.seed = s.seed;
  so.mode = mode;
  so.workers = s.workers;
  const SimReport rep = estimate(ctx, so);
  auto j = nlohmann::json::parse(report_to_json(rep));
  j["instance"] = inst.label;
  emit(s, j.dump(2));
  return 0;
}

int cmd_oracle(const Settings& s) {
  const Instance inst = load(s);
  if (inst.size() > 8) throw UsageError("oracle: instances with more than 8 items are not supported");
  const OrderOracle best = brute_force_order(inst, s.quad_points);
  nlohmann::json j;
  j["instance"] = inst.label;
  std::vector<std::size_t> order;
  for (std::size_t i : best.best_order) order.push_back(i + 1);
  j["best_order"] = order;
  j["best_value"] = best.best_value;
  j["prophet_value"] = prophet_value(inst);
  j["quad_points"] = s.quad_points;
  emit(s, j.dump(2));
  return 0;
}

std::vector<Instance> load_dir(const Settings& s) {
  if (s.instance_dir.empty()) throw UsageError("--instance-dir is required");
  try {
    return load_corpus(s.instance_dir, parse_options(s));
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

int cmd_verify(const Settings& s) {
  const std::vector<Instance> corpus = load_dir(s);
  VerifyOptions vo;
  vo.grid_n = s.grid;
  if (s.trials_given) vo.sim.trials = s.trials;
  vo.sim.seed = s.seed;
  vo.sim.workers = s.workers;
  vo.run_simulation = !s.no_simulation;
  const auto reports = verify_all(corpus, vo);
  bool all = true;
  for (const auto& r : reports) {
    all = all && r.passed;
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.check_name;
    if (!r.instance_label.empty()) std::cerr << " [" << r.instance_label << "]";
    std::cerr << " residual=" << r.max_residual << " tol=" << r.tolerance << '\n';
  }
  if (!s.csv_dir.empty()) {
    std::filesystem::create_directories(s.csv_dir);
    for (std::size_t k = 0; k < reports.size(); ++k) {
      const auto& r = reports[k];
      std::string name = std::to_string(k) + "_" + r.check_name;
      if (!r.instance_label.empty()) name += "_" + r.instance_label;
      std::ofstream f(std::filesystem::path(s.csv_dir) / (name + ".csv"), std::ios::binary);
      write_check_csv(f, r);
    }
  }
  emit(s, reports_to_json(reports));
  return all ? 0 : 1;
}

int cmd_sweep(const Settings& s) {
  const std::vector<Instance> corpus = load_dir(s);
  const Constants& c = constants();
  std::ostringstream os;
  os.precision(10);
  os << "instance,n,opt,main_sel,main_sel_se,main_iid,main_iid_se,single_threshold,"
        "single_threshold_se,uniform_arrival,uniform_arrival_se,oracle\r\n";
  for (const Instance& inst : corpus) {
    const CurveSet cs = build_curveset(inst, s.grid);
    auto run = [&](Algorithm alg, const ArrivalSchedule* sched) {
      SimOptions so;
      so.alg = alg;
      so.trials = s.trials;
      so.seed = s.seed;
      so.workers = s.workers;
      return estimate(make_context(inst, cs, sched), so);
    };
    const double opt = prophet_value(inst);
    const ArrivalSchedule sel = build_schedule(cs, c.gamma_sel);
    const SimReport main_sel = run(Algorithm::main, &sel);
    os << inst.label << ',' << inst.size() << ',' << opt << ',' << main_sel.ratio << ','
       << main_sel.ratio_stderr << ',';
    if (inst.is_iid()) {
      const ArrivalSchedule iid = build_schedule(cs, c.gamma_iid);
      const SimReport main_iid = run(Algorithm::main, &iid);
      os << main_iid.ratio << ',' << main_iid.ratio_stderr << ',';
    } else {
      os << ",,";
    }
    const SimReport st = run(Algorithm::single_threshold, nullptr);
    const SimReport ua = run(Algorithm::uniform_arrival, nullptr);
    os << st.ratio << ',' << st.ratio_stderr << ',' << ua.ratio << ',' << ua.ratio_stderr << ',';
    if (inst.size() <= 8) os << brute_force_order(inst, s.quad_points).best_value / opt;
    os << "\r\n";
  }
  emit(s, os.str());
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Arrival-time design for the order-selection prophet inequality"};
  app.require_subcommand(1);
  Settings s;
  std::string smooth_text;

  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--instance", s.instance, "instance JSON file");
    sub->add_option("--smooth", smooth_text, "relative sliver width for point masses");
  };
  auto add_grid = [&](CLI::App* sub) { sub->add_option("--grid", s.grid, "grid resolution N"); };
  std::vector<CLI::Option*> trial_opts;
  auto add_sim = [&](CLI::App* sub) {
    trial_opts.push_back(sub->add_option("--trials", s.trials, "Monte Carlo trials"));
    sub->add_option("--seed", s.seed, "random seed");
    sub->add_option("--workers", s.workers, "worker threads (0: all cores)");
  };
  app.add_option("--isa", s.isa, "kernel variant: auto, scalar or avx2");

  auto* constants_cmd = app.add_subcommand("constants", "solve the universal constants");
  constants_cmd->add_option("--hk", s.hk, "emit the H/K curves on M points as CSV");
  constants_cmd->add_option("--out", s.out, "output file");

  auto* curves_cmd = app.add_subcommand("curves", "threshold and exceedance curves");
  curves_cmd->require_subcommand(1);
  auto* curves_dump = curves_cmd->add_subcommand("dump", "write the curves as CSV");
  add_instance(curves_dump);
  add_grid(curves_dump);
  curves_dump->add_option("--out", s.out, "output file");

  auto* schedule_cmd = app.add_subcommand("schedule", "arrival-time distributions");
  schedule_cmd->require_subcommand(1);
  auto* schedule_dump = schedule_cmd->add_subcommand("dump", "write the schedule as CSV");
  add_instance(schedule_dump);
  add_grid(schedule_dump);
  schedule_dump->add_option("--gamma", s.gamma, "auto, sel, iid or a value in (0, 1)");
  schedule_dump->add_option("--out", s.out, "output file");

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of E[ALG] / OPT");
  add_instance(simulate_cmd);
  add_grid(simulate_cmd);
  add_sim(simulate_cmd);
  simulate_cmd->add_option("--alg", s.alg, "main, single_threshold or uniform_arrival");
  simulate_cmd->add_option("--gamma", s.gamma, "auto, sel, iid or a value in (0, 1)");
  simulate_cmd->add_option("--mode", s.mode, "threshold evaluation: exact or grid");
  simulate_cmd->add_option("--out", s.out, "report JSON file");

  auto* verify_cmd = app.add_subcommand("verify", "numerical verification suite");
  verify_cmd->require_subcommand(1);
  auto* verify_all_cmd = verify_cmd->add_subcommand("all", "run every check on a corpus");
  verify_all_cmd->add_option("--instance-dir", s.instance_dir, "directory of instance files");
  verify_all_cmd->add_option("--smooth", smooth_text, "relative sliver width for point masses");
  verify_all_cmd->add_option("--csv-dir", s.csv_dir, "write worst points per check as CSV");
  verify_all_cmd->add_flag("--no-simulation", s.no_simulation, "skip the Monte Carlo checks");
  verify_all_cmd->add_option("--out", s.out, "report JSON file");
  add_grid(verify_all_cmd);
  add_sim(verify_all_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "best fixed order by backward induction");
  add_instance(oracle_cmd);
  oracle_cmd->add_option("--quad-points", s.quad_points, "Gauss-Legendre points");
  oracle_cmd->add_option("--out", s.out, "output file");

  auto* sweep_cmd = app.add_subcommand("sweep", "ratio table over a corpus");
  sweep_cmd->add_option("--instance-dir", s.instance_dir, "directory of instance files");
  sweep_cmd->add_option("--smooth", smooth_text, "relative sliver width for point masses");
  sweep_cmd->add_option("--quad-points", s.quad_points, "Gauss-Legendre points for the oracle");
  sweep_cmd->add_option("--out", s.out, "CSV file");
  add_grid(sweep_cmd);
  add_sim(sweep_cmd);

  try {
    app.parse(argc, argv);
    for (const auto* o : trial_opts) s.trials_given = s.trials_given || o->count() > 0;
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!smooth_text.empty()) {
      char* end = nullptr;
      const double v = std::strtod(smooth_text.c_str(), &end);
      if (end == smooth_text.c_str() || *end != '\0') throw UsageError("--smooth must be a number");
      s.smooth = v;
    }
    check_common(s);
    if (*constants_cmd) return cmd_constants(s);
    if (*curves_dump) return cmd_curves(s);
    if (*schedule_dump) return cmd_schedule(s);
    if (*simulate_cmd) return cmd_simulate(s);
    if (*verify_all_cmd) return cmd_verify(s);
    if (*oracle_cmd) return cmd_oracle(s);
    if (*sweep_cmd) return cmd_sweep(s);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidityError& e) {
    std::cerr << "validity failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace prophet::cli
