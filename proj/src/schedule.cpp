#include "prophet/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "prophet/kernels.hpp"

namespace prophet {

std::size_t designate_item_one(const Instance& inst) {
  if (inst.items.empty()) throw std::invalid_argument("designate_item_one: empty instance");
  std::size_t best = 0;
  double best_inf = inst.items[0].support().ess_inf;
  for (std::size_t i = 1; i < inst.size(); ++i) {
    const double v = inst.items[i].support().ess_inf;
    if (v > best_inf) {
      best = i;
      best_inf = v;
    }
  }
  return best;
}

ArrivalSchedule build_schedule(const CurveSet& cs, double gamma, const ScheduleOptions& options) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("build_schedule: gamma in (0, 1)");
  const std::size_t n = cs.n_items;
  const std::size_t cols = cs.cols();
  const std::size_t cells = cs.grid_n;

  ArrivalSchedule s;
  s.gamma = gamma;
  s.n_items = n;
  s.grid_n = cs.grid_n;
  s.t = cs.t;
  s.g.resize(cols);
  s.exponent.assign(n * cols, 0.0);
  s.density.assign(n * cols, 0.0);
  s.cdf.assign(n * cols, 0.0);
  s.atom.assign(n, 0.0);

  s.item_one = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (cs.p_row(i)[cols - 1] == 1.0) {
      s.item_one = i;
      break;
    }
  }
  if (s.item_one == n) throw std::logic_error("build_schedule: no item with p_i(1) = 1");

  kernels::aux_function(cs.p, cs.q, cs.t, n, gamma, s.g);

  std::vector<double> increments(cells);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = cs.p_row(i);
    const auto q = cs.q_row(i);
    kernels::stieltjes_increments(p, s.g, q, gamma, increments);

    double* e = s.exponent.data() + i * cols;
    double* f = s.density.data() + i * cols;
    double* cdf = s.cdf.data() + i * cols;
    for (std::size_t k = 0; k < cells; ++k) {
      e[k + 1] = e[k] + increments[k];
      const double dq = q[k + 1] - q[k];
      const double g_mid = 0.5 * (s.g[k] + s.g[k + 1]);
      const double e_mid = 0.5 * (e[k] + e[k + 1]);
      const double mass = dq == 0.0 ? 0.0 : gamma * dq * std::exp(-e_mid) / g_mid;
      cdf[k + 1] = cdf[k] + mass;
      f[k] = mass / (s.t[k + 1] - s.t[k]);
    }
    f[cells] = f[cells - 1];

    double atom = 1.0 - cdf[cells];
    if (atom < 0.0) {
      if (atom > -options.clamp_slack) {
        s.warnings.push_back("item " + std::to_string(i + 1) + ": atom " + std::to_string(atom) +
                             " clamped to 0");
        atom = 0.0;
      } else if (!options.allow_invalid) {
        throw ValidityError("item " + std::to_string(i + 1) +
                            ": arrival density integrates to " + std::to_string(cdf[cells]) +
                            " > 1 at gamma " + std::to_string(gamma));
      }
    }
    s.atom[i] = atom;
  }
  return s;
}

double schedule_mass(const ArrivalSchedule& sched, std::size_t item) {
  if (item >= sched.n_items) throw std::out_of_range("schedule_mass: item index");
  return sched.cdf_row(item)[sched.grid_n];
}

double sample_arrival_from_uniform(const ArrivalSchedule& sched, std::size_t item, double u) {
  const auto F = sched.cdf_row(item);
  if (u >= F[sched.grid_n]) return 1.0;
  // First node strictly above u; the cell before it has positive mass.
  const auto it = std::upper_bound(F.begin(), F.end(), u);
  const std::size_t k = static_cast<std::size_t>(it - F.begin()) - 1;
  const double w = (u - F[k]) / (F[k + 1] - F[k]);
  const double t = sched.t[k] + w * (sched.t[k + 1] - sched.t[k]);
  return std::min(t, std::nextafter(1.0, 0.0));
}

void write_schedule_csv(std::ostream& out, const ArrivalSchedule& sched) {
  nlohmann::json header;
  header["gamma"] = sched.gamma;
  header["item_one"] = sched.item_one + 1;
  header["n_items"] = sched.n_items;
  header["grid_n"] = sched.grid_n;
  header["atoms"] = sched.atom;
  const auto old_prec = out.precision(17);
  out << "# " << header.dump() << "\r\n";
  out << "t,g";
  for (std::size_t i = 0; i < sched.n_items; ++i) out << ",f_" << i + 1 << ",F_" << i + 1;
  out << "\r\n";
  for (std::size_t k = 0; k < sched.cols(); ++k) {
    out << sched.t[k] << ',' << sched.g[k];
    for (std::size_t i = 0; i < sched.n_items; ++i) {
      out << ',' << sched.density_row(i)[k] << ',' << sched.cdf_row(i)[k];
    }
    out << "\r\n";
  }
  out.precision(old_prec);
}

ArrivalSchedule read_schedule_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw ParseError("schedule CSV: missing '# {json}' header line");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line.substr(2));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schedule CSV header: ") + e.what());
  }
  ArrivalSchedule s;
  try {
    s.gamma = header.at("gamma").get<double>();
    s.item_one = header.at("item_one").get<std::size_t>() - 1;
    s.n_items = header.at("n_items").get<std::size_t>();
    s.grid_n = header.at("grid_n").get<std::size_t>();
    s.atom = header.at("atoms").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schedule CSV header: ") + e.what());
  }
  if (s.atom.size() != s.n_items || s.grid_n == 0) throw ParseError("schedule CSV: bad header");

  const std::size_t cols = s.cols();
  s.t.resize(cols);
  s.g.resize(cols);
  s.density.assign(s.n_items * cols, 0.0);
  s.cdf.assign(s.n_items * cols, 0.0);

  std::getline(in, line);  // column names
  for (std::size_t k = 0; k < cols; ++k) {
    if (!std::getline(in, line)) throw ParseError("schedule CSV: truncated table");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<double> fields;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw ParseError("schedule CSV: bad number '" + cell + "'");
      fields.push_back(v);
    }
    if (fields.size() != 2 + 2 * s.n_items) {
      throw ParseError("schedule CSV: row " + std::to_string(k + 1) + " has wrong column count");
    }
    s.t[k] = fields[0];
    s.g[k] = fields[1];
    for (std::size_t i = 0; i < s.n_items; ++i) {
      s.density[i * cols + k] = fields[2 + 2 * i];
      s.cdf[i * cols + k] = fields[3 + 2 * i];
    }
  }
  return s;
}

}  // namespace prophet
