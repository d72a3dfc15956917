#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "prophet/distributions.hpp"

namespace prophet {
namespace {

using nlohmann::json;

[[noreturn]] void fail_item(std::size_t index, const std::string& what) {
  throw ParseError("item " + std::to_string(index + 1) + ": " + what);
}

double number_field(const json& item, const char* name, std::size_t index) {
  auto it = item.find(name);
  if (it == item.end()) fail_item(index, std::string("missing field \"") + name + "\"");
  if (!it->is_number()) fail_item(index, std::string("field \"") + name + "\" is not a number");
  return it->get<double>();
}

std::vector<std::pair<double, double>> pair_list(const json& item, const char* name,
                                                 std::size_t index) {
  auto it = item.find(name);
  if (it == item.end() || !it->is_array()) {
    fail_item(index, std::string("field \"") + name + "\" must be an array of pairs");
  }
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < it->size(); ++k) {
    const json& pt = (*it)[k];
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
      fail_item(index, "malformed pair at point " + std::to_string(k + 1));
    }
    out.emplace_back(pt[0].get<double>(), pt[1].get<double>());
  }
  return out;
}

// Point masses (v, p) become uniform slivers on [v, v + eps] with
// eps = rel * v (rel itself when v = 0).
std::vector<CdfPoint> smooth_atoms(std::vector<std::pair<double, double>> atoms, double rel,
                                   std::size_t index) {
  if (atoms.empty()) fail_item(index, "discrete item needs at least one atom");
  std::sort(atoms.begin(), atoms.end());
  double total = 0.0;
  for (const auto& [v, p] : atoms) {
    if (!(std::isfinite(v) && v >= 0.0)) fail_item(index, "atom value must be finite and >= 0");
    if (!(p >= 0.0 && p <= 1.0)) fail_item(index, "atom probability outside [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) fail_item(index, "atom probabilities must sum to 1");

  std::vector<CdfPoint> pts;
  double cum = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const auto [v, p] = atoms[k];
    if (p == 0.0) continue;
    const double width = rel * (v > 0.0 ? v : 1.0);
    if (!pts.empty() && !(v > pts.back().value)) {
      fail_item(index, "smoothing width overlaps the next atom at " + std::to_string(v));
    }
    pts.push_back({v, cum});
    cum = (k + 1 == atoms.size()) ? 1.0 : std::min(1.0, cum + p);
    pts.push_back({v + width, cum});
  }
  pts.back().cumulative = 1.0;
  return pts;
}

ValueDist parse_item(const json& item, std::size_t index, std::optional<double> smooth) {
  if (!item.is_object()) fail_item(index, "not an object");
  auto kind_it = item.find("kind");
  if (kind_it == item.end() || !kind_it->is_string()) fail_item(index, "missing \"kind\"");
  const std::string kind = kind_it->get<std::string>();
  try {
    if (kind == "uniform") {
      return ValueDist::uniform(number_field(item, "lo", index), number_field(item, "hi", index));
    }
    if (kind == "exponential") return ValueDist::exponential(number_field(item, "rate", index));
    if (kind == "pareto") {
      return ValueDist::pareto(number_field(item, "scale", index),
                               number_field(item, "shape", index));
    }
    if (kind == "piecewise_linear_cdf") {
      std::vector<CdfPoint> pts;
      for (auto [v, c] : pair_list(item, "points", index)) pts.push_back({v, c});
      return ValueDist::piecewise_linear(std::move(pts));
    }
    if (kind == "discrete") {
      if (!smooth) {
        fail_item(index, "discrete distributions are not continuous; enable smoothing");
      }
      return ValueDist::piecewise_linear(
          smooth_atoms(pair_list(item, "atoms", index), *smooth, index));
    }
  } catch (const std::invalid_argument& e) {
    fail_item(index, e.what());
  }
  fail_item(index, "unknown kind \"" + kind + "\"");
}

}  // namespace

Instance parse_instance(std::string_view doc, const ParseOptions& options) {
  json root;
  try {
    root = json::parse(doc);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("instance document must be a JSON object");

  std::optional<double> smooth = options.smooth;
  if (!smooth && root.contains("smooth")) {
    if (!root["smooth"].is_number()) throw ParseError("\"smooth\" must be a number");
    smooth = root["smooth"].get<double>();
  }
  if (!smooth) smooth = kDefaultSmooth;
  if (smooth && !(*smooth > 0.0 && *smooth < 1.0)) {
    throw ParseError("smoothing width must lie in (0, 1)");
  }

  auto items_it = root.find("items");
  if (items_it == root.end() || !items_it->is_array()) throw ParseError("missing \"items\" array");
  if (items_it->empty()) throw ParseError("empty item list");

  Instance inst;
  for (std::size_t i = 0; i < items_it->size(); ++i) {
    inst.items.push_back(parse_item((*items_it)[i], i, smooth));
  }
  if (auto it = root.find("label"); it != root.end()) {
    if (!it->is_string()) throw ParseError("\"label\" must be a string");
    inst.label = it->get<std::string>();
  }
  return inst;
}

Instance load_instance(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  Instance inst = parse_instance(buf.str(), options);
  if (inst.label.empty()) {
    const auto slash = path.find_last_of('/');
    std::string stem = path.substr(slash == std::string::npos ? 0 : slash + 1);
    if (auto dot = stem.rfind(".json"); dot != std::string::npos) stem.resize(dot);
    inst.label = stem;
  }
  return inst;
}

std::string instance_to_json(const Instance& inst) {
  json root;
  if (!inst.label.empty()) root["label"] = inst.label;
  json items = json::array();
  for (const auto& d : inst.items) {
    json item;
    item["kind"] = std::string(d.kind_name());
    if (auto u = std::get_if<Uniform>(&d.law())) {
      item["lo"] = u->lo;
      item["hi"] = u->hi;
    } else if (auto e = std::get_if<Exponential>(&d.law())) {
      item["rate"] = e->rate;
    } else if (auto p = std::get_if<Pareto>(&d.law())) {
      item["scale"] = p->scale;
      item["shape"] = p->shape;
    } else if (auto pw = std::get_if<PiecewiseLinearCdf>(&d.law())) {
      json pts = json::array();
      for (const auto& pt : pw->points) pts.push_back({pt.value, pt.cumulative});
      item["points"] = pts;
    }
    items.push_back(item);
  }
  root["items"] = items;
  return root.dump(2);
}

}  // namespace prophet
