#include "riccikit/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "riccikit/errors.hpp"

namespace rk {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& msg) { throw config_error("config: " + msg); }

double require_positive(const json& j, const std::string& key) {
  if (!j.is_number()) bad("\"" + key + "\" must be a number");
  const double v = j.get<double>();
  if (!(v > 0.0)) bad("\"" + key + "\" must be positive");
  return v;
}

std::vector<std::array<double, 2>> parse_bounds(const json& j, const std::string& key, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    bad("\"" + key + "\" must be an array of " + std::to_string(dim) + " [lo, hi] pairs");
  std::vector<std::array<double, 2>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      bad("\"" + key + "\" entries must be [lo, hi] number pairs");
    const double lo = e[0].get<double>(), hi = e[1].get<double>();
    if (!(lo < hi)) bad("\"" + key + "\" entries must satisfy lo < hi");
    out.push_back({lo, hi});
  }
  return out;
}

Chart parse_chart(const json& j) {
  if (!j.is_object()) bad("\"chart\" must be an object");
  if (!j.contains("coords") || !j["coords"].is_array() || j["coords"].size() < 2)
    bad("\"chart.coords\" must list at least two coordinate names");
  Chart c;
  c.id = "user";
  for (const auto& e : j["coords"]) {
    if (!e.is_string()) bad("\"chart.coords\" entries must be strings");
    c.coords.push_back(e.get<std::string>());
  }
  if (!j.contains("bounds")) bad("\"chart.bounds\" is required for user charts");
  const auto bounds = parse_bounds(j["bounds"], "chart.bounds", c.dim());
  c.sample_box = bounds;
  c.domain = [bounds](std::span<const double> x) {
    for (std::size_t i = 0; i < bounds.size(); ++i)
      if (!(x[i] > bounds[i][0] && x[i] < bounds[i][1])) return false;
    return true;
  };
  return c;
}

std::string derive_signature(const MetricField& g, std::uint64_t seed) {
  Sampler s(seed);
  const Point p = s.sample(g.chart);
  const MetricEval ev = eval_metric(g, p);
  Matrix sym(g.dim(), g.dim());
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) sym(i, j) = 0.5 * (ev.g(i, j) + ev.g(j, i));
  std::string sig;
  for (double ev_i : symmetric_eigenvalues(sym)) sig += ev_i < 0.0 ? '-' : '+';
  return sig;
}

MetricField parse_user_metric(const json& metric_j, const json& root, std::uint64_t seed) {
  if (!root.contains("chart")) bad("a user metric requires a \"chart\" section");
  Chart chart = parse_chart(root["chart"]);
  const int m = chart.dim();
  if (!metric_j.contains("components")) bad("\"metric.components\" is required");
  const auto& comps = metric_j["components"];
  if (!comps.is_array() || static_cast<int>(comps.size()) != m)
    bad("\"metric.components\" must be an " + std::to_string(m) + "x" + std::to_string(m) +
        " array of expression strings");
  MetricField g;
  g.chart = chart;
  g.components.resize(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i) {
    const auto& row = comps[i];
    if (!row.is_array() || static_cast<int>(row.size()) != m)
      bad("\"metric.components\" row " + std::to_string(i) + " must have " + std::to_string(m) +
          " entries");
    for (int j = 0; j < m; ++j) {
      if (!row[j].is_string()) bad("\"metric.components\" entries must be expression strings");
      g.components[static_cast<std::size_t>(i) * m + j] =
          parse_expression(row[j].get<std::string>(), chart.coords);
    }
  }
  if (metric_j.contains("signature")) {
    if (!metric_j["signature"].is_string()) bad("\"metric.signature\" must be a string");
    g.signature = metric_j["signature"].get<std::string>();
    if (static_cast<int>(g.signature.size()) != m ||
        g.signature.find_first_not_of("+-") != std::string::npos)
      bad("\"metric.signature\" must be " + std::to_string(m) + " characters of '+'/'-'");
  } else {
    g.signature = derive_signature(g, seed);
  }
  return g;
}

}  // namespace

void RunConfig::rebuild_echo() {
  ordered_json e;
  if (metric_name)
    e["metric"] = "builtin:" + *metric_name;
  else {
    ordered_json mj;
    auto rows = ordered_json::array();
    const int m = metric.dim();
    for (int i = 0; i < m; ++i) {
      auto row = ordered_json::array();
      for (int j = 0; j < m; ++j) row.push_back(to_string(metric.at(i, j), metric.chart.coords));
      rows.push_back(std::move(row));
    }
    mj["components"] = std::move(rows);
    mj["signature"] = metric.signature;
    e["metric"] = std::move(mj);
  }
  e["chart"] = ordered_json{{"coords", metric.chart.coords}};
  const auto& box_used = box ? *box : metric.chart.sample_box;
  auto bj = ordered_json::array();
  for (const auto& b : box_used) bj.push_back(ordered_json::array({b[0], b[1]}));
  e["box"] = std::move(bj);
  if (a) {
    auto aj = ordered_json::array();
    for (const auto& c : a->components) aj.push_back(to_string(c, metric.chart.coords));
    e["fields"]["A"] = std::move(aj);
  }
  if (sigma) e["fields"]["sigma"] = to_string(sigma->f, metric.chart.coords);
  e["samples"] = samples;
  e["seed"] = seed;
  e["tolerances"] = ordered_json{{"algebraic", tol.algebraic},
                                 {"curvature", tol.curvature},
                                 {"trajectory", tol.trajectory},
                                 {"blowup_time", tol.blowup_time}};
  e["fourpiG"] = four_pi_g;
  {
    ordered_json fj;
    if (flow.x0) fj["x0"] = *flow.x0;
    fj["t_max"] = flow.t_max;
    fj["alphas"] = flow.alphas;
    auto rj = ordered_json::array();
    for (const auto& rc : flow.riccati) rj.push_back(ordered_json{{"f", rc.f}, {"y0", rc.y0}});
    fj["riccati"] = std::move(rj);
    e["flow"] = std::move(fj);
  }
  if (metric.dim() == 2)
    e["notes"] = ordered_json::array(
        {"dimension-2 chart: identities that require m >= 3 are skipped"});
  echo = std::move(e);
}

RunConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) bad("top level must be a JSON object");
  RunConfig cfg;

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      bad("\"seed\" must be a non-negative integer");
    const auto s = j["seed"].get<long long>();
    if (s < 0) bad("\"seed\" must be a non-negative integer");
    cfg.seed = static_cast<std::uint64_t>(s);
  }

  // Metric: builtin name string, or an object with component expressions.
  if (!j.contains("metric")) {
    cfg.metric_name = "minkowski4";
    cfg.metric = builtin_metric("minkowski4");
  } else if (j["metric"].is_string()) {
    std::string name = j["metric"].get<std::string>();
    if (name.rfind("builtin:", 0) == 0) name = name.substr(8);
    if (!is_builtin_metric(name)) bad("unknown built-in metric \"" + name + "\"");
    cfg.metric_name = name;
    cfg.metric = builtin_metric(name);
  } else if (j["metric"].is_object()) {
    cfg.metric = parse_user_metric(j["metric"], j, cfg.seed);
  } else {
    bad("\"metric\" must be a built-in name or a components object");
  }
  const int m = cfg.metric.dim();

  if (j.contains("fields")) {
    const auto& f = j["fields"];
    if (!f.is_object()) bad("\"fields\" must be an object");
    if (f.contains("A")) {
      const auto& aj = f["A"];
      if (!aj.is_array() || static_cast<int>(aj.size()) != m)
        bad("\"fields.A\" must be an array of " + std::to_string(m) + " expression strings");
      VectorField a;
      a.chart = cfg.metric.chart;
      for (const auto& e : aj) {
        if (!e.is_string()) bad("\"fields.A\" entries must be strings");
        a.components.push_back(parse_expression(e.get<std::string>(), a.chart.coords));
      }
      cfg.a = std::move(a);
    }
    if (f.contains("sigma")) {
      if (!f["sigma"].is_string()) bad("\"fields.sigma\" must be an expression string");
      cfg.sigma = ScalarField{cfg.metric.chart,
                              parse_expression(f["sigma"].get<std::string>(), cfg.metric.chart.coords)};
    }
  }

  if (j.contains("samples")) {
    if (!j["samples"].is_number_integer()) bad("\"samples\" must be an integer");
    cfg.samples = j["samples"].get<int>();
    if (cfg.samples < 1) bad("\"samples\" must be >= 1");
  }
  if (j.contains("box")) cfg.box = parse_bounds(j["box"], "box", m);
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) bad("\"tolerances\" must be an object");
    if (t.contains("algebraic")) cfg.tol.algebraic = require_positive(t["algebraic"], "tolerances.algebraic");
    if (t.contains("curvature")) cfg.tol.curvature = require_positive(t["curvature"], "tolerances.curvature");
    if (t.contains("trajectory"))
      cfg.tol.trajectory = require_positive(t["trajectory"], "tolerances.trajectory");
    if (t.contains("blowup_time"))
      cfg.tol.blowup_time = require_positive(t["blowup_time"], "tolerances.blowup_time");
  }
  if (j.contains("fourpiG")) cfg.four_pi_g = require_positive(j["fourpiG"], "fourpiG");

  if (j.contains("flow")) {
    const auto& fj = j["flow"];
    if (!fj.is_object()) bad("\"flow\" must be an object");
    if (fj.contains("x0")) {
      if (!fj["x0"].is_array() || static_cast<int>(fj["x0"].size()) != m)
        bad("\"flow.x0\" must be an array of " + std::to_string(m) + " numbers");
      Vec x0;
      for (const auto& e : fj["x0"]) {
        if (!e.is_number()) bad("\"flow.x0\" entries must be numbers");
        x0.push_back(e.get<double>());
      }
      if (!cfg.metric.chart.contains(x0)) bad("\"flow.x0\" lies outside the chart domain");
      cfg.flow.x0 = std::move(x0);
    }
    if (fj.contains("t_max")) cfg.flow.t_max = require_positive(fj["t_max"], "flow.t_max");
    if (fj.contains("alphas")) {
      if (!fj["alphas"].is_array()) bad("\"flow.alphas\" must be an array of numbers");
      cfg.flow.alphas.clear();
      for (const auto& e : fj["alphas"]) {
        if (!e.is_number()) bad("\"flow.alphas\" entries must be numbers");
        cfg.flow.alphas.push_back(e.get<double>());
      }
    }
    if (fj.contains("riccati")) {
      if (!fj["riccati"].is_array()) bad("\"flow.riccati\" must be an array");
      cfg.flow.riccati.clear();
      for (const auto& e : fj["riccati"]) {
        if (!e.is_object() || !e.contains("f") || !e["f"].is_string() || !e.contains("y0"))
          bad("\"flow.riccati\" entries must be {\"f\": expr, \"y0\": number}");
        RiccatiCase rc;
        rc.f = e["f"].get<std::string>();
        parse_expression(rc.f, {"t"});  // validate now so errors name the key
        rc.y0 = require_positive(e["y0"], "flow.riccati.y0");
        cfg.flow.riccati.push_back(std::move(rc));
      }
    }
  }

  cfg.rebuild_echo();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open \"" + path + "\"");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error("config: invalid JSON in \"" + path + "\": " + e.what());
  }
  return parse_config(j);
}

RunConfig config_for_metric(const std::string& name) {
  nlohmann::json j;
  j["metric"] = name;
  return parse_config(j);
}

void override_metric(RunConfig& cfg, const std::string& builtin_name) {
  std::string name = builtin_name;
  if (name.rfind("builtin:", 0) == 0) name = name.substr(8);
  if (!is_builtin_metric(name)) bad("unknown built-in metric \"" + name + "\"");
  cfg.metric = builtin_metric(name);
  cfg.metric_name = name;
  // Fields were parsed against the previous chart; drop them if the
  // coordinate lists differ, re-bind them to the new chart otherwise.
  if (cfg.a && cfg.a->chart.coords != cfg.metric.chart.coords) cfg.a.reset();
  if (cfg.sigma && cfg.sigma->chart.coords != cfg.metric.chart.coords) cfg.sigma.reset();
  if (cfg.a) cfg.a->chart = cfg.metric.chart;
  if (cfg.sigma) cfg.sigma->chart = cfg.metric.chart;
  if (cfg.box && static_cast<int>(cfg.box->size()) != cfg.metric.dim()) cfg.box.reset();
  if (cfg.flow.x0 && static_cast<int>(cfg.flow.x0->size()) != cfg.metric.dim())
    cfg.flow.x0.reset();
  cfg.rebuild_echo();
}

void override_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.rebuild_echo();
}

void override_samples(RunConfig& cfg, int samples) {
  if (samples < 1) bad("\"samples\" must be >= 1");
  cfg.samples = samples;
  cfg.rebuild_echo();
}

void override_four_pi_g(RunConfig& cfg, double v) {
  if (!(v > 0.0)) bad("\"fourpiG\" must be positive");
  cfg.four_pi_g = v;
  cfg.rebuild_echo();
}

}  // namespace rk
