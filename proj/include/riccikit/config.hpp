#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "riccikit/metric.hpp"

namespace rk {

struct ToleranceSet {
  double algebraic = 1e-8;     // pointwise identities evaluated on one path
  double curvature = 1e-6;     // two-path comparisons through curvature
  double trajectory = 1e-4;    // residuals involving integrated tracks
  double blowup_time = 0.005;  // blow-up time estimates vs closed forms
};

struct RiccatiCase {
  std::string f = "1";  // expression in t, positive on the window
  double y0 = 1.0;
};

struct FlowConfig {
  std::optional<Vec> x0;          // start point; defaults to a seeded sample
  double t_max = 10.0;
  std::vector<double> alphas{0.5, 1.0, 2.0};
  std::vector<RiccatiCase> riccati{RiccatiCase{}};
};

// Fully resolved run configuration: metric (built-in or user components),
// optional fields, sampling controls and tolerances.  `echo` carries the
// effective values for the report.
struct RunConfig {
  MetricField metric;
  std::optional<std::string> metric_name;  // set for built-ins
  std::optional<VectorField> a;
  std::optional<ScalarField> sigma;
  int samples = 100;
  std::uint64_t seed = 42;
  std::optional<std::vector<std::array<double, 2>>> box;
  ToleranceSet tol;
  double four_pi_g = 1.0;
  FlowConfig flow;
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();

  void rebuild_echo();
};

// Parse and validate; throws rk::config_error (or rk::parse_error for bad
// component expressions) with a message naming the offending key.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_file(const std::string& path);

// Minimal config around one built-in metric (CLI --metric without --config).
RunConfig config_for_metric(const std::string& name);

// Post-parse overrides (CLI flags / C API setters).
void override_metric(RunConfig& cfg, const std::string& builtin_name);
void override_seed(RunConfig& cfg, std::uint64_t seed);
void override_samples(RunConfig& cfg, int samples);
void override_four_pi_g(RunConfig& cfg, double v);

}  // namespace rk
