#include "riccikit/report.hpp"

#include <cmath>
#include <cstdio>

namespace rk {

Check make_check(std::string name, double residual, double tol) {
  Check c;
  c.name = std::move(name);
  c.residual = residual;
  c.tol = tol;
  c.pass = std::isfinite(residual) && residual <= tol;
  return c;
}

bool Report::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void Report::add(std::string name, double residual, double tol) {
  checks.push_back(make_check(std::move(name), residual, tol));
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["pass"] = pass();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    // JSON has no non-finite numbers; clamp so a failed check still reports a
    // parseable (and obviously failing) residual.
    e["residual"] = std::isfinite(c.residual) ? c.residual : 9.9e99;
    e["tol"] = c.tol;
    e["pass"] = c.pass;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  j["seed"] = seed;
  j["samples"] = samples;
  j["config"] = config_echo;
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

std::string Report::to_json_string() const { return to_json().dump(2) + "\n"; }

std::string Report::to_table() const {
  std::string out;
  char line[256];
  for (const auto& c : checks) {
    std::snprintf(line, sizeof(line), "%-44s %12.3e  (tol %8.1e)  %s\n", c.name.c_str(),
                  c.residual, c.tol, c.pass ? "pass" : "FAIL");
    out += line;
  }
  std::snprintf(line, sizeof(line), "%s: %s\n", command.c_str(), pass() ? "pass" : "FAIL");
  out += line;
  return out;
}

}  // namespace rk
