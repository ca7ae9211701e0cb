#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace rk {

// One named verification with its measured residual and the tolerance it was
// held to.  `pass` is residual <= tol (non-finite residuals always fail).
struct Check {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

Check make_check(std::string name, double residual, double tol);

struct Report {
  std::string command;
  std::vector<Check> checks;
  std::uint64_t seed = 0;
  int samples = 0;
  nlohmann::ordered_json config_echo = nlohmann::ordered_json::object();
  double elapsed_ms = 0.0;

  bool pass() const;
  void add(std::string name, double residual, double tol);
  nlohmann::ordered_json to_json() const;
  std::string to_json_string() const;  // 2-space indented, trailing newline

  // Human-readable table (one line per check) for terminal output.
  std::string to_table() const;
};

}  // namespace rk
