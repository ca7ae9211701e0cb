#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rk {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the expression parser; carries the byte offset of the offending
// token so callers can point at the exact spot in the source string.
class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t offset)
      : error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Evaluation was requested at a point outside a chart's validity domain,
// or a scalar operation left its mathematical domain (log of a negative
// number, division by zero, ...).
class domain_error : public error {
 public:
  using error::error;
};

// Metric matrix failed the invertibility threshold at an evaluation point.
class degenerate_metric_error : public error {
 public:
  using error::error;
};

// An operation's documented precondition was violated (wrong dimension,
// field not transport-compatible, non-positive forcing term, ...).
class precondition_error : public error {
 public:
  using error::error;
};

// Run configuration is syntactically or semantically unusable.
class config_error : public error {
 public:
  using error::error;
};

}  // namespace rk
