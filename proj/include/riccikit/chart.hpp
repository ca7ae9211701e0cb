#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace rk {

// A single coordinate chart: names, dimension, validity predicate, and a
// default sampling box chosen to sit safely inside the domain.
struct Chart {
  std::string id;
  std::vector<std::string> coords;
  // Validity predicate; empty means all of R^m.
  std::function<bool(std::span<const double>)> domain;
  // Per-coordinate [lo, hi] used when a run config does not supply its own box.
  std::vector<std::array<double, 2>> sample_box;

  int dim() const { return static_cast<int>(coords.size()); }
  bool contains(std::span<const double> x) const { return !domain || domain(x); }
};

struct Point {
  std::string chart_id;
  std::vector<double> x;
};

// Fraction of each box edge shaved off both ends before sampling, so sampled
// points never sit on (or numerically at) the domain boundary.
inline constexpr double kBoundaryMargin = 1e-3;

// Deterministic sampler: a fixed 64-bit engine (sequence pinned by the C++
// standard) with an explicit uint64 -> [0,1) mapping, so identical seeds give
// identical points on every platform.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double unit();  // uniform in [0, 1)
  double uniform(double lo, double hi);

  // Uniform over the (margin-shrunk) box intersected with the chart domain,
  // by rejection.  Throws rk::domain_error if the box and domain barely
  // intersect (10000 consecutive rejections).
  Point sample(const Chart& chart,
               const std::optional<std::vector<std::array<double, 2>>>& box_override = std::nullopt);

  std::vector<Point> sample_many(const Chart& chart, int n,
                                 const std::optional<std::vector<std::array<double, 2>>>& box_override = std::nullopt);

 private:
  std::mt19937_64 engine_;
};

}  // namespace rk
