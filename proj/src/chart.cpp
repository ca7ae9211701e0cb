#include "riccikit/chart.hpp"

#include "riccikit/errors.hpp"

namespace rk {

double Sampler::unit() {
  // Top 53 bits -> [0,1); avoids distribution objects whose output is
  // implementation-defined.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Sampler::uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

Point Sampler::sample(const Chart& chart,
                      const std::optional<std::vector<std::array<double, 2>>>& box_override) {
  const auto& box = box_override ? *box_override : chart.sample_box;
  if (static_cast<int>(box.size()) != chart.dim())
    throw config_error("sampling box rank does not match chart dimension");
  Point p;
  p.chart_id = chart.id;
  p.x.resize(chart.dim());
  for (int attempt = 0; attempt < 10000; ++attempt) {
    for (int i = 0; i < chart.dim(); ++i) {
      const double margin = kBoundaryMargin * (box[i][1] - box[i][0]);
      p.x[i] = uniform(box[i][0] + margin, box[i][1] - margin);
    }
    if (chart.contains(p.x)) return p;
  }
  throw domain_error("sampling box does not intersect the chart domain");
}

std::vector<Point> Sampler::sample_many(
    const Chart& chart, int n,
    const std::optional<std::vector<std::array<double, 2>>>& box_override) {
  std::vector<Point> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back(sample(chart, box_override));
  return pts;
}

}  // namespace rk
