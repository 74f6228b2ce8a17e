#include "ledp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ledp {

double node_approx_factor(double estimate, double exact_core) {
  const double s = std::max(estimate, 1.0);
  const double t = exact_core;
  return std::max(s, t) / std::min(s, t);
}

TriangleMetrics triangle_metrics(double delta, double exact_count) {
  TriangleMetrics m;
  m.relative_error = std::abs(delta - exact_count) / exact_count;
  m.multiplicative_factor =
      std::max(delta, exact_count) / std::max(1.0, std::min(delta, exact_count));
  return m;
}

TheoreticalBounds theoretical_bounds(NodeId max_degree, NodeId max_core, double eps,
                                     double eta) {
  TheoreticalBounds b;
  b.noiseless = 2.0 + eta;
  const double log_d =
      std::log(static_cast<double>(max_degree)) / std::log(1.0 + eta / 5.0);
  b.with_noise = b.noiseless + log_d * log_d * log_d / (eps * static_cast<double>(max_core));
  return b;
}

double nearest_rank_percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(pct > 0.0 && pct <= 100.0)) throw std::invalid_argument("pct must be in (0, 100]");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(pct / 100.0 * static_cast<double>(values.size())));
  return values[std::max<std::size_t>(rank, 1) - 1];
}

}  // namespace ledp
