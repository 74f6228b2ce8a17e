#pragma once

#include <cstdint>
#include <vector>

#include "ledp/graph.hpp"

namespace ledp {

/// Per-node approximation factor max(s, t) / min(s, t). Estimates below 1
/// are clamped to 1 for the metric only; exact cores are >= 1 because
/// zero-degree nodes are removed during preprocessing.
double node_approx_factor(double estimate, double exact_core);

struct TriangleMetrics {
  double relative_error = 0.0;
  double multiplicative_factor = 0.0;
};

/// relative error |delta - T| / T and multiplicative factor
/// max(delta, T) / max(1, min(delta, T)); negative estimates are allowed and
/// handled by the max(1, .) clamp.
TriangleMetrics triangle_metrics(double delta, double exact_count);

struct TheoreticalBounds {
  double noiseless = 0.0;   // 2 + eta
  double with_noise = 0.0;  // 2 + eta + log_{1+eta/5}^3(D_max) / (eps * k_max)
};

TheoreticalBounds theoretical_bounds(NodeId max_degree, NodeId max_core, double eps,
                                     double eta);

/// Nearest-rank percentile (pct in (0, 100]): the value at 1-based index
/// ceil(pct/100 * N) of the sorted sample.
double nearest_rank_percentile(std::vector<double> values, double pct);

}  // namespace ledp
