#include "ledp/metrics.hpp"

#include <cmath>

#include "doctest.h"

using namespace ledp;

TEST_CASE("node approximation factor") {
  CHECK(node_approx_factor(6.0, 3.0) == doctest::Approx(2.0));
  CHECK(node_approx_factor(3.0, 6.0) == doctest::Approx(2.0));
  CHECK(node_approx_factor(4.0, 4.0) == doctest::Approx(1.0));
  // Estimates below one are clamped for the metric.
  CHECK(node_approx_factor(0.25, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("triangle metrics") {
  auto m = triangle_metrics(90.0, 100.0);
  CHECK(m.relative_error == doctest::Approx(0.1));
  CHECK(m.multiplicative_factor == doctest::Approx(100.0 / 90.0));

  auto neg = triangle_metrics(-5.0, 100.0);
  CHECK(neg.relative_error == doctest::Approx(1.05));
  CHECK(neg.multiplicative_factor == doctest::Approx(100.0));

  auto eq = triangle_metrics(100.0, 100.0);
  CHECK(eq.relative_error == doctest::Approx(0.0));
  CHECK(eq.multiplicative_factor == doctest::Approx(1.0));
}

TEST_CASE("theoretical bound lines") {
  auto any = theoretical_bounds(50, 5, 1.0, 3.625);
  CHECK(any.noiseless == doctest::Approx(5.625));

  // D_max = 1065, k_max = 35: log_1.725(1065) ~ 12.785, cubed / 35 ~ 59.708.
  auto wiki = theoretical_bounds(1065, 35, 1.0, 3.625);
  CHECK(wiki.with_noise == doctest::Approx(65.3333).epsilon(1e-4));

  auto half = theoretical_bounds(1065, 35, 2.0, 3.625);
  CHECK(half.with_noise - 5.625 == doctest::Approx((wiki.with_noise - 5.625) / 2.0));
}

TEST_CASE("nearest-rank percentiles") {
  std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(nearest_rank_percentile(v, 80.0) == 8.0);
  CHECK(nearest_rank_percentile(v, 95.0) == 10.0);
  CHECK(nearest_rank_percentile(v, 100.0) == 10.0);
  CHECK(nearest_rank_percentile(v, 10.0) == 1.0);
  CHECK(nearest_rank_percentile({42.0}, 50.0) == 42.0);
  CHECK_THROWS_AS(nearest_rank_percentile({}, 50.0), std::invalid_argument);
}
