#include <cmath>
#include <cstdint>
#include <vector>

#include "bdisk/errors.hpp"
#include "bdisk/rng.hpp"
#include "bdisk/stats.hpp"
#include "doctest.h"

using namespace bdisk;

TEST_CASE("moments and quantiles on tiny samples") {
  const std::vector<double> xs{1, 2, 3, 4};
  CHECK(mean(xs) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(sample_variance(xs) == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  CHECK(quantile(xs, 0.0) == 1.0);
  CHECK(quantile(xs, 1.0) == 4.0);
  CHECK(quantile(xs, 0.5) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(median({5.0, 1.0, 9.0}) == 5.0);
  CHECK(median({4.0, 1.0}) == doctest::Approx(2.5).epsilon(1e-12));

  CHECK_THROWS_AS(mean({}), InvalidParameter);
  CHECK_THROWS_AS(sample_variance({1.0}), InvalidParameter);
  CHECK_THROWS_AS(quantile({}, 0.5), InvalidParameter);
  CHECK_THROWS_AS(quantile({1.0}, 1.5), InvalidParameter);
}

TEST_CASE("ks statistic separates and accepts correctly") {
  std::vector<double> a, b, c;
  Rng rng(60, 0);
  for (int i = 0; i < 500; ++i) {
    a.push_back(rng.normal());
    b.push_back(rng.normal());
    c.push_back(rng.normal() + 10.0);
  }
  const KsResult same = ks_two_sample(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == doctest::Approx(1.0).epsilon(1e-6));

  const KsResult iid = ks_two_sample(a, b);
  CHECK(iid.p_value > 0.001);

  const KsResult far = ks_two_sample(a, c);
  CHECK(far.statistic == 1.0);
  CHECK(far.p_value < 1e-8);

  CHECK_THROWS_AS(ks_two_sample({}, {1.0}), InvalidParameter);
}

TEST_CASE("anderson-darling accepts normals and flags uniforms") {
  std::vector<double> normals, uniforms;
  Rng rng(61, 0);
  for (int i = 0; i < 1000; ++i) {
    normals.push_back(rng.normal());
    uniforms.push_back(10.0 * rng.uniform() - 5.0);
  }
  CHECK(anderson_darling_a2(normals) < 6.0);
  CHECK(anderson_darling_a2(uniforms) > 6.0);
  CHECK_THROWS_AS(anderson_darling_a2({1.0, 2.0}), InvalidParameter);
}

TEST_CASE("energy permutation test on paired rows") {
  Rng rng(62, 0);
  std::vector<double> a, b, shifted;
  for (int i = 0; i < 200; ++i) {  // 100 rows of dim 2
    a.push_back(rng.normal());
    b.push_back(rng.normal());
    shifted.push_back(rng.normal() + 3.0);
  }
  const double p_same = energy_distance_p_value(a, b, 2, 200, 7);
  CHECK(p_same > 0.01);
  const double p_far = energy_distance_p_value(a, shifted, 2, 200, 7);
  CHECK(p_far <= 0.01);
  CHECK_THROWS_AS(energy_distance_p_value({1.0, 2.0, 3.0}, {1.0, 2.0}, 2, 10, 1),
                  InvalidParameter);
}
