#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bdisk/errors.hpp"
#include "bdisk/fitting.hpp"
#include "bdisk/rng.hpp"
#include "doctest.h"

using namespace bdisk;

TEST_CASE("log-log fit recovers an exact power law") {
  std::vector<double> x, y;
  for (int k = 0; k < 8; ++k) {
    const double xv = std::ldexp(1.0, -k);
    x.push_back(xv);
    y.push_back(3.0 * std::pow(xv, 2.5));
  }
  const ExponentFit fit = fit_exponent(x, y);
  CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));
  CHECK(fit.slope_se == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.points == 8);
}

TEST_CASE("plain line fit recovers slope and intercept") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(-2.0 * v + 7.0);
  const ExponentFit fit = fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("noisy quartic growth fits inside a tight band") {
  // synthetic check of the estimator itself: volumes ~ delta^4 with 5%
  // multiplicative noise must read back as slope 4 within 0.1
  Rng rng(55, 0);
  std::vector<double> x, y;
  for (int k = 0; k < 10; ++k) {
    const double d = std::pow(2.0, -0.5 * k);
    x.push_back(d);
    y.push_back(std::pow(d, 4.0) * std::exp(0.05 * rng.normal()));
  }
  const ExponentFit fit = fit_exponent(x, y);
  CHECK(fit.slope > 3.9);
  CHECK(fit.slope < 4.1);
  CHECK(fit.slope_se < 0.1);
}

TEST_CASE("pooled fit shares the slope across instance constants") {
  std::vector<std::vector<std::array<double, 2>>> groups(3);
  const double c[3] = {0.5, 2.0, 11.0};
  for (int g = 0; g < 3; ++g)
    for (int k = 0; k < 6; ++k) {
      const double xv = std::pow(2.0, -k);
      groups[g].push_back({xv, c[g] * std::pow(xv, 1.7)});
    }
  const ExponentFit fit = pooled_exponent_fit(groups);
  CHECK(fit.slope == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(fit.points == 18);

  // singleton groups carry no slope information and are ignored
  groups.push_back({{1.0, 42.0}});
  const ExponentFit again = pooled_exponent_fit(groups);
  CHECK(again.slope == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(again.points == 18);
}

TEST_CASE("fits reject degenerate inputs") {
  const std::vector<double> two{1.0, 2.0};
  const std::vector<double> three{1.0, 2.0, 3.0};
  const std::vector<double> bad{1.0, -2.0, 3.0};
  CHECK_THROWS_AS(fit_exponent(two, two), InvalidParameter);
  CHECK_THROWS_AS(fit_exponent(three, two), InvalidParameter);
  CHECK_THROWS_AS(fit_exponent(three, bad), InvalidParameter);
  CHECK_THROWS_AS(fit_exponent(bad, three), InvalidParameter);
  const std::vector<double> flat{2.0, 2.0, 2.0};
  CHECK_THROWS_AS(fit_exponent(flat, three), InvalidParameter);
  CHECK_THROWS_AS(pooled_exponent_fit({}), InvalidParameter);
  CHECK_THROWS_AS(pooled_exponent_fit({{{1.0, 1.0}}, {{2.0, 4.0}}}), InvalidParameter);
}

TEST_CASE("poisson tail bound closed form and domination") {
  // e^{-1} (e * 1)^2 / 2^2 = e / 4
  CHECK(poisson_tail_bound(1.0, 2.0) ==
        doctest::Approx(std::exp(1.0) / 4.0).epsilon(1e-12));
  CHECK_THROWS_AS(poisson_tail_bound(2.0, 2.0), InvalidParameter);
  CHECK_THROWS_AS(poisson_tail_bound(2.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(poisson_tail_bound(0.0, 1.0), InvalidParameter);

  // empirical Poisson(2) tails stay below the bound
  Rng rng(56, 0);
  const double lambda = 2.0;
  const int reps = 200000;
  int ge3 = 0, ge4 = 0, ge6 = 0;
  for (int r = 0; r < reps; ++r) {
    // Knuth multiplication method
    int k = 0;
    double p = 1.0;
    const double floor_p = std::exp(-lambda);
    do {
      ++k;
      p *= rng.uniform();
    } while (p > floor_p);
    const int n = k - 1;
    ge3 += n >= 3;
    ge4 += n >= 4;
    ge6 += n >= 6;
  }
  CHECK(static_cast<double>(ge3) / reps <= poisson_tail_bound(lambda, 3.0));
  CHECK(static_cast<double>(ge4) / reps <= poisson_tail_bound(lambda, 4.0));
  CHECK(static_cast<double>(ge6) / reps <= poisson_tail_bound(lambda, 6.0));
}
