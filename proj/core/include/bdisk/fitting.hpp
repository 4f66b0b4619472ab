#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace bdisk {

// Least-squares line through (log x, log y). Points with a nonpositive
// coordinate are an error; fewer than three points are an error.
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;    // of the log-log line, so prefactor = exp(intercept)
  double slope_se = 0.0;     // standard error of the slope
  double r_squared = 1.0;
  std::size_t points = 0;
};

ExponentFit fit_exponent(std::span<const double> x, std::span<const double> y);

// Plain least-squares line through (x, y), no log transform.
ExponentFit fit_line(std::span<const double> x, std::span<const double> y);

// Common slope across groups of (scale, value) pairs, one intercept per
// group. The scaling laws hold per instance with an instance constant, so
// groups are demeaned in log space before the slope is pooled. Groups with
// fewer than two points are ignored.
ExponentFit pooled_exponent_fit(const std::vector<std::vector<std::array<double, 2>>>& groups);

// Chernoff bound P[N >= x] <= e^{-lambda} (e lambda)^x x^{-x} for a Poisson
// count N with mean lambda, valid for x > lambda.
double poisson_tail_bound(double lambda, double x);

}  // namespace bdisk
