#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bdisk {

double mean(const std::vector<double>& xs);

// Unbiased sample variance; requires at least two values.
double sample_variance(const std::vector<double>& xs);

// p-th sample quantile (linear interpolation), p in [0,1]. Copies and sorts.
double quantile(std::vector<double> xs, double p);

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value
// (Kolmogorov distribution with the usual small-sample correction).
struct KsResult {
  double statistic;
  double p_value;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Anderson-Darling A^2 against a fully specified standard normal.
// Critical value at the 0.001 level for the fully specified case is about
// 6.0, so "A^2 < 6.0" is the p > 0.001 assertion.
double anderson_darling_a2(std::vector<double> xs);

// Two-sample energy statistic with a permutation p-value. Samples are rows
// of length dim packed contiguously. Permutation count controls resolution
// of the p-value (smallest reportable value is 1/(permutations+1)).
double energy_distance_p_value(const std::vector<double>& a, const std::vector<double>& b,
                               std::size_t dim, int permutations, std::uint64_t seed);

}  // namespace bdisk
