#include "bdisk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bdisk/errors.hpp"
#include "bdisk/rng.hpp"

namespace bdisk {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw InvalidParameter("mean: empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) throw InvalidParameter("sample_variance: need at least two values");
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / static_cast<double>(xs.size() - 1);
}

double quantile(std::vector<double> xs, double p) {
  if (xs.empty()) throw InvalidParameter("quantile: empty sample");
  if (p < 0.0 || p > 1.0) throw InvalidParameter("quantile: p outside [0,1]");
  std::sort(xs.begin(), xs.end());
  const double pos = p * static_cast<double>(xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= xs.size()) return xs.back();
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

namespace {

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda) {
  if (lambda < 1e-10) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidParameter("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  return {d, kolmogorov_q(lambda)};
}

double anderson_darling_a2(std::vector<double> xs) {
  const std::size_t n = xs.size();
  if (n < 8) throw InvalidParameter("anderson_darling_a2: sample too small");
  std::sort(xs.begin(), xs.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Phi via erfc keeps the tails accurate.
    const double lo = 0.5 * std::erfc(-xs[i] / std::sqrt(2.0));
    const double hi = 0.5 * std::erfc(xs[n - 1 - i] / std::sqrt(2.0));
    const double li = std::log(std::max(lo, 1e-300));
    const double lh = std::log(std::max(hi, 1e-300));
    acc += (2.0 * static_cast<double>(i) + 1.0) * (li + lh);
  }
  return -static_cast<double>(n) - acc / static_cast<double>(n);
}

namespace {

double row_distance(const double* x, const double* y, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double d = x[k] - y[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

// Energy statistic for a split of the pooled distance matrix.
double energy_statistic(const std::vector<double>& dist, const std::vector<std::size_t>& idx,
                        std::size_t total, std::size_t na) {
  const std::size_t nb = total - na;
  double within_a = 0.0, within_b = 0.0, between = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) {
      const double d = dist[idx[i] * total + idx[j]];
      if (i < na && j < na)
        within_a += d;
      else if (i >= na && j >= na)
        within_b += d;
      else
        between += d;
    }
  }
  const double ea = static_cast<double>(na);
  const double eb = static_cast<double>(nb);
  return 2.0 * between / (ea * eb) - 2.0 * within_a / (ea * ea) - 2.0 * within_b / (eb * eb);
}

}  // namespace

double energy_distance_p_value(const std::vector<double>& a, const std::vector<double>& b,
                               std::size_t dim, int permutations, std::uint64_t seed) {
  if (dim == 0 || a.size() % dim != 0 || b.size() % dim != 0)
    throw InvalidParameter("energy_distance_p_value: rows do not divide by dim");
  const std::size_t na = a.size() / dim;
  const std::size_t nb = b.size() / dim;
  const std::size_t total = na + nb;
  if (na == 0 || nb == 0) throw InvalidParameter("energy_distance_p_value: empty sample");

  std::vector<const double*> rows(total);
  for (std::size_t i = 0; i < na; ++i) rows[i] = a.data() + i * dim;
  for (std::size_t j = 0; j < nb; ++j) rows[na + j] = b.data() + j * dim;

  std::vector<double> dist(total * total, 0.0);
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = i + 1; j < total; ++j)
      dist[i * total + j] = dist[j * total + i] = row_distance(rows[i], rows[j], dim);

  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const double observed = energy_statistic(dist, idx, total, na);

  Rng rng(seed, stream_id(0x7e57u, 0));
  int at_least = 0;
  for (int p = 0; p < permutations; ++p) {
    for (std::size_t i = total - 1; i > 0; --i)
      std::swap(idx[i], idx[rng.uniform_below(i + 1)]);
    if (energy_statistic(dist, idx, total, na) >= observed) ++at_least;
  }
  return (at_least + 1.0) / (permutations + 1.0);
}

}  // namespace bdisk
