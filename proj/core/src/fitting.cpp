#include "bdisk/fitting.hpp"

#include <cmath>

#include "bdisk/errors.hpp"

namespace bdisk {

ExponentFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw InvalidParameter("fit inputs differ in length");
  if (n < 3) throw InvalidParameter("fit needs at least three points");
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidParameter("fit abscissae are all equal");
  ExponentFit out;
  out.points = n;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    rss += r * r;
  }
  out.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  out.slope_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return out;
}

ExponentFit fit_exponent(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw InvalidParameter("fit inputs differ in length");
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw InvalidParameter("log-log fit needs positive coordinates");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

ExponentFit pooled_exponent_fit(const std::vector<std::vector<std::array<double, 2>>>& groups) {
  struct LogGroup {
    std::vector<double> lx, ly;
    double mx = 0.0, my = 0.0;
  };
  std::vector<LogGroup> logs;
  std::size_t total = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) continue;
    LogGroup lg;
    for (const auto& [x, y] : g) {
      if (!(x > 0.0) || !(y > 0.0))
        throw InvalidParameter("log-log fit needs positive coordinates");
      lg.lx.push_back(std::log(x));
      lg.ly.push_back(std::log(y));
      lg.mx += lg.lx.back();
      lg.my += lg.ly.back();
    }
    lg.mx /= static_cast<double>(lg.lx.size());
    lg.my /= static_cast<double>(lg.ly.size());
    total += lg.lx.size();
    logs.push_back(std::move(lg));
  }
  if (logs.empty() || total < logs.size() + 2)
    throw InvalidParameter("pooled fit needs more points");

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& lg : logs)
    for (std::size_t i = 0; i < lg.lx.size(); ++i) {
      sxx += (lg.lx[i] - lg.mx) * (lg.lx[i] - lg.mx);
      sxy += (lg.lx[i] - lg.mx) * (lg.ly[i] - lg.my);
      syy += (lg.ly[i] - lg.my) * (lg.ly[i] - lg.my);
    }
  if (!(sxx > 0.0)) throw InvalidParameter("pooled fit abscissae are all equal");

  ExponentFit out;
  out.points = total;
  out.slope = sxy / sxx;
  out.intercept = 0.0;  // group intercepts absorbed
  double rss = 0.0;
  for (const auto& lg : logs)
    for (std::size_t i = 0; i < lg.lx.size(); ++i) {
      const double r = (lg.ly[i] - lg.my) - out.slope * (lg.lx[i] - lg.mx);
      rss += r * r;
    }
  out.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  out.slope_se =
      std::sqrt(rss / static_cast<double>(total - logs.size() - 1) / sxx);
  return out;
}

double poisson_tail_bound(double lambda, double x) {
  if (!(lambda > 0.0) || !(x > lambda))
    throw InvalidParameter("tail bound needs x > lambda > 0");
  return std::exp(-lambda + x + x * (std::log(lambda) - std::log(x)));
}

}  // namespace bdisk
