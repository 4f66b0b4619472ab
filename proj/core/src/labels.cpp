#include "bdisk/labels.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "bdisk/errors.hpp"
#include "bdisk/rng.hpp"

namespace bdisk {

double label_covariance(const ForestCode& code, std::uint32_t s, std::uint32_t t) {
  if (s > t) std::swap(s, t);
  if (t >= code.size()) throw InvalidParameter("label_covariance: index out of range");
  double m = code.value(s) - code.running_inf(s);
  for (std::uint32_t u = s + 1; u <= t; ++u)
    m = std::min(m, code.value(u) - code.running_inf(u));
  return m;
}

std::vector<double> sample_labels_snake(const ForestCode& code, SeedRecord sr) {
  const PathSample& x = code.contour();
  if (x.seed_record.mode != StepMode::walk)
    throw InvalidStructure("snake sampler requires a walk-mode contour");
  const std::size_t n = x.values.size();
  Rng rng(sr.seed, sr.stream);
  const double inc_sd = std::pow(x.dt, 0.25);  // variance sqrt(dt) per lattice rise

  std::vector<double> z0(n);
  std::vector<double> branch{0.0};  // labels along the current branch, floor first
  z0[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    if (x.values[i] > x.values[i - 1]) {
      branch.push_back(branch.back() + inc_sd * rng.normal());
      z0[i] = branch.back();
    } else {
      if (branch.size() > 1) branch.pop_back();
      // At the floor the branch never empties; a new running infimum keeps
      // the pinned 0.
      z0[i] = branch.back();
    }
  }
  return z0;
}

std::vector<double> sample_labels_cholesky(const ForestCode& code, SeedRecord sr) {
  const std::size_t n = code.size();
  if (n > kCholeskyMaxN)
    throw InvalidParameter("cholesky sampler capped at n = 2048; use the snake");

  Eigen::MatrixXd cov(n, n);
  for (std::size_t s = 0; s < n; ++s) {
    double m = code.value(s) - code.running_inf(s);
    cov(s, s) = m;
    for (std::size_t t = s + 1; t < n; ++t) {
      m = std::min(m, code.value(t) - code.running_inf(t));
      cov(s, t) = cov(t, s) = m;
    }
  }
  cov.diagonal().array() += 1e-12;

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("label covariance not positive definite after jitter");

  Rng rng(sr.seed, sr.stream);
  Eigen::VectorXd xi(n);
  for (std::size_t i = 0; i < n; ++i) xi(i) = rng.normal();
  Eigen::VectorXd raw = llt.matrixL() * xi;

  // Restore exact class constancy: average within classes, pin classes
  // sitting on the running infimum (zero variance) to exactly 0.
  std::vector<double> z0(n);
  for (std::uint32_t c = 0; c < code.class_count(); ++c) {
    const auto members = code.class_members(c);
    const std::uint32_t head = members.front();
    if (code.value(head) - code.running_inf(head) == 0.0) {
      for (auto i : members) z0[i] = 0.0;
      continue;
    }
    double sum = 0.0;
    for (auto i : members) sum += raw(i);
    const double avg = sum / static_cast<double>(members.size());
    for (auto i : members) z0[i] = avg;
  }
  return z0;
}

LabelField assemble_labels(const ForestCode& code, std::vector<double> z0,
                           const PathSample& bridge) {
  const std::size_t n = code.size();
  if (z0.size() != n) throw InvalidStructure("z0 length does not match the contour");
  if (bridge.values.size() != code.boundary_points())
    throw InvalidStructure("bridge length does not match the boundary grid");
  if (bridge.values.front() != 0.0 || bridge.values.back() != 0.0)
    throw InvalidStructure("bridge endpoints must be exactly 0");

  LabelField out;
  out.bridge = bridge.values;
  out.z.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.z[i] = z0[i] + out.bridge[code.deepest_level(static_cast<std::uint32_t>(i))];
  out.z0 = std::move(z0);
  return out;
}

}  // namespace bdisk
