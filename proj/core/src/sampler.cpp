#include "bdisk/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "bdisk/errors.hpp"
#include "bdisk/rng.hpp"

namespace bdisk {
namespace {

void check_grid(std::size_t n, double dt) {
  if (n < 2) throw InvalidParameter("path grid needs at least two values");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be positive");
}

std::int64_t snap_level(double ell, double step) {
  const auto lvl = static_cast<std::int64_t>(std::llround(ell / step));
  if (lvl < 1) throw InvalidParameter("start level below one walk step; refine dt");
  return lvl;
}

}  // namespace

PathSample sample_bm(std::size_t n, double dt, double start, SeedRecord sr) {
  check_grid(n, dt);
  if (!std::isfinite(start)) throw InvalidParameter("start must be finite");
  PathSample out;
  out.values.resize(n);
  out.dt = dt;
  out.kind = PathKind::bm;
  out.seed_record = sr;
  Rng rng(sr.seed, sr.stream);
  if (sr.mode == StepMode::walk) {
    const double step = std::sqrt(dt);
    std::int64_t k = 0;
    out.values[0] = start;
    for (std::size_t i = 1; i < n; ++i) {
      k += rng.bit() ? 1 : -1;
      out.values[i] = start + static_cast<double>(k) * step;
    }
  } else {
    const double sd = std::sqrt(dt);
    double x = start;
    out.values[0] = x;
    for (std::size_t i = 1; i < n; ++i) {
      x += sd * rng.normal();
      out.values[i] = x;
    }
  }
  return out;
}

PathSample sample_bridge(std::size_t n, double dt, double scale, SeedRecord sr) {
  check_grid(n, dt);
  if (!(scale > 0.0)) throw InvalidParameter("bridge scale must be positive");
  PathSample out;
  out.values.resize(n);
  out.dt = dt;
  out.kind = PathKind::bridge;
  out.seed_record = sr;
  Rng rng(sr.seed, sr.stream);
  const std::size_t steps = n - 1;
  if (sr.mode == StepMode::walk) {
    if (steps % 2 != 0) throw InvalidParameter("walk bridge needs an even step count");
    // Equal numbers of up and down steps in uniformly random order.
    std::vector<std::int8_t> s(steps);
    for (std::size_t i = 0; i < steps; ++i) s[i] = (i < steps / 2) ? 1 : -1;
    for (std::size_t i = steps - 1; i > 0; --i)
      std::swap(s[i], s[rng.uniform_below(i + 1)]);
    const double step = scale * std::sqrt(dt);
    std::int64_t k = 0;
    out.values[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      k += s[i - 1];
      out.values[i] = static_cast<double>(k) * step;
    }
  } else {
    const double sd = std::sqrt(dt);
    double x = 0.0;
    out.values[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      x += sd * rng.normal();
      out.values[i] = x;
    }
    const double last = out.values[n - 1];
    const double denom = static_cast<double>(steps);
    for (std::size_t i = 0; i < n; ++i) {
      const double frac = static_cast<double>(i) / denom;
      out.values[i] = scale * (out.values[i] - frac * last);
    }
  }
  return out;
}

PathSample sample_stopped_bm(double ell, double dt, SeedRecord sr, std::uint64_t max_steps) {
  if (!(ell > 0.0)) throw InvalidParameter("ell must be positive");
  if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
  PathSample out;
  out.dt = dt;
  out.kind = PathKind::stopped_bm;
  out.seed_record = sr;
  Rng rng(sr.seed, sr.stream);
  if (sr.mode == StepMode::walk) {
    const double step = std::sqrt(dt);
    std::int64_t k = snap_level(ell, step);
    out.values.push_back(static_cast<double>(k) * step);
    std::uint64_t taken = 0;
    while (k > 0) {
      if (taken++ >= max_steps)
        throw ResourceLimit("stopped walk exceeded " + std::to_string(max_steps) + " steps");
      k += rng.bit() ? 1 : -1;
      out.values.push_back(static_cast<double>(k) * step);
    }
  } else {
    const double sd = std::sqrt(dt);
    double x = ell;
    out.values.push_back(x);
    std::uint64_t taken = 0;
    for (;;) {
      if (taken++ >= max_steps)
        throw ResourceLimit("stopped path exceeded " + std::to_string(max_steps) + " steps");
      x += sd * rng.normal();
      if (x <= 0.0) {
        out.values.push_back(0.0);
        break;
      }
      out.values.push_back(x);
    }
  }
  return out;
}

namespace {

PathSample fpb_gaussian(double ell, double a, std::size_t n, SeedRecord sr) {
  const std::size_t steps = n - 1;
  const double dt = a / static_cast<double>(steps);
  Rng rng(sr.seed, sr.stream);
  const double sd = std::sqrt(dt);

  // Three independent bridges; the first carries the drift to ell.
  std::vector<double> b[3];
  for (auto& v : b) {
    v.resize(n);
    double x = 0.0;
    v[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      x += sd * rng.normal();
      v[i] = x;
    }
    const double last = v[n - 1];
    for (std::size_t i = 0; i < n; ++i)
      v[i] -= (static_cast<double>(i) / static_cast<double>(steps)) * last;
  }

  PathSample out;
  out.values.resize(n);
  out.dt = dt;
  out.kind = PathKind::first_passage_bridge;
  out.seed_record = sr;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = steps - i;  // time reversal
    const double drift = ell * static_cast<double>(j) / static_cast<double>(steps);
    const double w0 = b[0][j] + drift;
    const double r = std::sqrt(w0 * w0 + b[1][j] * b[1][j] + b[2][j] * b[2][j]);
    out.values[i] = r;
  }
  out.values[0] = ell;
  out.values[n - 1] = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (!(out.values[i] > 0.0))
      throw NumericalFailure("interior of first-passage bridge not positive");
  return out;
}

PathSample fpb_walk(double ell, double a, std::size_t n, SeedRecord sr) {
  // Snap the start level to the lattice, then fix the step-count parity.
  std::size_t steps = n - 1;
  double dt = a / static_cast<double>(steps);
  auto level = snap_level(ell, std::sqrt(dt));
  if ((static_cast<std::int64_t>(steps) - level) % 2 != 0) {
    steps += 1;
    dt = a / static_cast<double>(steps);
    level = snap_level(ell, std::sqrt(dt));
    if ((static_cast<std::int64_t>(steps) - level) % 2 != 0)
      throw InvalidParameter("no walk lattice matches (ell, a, n); adjust n");
  }
  const auto N = static_cast<std::size_t>(steps);
  const auto L = static_cast<std::size_t>(level);
  if (N < L) throw InvalidParameter("grid too coarse: fewer steps than lattice levels");

  Rng rng(sr.seed, sr.stream);
  // Uniform arrangement of (N-L)/2 up steps and (N+L)/2 down steps.
  std::vector<std::int8_t> s(N);
  const std::size_t ups = (N - L) / 2;
  for (std::size_t i = 0; i < N; ++i) s[i] = (i < ups) ? 1 : -1;
  for (std::size_t i = N - 1; i > 0; --i)
    std::swap(s[i], s[rng.uniform_below(i + 1)]);

  std::vector<std::int64_t> prefix(N + 1, 0);
  for (std::size_t i = 0; i < N; ++i) prefix[i + 1] = prefix[i] + s[i];

  // A rotation by k yields a path whose first passage to -L happens at the
  // final step iff prefix[k] is a strict running minimum and the suffix
  // prefix[k+1 .. N-1] stays above prefix[k] - L. The cycle lemma gives
  // exactly L such rotations.
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> smin(N + 1, kInf);  // smin[m] = min prefix[m .. N-1]
  for (std::size_t m = N; m-- > 0;)
    smin[m] = std::min(prefix[m], m + 1 < N ? smin[m + 1] : kInf);

  std::vector<std::size_t> good;
  good.reserve(L);
  std::int64_t run_min = kInf;
  for (std::size_t k = 0; k < N; ++k) {
    const bool new_min = (k == 0) || (prefix[k] < run_min);
    run_min = (k == 0) ? prefix[0] : std::min(run_min, prefix[k]);
    if (!new_min) continue;
    const std::int64_t tail_min = (k + 1 < N) ? smin[k + 1] : kInf;
    if (tail_min > prefix[k] - static_cast<std::int64_t>(L)) good.push_back(k);
  }
  if (good.size() != L) throw NumericalFailure("rotation count disagrees with the cycle lemma");

  const std::size_t k = good[rng.uniform_below(L)];
  PathSample out;
  out.values.resize(N + 1);
  out.dt = dt;
  out.kind = PathKind::first_passage_bridge;
  out.seed_record = sr;
  const double step = std::sqrt(dt);
  std::int64_t q = 0;
  out.values[0] = static_cast<double>(level) * step;
  for (std::size_t j = 1; j <= N; ++j) {
    q += s[(k + j - 1) % N];
    out.values[j] = static_cast<double>(level + q) * step;
  }
  return out;
}

}  // namespace

PathSample sample_first_passage_bridge(double ell, double a, std::size_t n, SeedRecord sr) {
  if (!(ell > 0.0)) throw InvalidParameter("ell must be positive");
  if (!(a > 0.0)) throw InvalidParameter("duration must be positive");
  check_grid(n, a / static_cast<double>(n - 1));
  return sr.mode == StepMode::walk ? fpb_walk(ell, a, n, sr) : fpb_gaussian(ell, a, n, sr);
}

}  // namespace bdisk
