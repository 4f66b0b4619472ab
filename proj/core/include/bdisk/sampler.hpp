#pragma once

#include <cstdint>

#include "bdisk/path.hpp"

namespace bdisk {

inline constexpr std::uint64_t kDefaultMaxSteps = 100'000'000;

// Brownian motion from `start`, n values on a grid of spacing dt.
PathSample sample_bm(std::size_t n, double dt, double start, SeedRecord sr);

// Brownian bridge from 0 to 0 over [0, (n-1)*dt], multiplied by `scale`.
// Walk mode shuffles an equal number of up and down steps, so n-1 must be
// even there.
PathSample sample_bridge(std::size_t n, double dt, double scale, SeedRecord sr);

// Brownian motion from ell > 0 run until it first reaches 0.
// Gaussian mode stops at the first grid value <= 0 and clamps that value to
// exactly 0; walk mode snaps ell to the step lattice and hits 0 exactly.
// Throws ResourceLimit after max_steps steps without a hit.
PathSample sample_stopped_bm(double ell, double dt, SeedRecord sr,
                             std::uint64_t max_steps = kDefaultMaxSteps);

// Brownian motion from ell conditioned to first hit 0 at time a, on n grid
// values (dt = a/(n-1)). Endpoints are exact and the interior is strictly
// positive.
//
// Gaussian mode uses the time reversal of a three-dimensional Bessel bridge
// from 0 to ell, realized as the norm of three Brownian bridges plus a
// linear drift. Walk mode draws a uniform lattice bridge and selects a
// uniformly random rotation whose first passage lands at the final step;
// there ell is snapped to the step lattice and n is bumped by one when the
// step parity requires it, so read the realized start level and grid size
// from the result.
PathSample sample_first_passage_bridge(double ell, double a, std::size_t n, SeedRecord sr);

}  // namespace bdisk
