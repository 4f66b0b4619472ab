#pragma once

#include <cstdint>
#include <vector>

#include "bdisk/encoding.hpp"
#include "bdisk/path.hpp"

namespace bdisk {

// Centered tree labels z0 plus an independent boundary bridge, combined as
//   z_i = z0_i + bridge[deepest_level(i)].
// z is constant on zero-distance classes because z0 is and the deepest
// hit level cannot change while the contour stays above a class value.
struct LabelField {
  std::vector<double> z0;
  std::vector<double> bridge;  // one value per boundary grid point
  std::vector<double> z;
};

// Exact covariance of the tree labels:
//   Cov(z0_s, z0_t) = min over [s, t] of (x_u - running_inf_u).
// Linear in the window size; meant for oracles and small n.
double label_covariance(const ForestCode& code, std::uint32_t s, std::uint32_t t);

// O(n) stack sampler. Walk contours only: each rise pushes a fresh
// N(0, sqrt(dt)) increment onto the current branch, each fall pops it, and
// the label at the running infimum is pinned to 0. Class constancy is exact
// because revisited tree points read back the stored stack entry.
std::vector<double> sample_labels_snake(const ForestCode& code, SeedRecord sr);

// Dense Gaussian sampler from the covariance above, for cross-checking the
// snake. Adds 1e-12 jitter on the diagonal, then restores exact class
// constancy by averaging within classes (first-passage classes go to
// exactly 0). Capped at n = 2048.
std::vector<double> sample_labels_cholesky(const ForestCode& code, SeedRecord sr);

inline constexpr std::size_t kCholeskyMaxN = 2048;

// Pins z0 to the boundary bridge. The bridge must carry exactly one value
// per boundary grid point of `code`, with zero endpoints.
LabelField assemble_labels(const ForestCode& code, std::vector<double> z0,
                           const PathSample& bridge);

}  // namespace bdisk
