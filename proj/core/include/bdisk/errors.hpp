#pragma once

#include <stdexcept>
#include <string>

namespace bdisk {

// Error taxonomy. Each class maps to one process exit code in the CLI:
//   InvalidParameter / InvalidStructure / InvalidSchema -> 2 (usage)
//   ResourceLimit                                       -> 3
//   NumericalFailure                                    -> 2
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside its documented domain (n < 2, delta <= 0, ...).
struct InvalidParameter : Error {
  using Error::Error;
};

// Input object violates a structural precondition, e.g. a contour that is
// not first-passage shaped, or a gaussian-mode path fed to the walk-only
// label sampler.
struct InvalidStructure : Error {
  using Error::Error;
};

// Gluing description does not resolve: unknown piece, arc outside the
// boundary, overlapping self-gluing arcs, arc length mismatch.
struct InvalidSchema : Error {
  using Error::Error;
};

// A guarded loop exceeded its step budget (e.g. stopped walk never hit 0).
struct ResourceLimit : Error {
  using Error::Error;
};

// Linear algebra broke down (non-PSD covariance after jitter, ...).
struct NumericalFailure : Error {
  using Error::Error;
};

}  // namespace bdisk
