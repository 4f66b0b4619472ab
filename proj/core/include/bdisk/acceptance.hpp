#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bdisk {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20260814;
  std::size_t workers = 1;
  std::ostream* log = nullptr;  // one line per criterion, as they finish
};

// The full pass/fail battery, heaviest ensembles last. Tolerances live in
// the implementation, not in any config, so a green run means the same
// thing everywhere.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

std::string format_criterion(const CriterionResult& r);

}  // namespace bdisk
