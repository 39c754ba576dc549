#pragma once

#include "siegel/igusa.hpp"

#include <string>
#include <vector>

namespace siegel {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// Fast self-checks of the library invariants: coset lists, generator
/// restrictions, truncation table, evaluation paths, quotient lemma and
/// the eigenform catalog.
std::vector<CheckResult> run_invariant_suite(GeneratorCache& cache, int threads);

}  // namespace siegel
