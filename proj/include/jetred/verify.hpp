#pragma once

#include "jetred/problem.hpp"

#include <string>
#include <vector>

namespace jetred {

struct CheckLine {
  std::string name;
  bool pass = false;
  bool applicable = true;  // false: skipped (problem lacks the structures)
  std::string detail;
  double seconds = 0;
};

// Randomized and named verification suites over a loaded problem.
//   what in {"dh2", "e-dh", "l2-skew", "jacobiator", "cochain",
//            "el-commute", "covariance", "well-defined", "all"}.
// Suites that need structures the problem does not declare come back with
// applicable = false. Deterministic for a fixed seed.
std::vector<CheckLine> run_verifications(const Problem& p,
                                         const std::string& what, int cases,
                                         std::uint64_t seed);

}  // namespace jetred
