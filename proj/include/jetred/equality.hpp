#pragma once

#include "jetred/chart.hpp"
#include "jetred/expr.hpp"

#include <cstdint>

namespace jetred {

struct EqOptions {
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  int points = 20;
  int max_attempts_per_point = 2000;
  double margin = 1e-3;  // keep denominators and radicands this far from 0
};

struct EqResult {
  bool equal = false;
  bool probabilistic = false;  // verdict came from numeric sampling
};

// Decides a == b as functions on the chart's valid region. Canonical
// normalization first; when radicals or transcendentals make the normal form
// inconclusive, falls back to randomized rational-point sampling (flagged
// probabilistic). Throws sampling_error if no admissible points exist.
EqResult equal_detailed(const Expr& a, const Expr& b, const BundleChart& chart,
                        const EqOptions& opts = {});

bool equal(const Expr& a, const Expr& b, const BundleChart& chart,
           const EqOptions& opts = {});

inline bool is_zero(const Expr& e, const BundleChart& chart,
                    const EqOptions& opts = {}) {
  return equal(e, Expr::zero(), chart, opts);
}

}  // namespace jetred
