#pragma once

#include "jetred/expr.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jetred {

// A local chart of the jet bundle: base and fiber coordinate names plus the
// order cap that bounds every jet variable appearing in expressions.
struct BundleChart {
  std::vector<std::string> base_names;
  std::vector<std::string> fiber_names;
  int order_cap = 6;
  // Sampling box for the randomized equality oracle and validation checks;
  // one interval per base variable. Jet variables sample from jet_range.
  std::vector<std::pair<double, double>> base_ranges;
  std::pair<double, double> jet_range{-2.0, 2.0};

  BundleChart() = default;
  BundleChart(std::vector<std::string> base, std::vector<std::string> fiber,
              int cap = 6);

  int base_dim() const { return static_cast<int>(base_names.size()); }
  int fiber_dim() const { return static_cast<int>(fiber_names.size()); }

  std::optional<int> base_index(const std::string& name) const;
  std::optional<int> fiber_index(const std::string& name) const;

  std::pair<double, double> range_of(const VarRef& v) const;

  // Rendering of a variable in the expression grammar, e.g. "u1_xy".
  std::string var_name(const VarRef& v) const;

  void validate() const;  // unique names, positive dims
};

}  // namespace jetred
