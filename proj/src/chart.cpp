#include "jetred/chart.hpp"

#include "jetred/errors.hpp"

#include <set>

namespace jetred {

BundleChart::BundleChart(std::vector<std::string> base,
                         std::vector<std::string> fiber, int cap)
    : base_names(std::move(base)), fiber_names(std::move(fiber)),
      order_cap(cap) {
  base_ranges.assign(base_names.size(), {-2.0, 2.0});
  validate();
}

std::optional<int> BundleChart::base_index(const std::string& name) const {
  for (std::size_t i = 0; i < base_names.size(); ++i)
    if (base_names[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> BundleChart::fiber_index(const std::string& name) const {
  for (std::size_t i = 0; i < fiber_names.size(); ++i)
    if (fiber_names[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::pair<double, double> BundleChart::range_of(const VarRef& v) const {
  if (v.is_base() && v.index < static_cast<int>(base_ranges.size()))
    return base_ranges[v.index];
  return jet_range;
}

std::string BundleChart::var_name(const VarRef& v) const {
  if (v.is_base()) return base_names.at(v.index);
  std::string s = fiber_names.at(v.index);
  if (!v.jet.empty()) {
    s += '_';
    for (int i : v.jet.indices()) s += base_names.at(i);
  }
  return s;
}

void BundleChart::validate() const {
  if (base_names.empty() || fiber_names.empty())
    throw validation_error("chart", "base and fiber dimensions must be >= 1");
  if (order_cap < 1)
    throw validation_error("chart", "order cap must be >= 1");
  std::set<std::string> seen;
  for (const auto& n : base_names)
    if (n.empty() || !seen.insert(n).second)
      throw validation_error("chart", "duplicate or empty base name '" + n + "'");
  for (const auto& n : fiber_names)
    if (n.empty() || !seen.insert(n).second)
      throw validation_error("chart",
                             "duplicate or empty fiber name '" + n + "'");
}

}  // namespace jetred
