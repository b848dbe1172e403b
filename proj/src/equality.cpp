#include "jetred/equality.hpp"

#include "jetred/errors.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace jetred {

namespace {

// Subexpressions that must stay away from zero (denominators) or stay
// positive (radicands of fractional powers) at a sample point.
struct Guard {
  Expr expr;
  bool positive_required;
};

void collect_guards(const Expr& e, std::vector<Guard>& out) {
  switch (e.kind()) {
    case NodeKind::rational:
    case NodeKind::var:
      return;
    case NodeKind::power: {
      if (e.exponent() < 0) out.push_back({e.base(), false});
      if (!is_integer(e.exponent())) out.push_back({e.base(), true});
      collect_guards(e.base(), out);
      return;
    }
    default:
      for (const Expr& k : e.children()) collect_guards(k, out);
  }
}

}  // namespace

EqResult equal_detailed(const Expr& a, const Expr& b, const BundleChart& chart,
                        const EqOptions& opts) {
  Expr diff = a - b;
  if (diff.is_zero()) return {true, false};
  Expr cleared = clear_denominators(diff);
  if (cleared.is_zero()) return {true, false};
  if (!has_opaque_power(cleared)) return {false, false};

  // Numeric fallback: sample random rational points on the valid region.
  std::set<VarRef> vars;
  collect_vars(a, vars);
  collect_vars(b, vars);
  std::vector<Guard> guards;
  collect_guards(a, guards);
  collect_guards(b, guards);
  collect_guards(diff, guards);

  std::mt19937_64 rng(opts.seed);
  constexpr std::int64_t denom = 1024;
  auto draw = [&rng](double lo, double hi) {
    auto nlo = static_cast<std::int64_t>(std::ceil(lo * denom));
    auto nhi = static_cast<std::int64_t>(std::floor(hi * denom));
    if (nhi < nlo) nhi = nlo;
    std::uint64_t span = static_cast<std::uint64_t>(nhi - nlo) + 1;
    std::int64_t n = nlo + static_cast<std::int64_t>(rng() % span);
    return static_cast<double>(n) / static_cast<double>(denom);
  };

  int accepted = 0;
  bool all_small = true;
  for (int attempt = 0;
       accepted < opts.points &&
       attempt < opts.points * opts.max_attempts_per_point;
       ++attempt) {
    std::map<VarRef, double> point;
    for (const VarRef& v : vars) {
      auto [lo, hi] = chart.range_of(v);
      point[v] = draw(lo, hi);
    }
    bool ok = true;
    try {
      for (const Guard& g : guards) {
        double gv = evaluate(g.expr, point);
        if (std::abs(gv) < opts.margin || (g.positive_required && gv < opts.margin)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      double va = evaluate(a, point);
      double vb = evaluate(b, point);
      double vd = va - vb;
      double scale = std::max({1.0, std::abs(va), std::abs(vb)});
      ++accepted;
      if (std::abs(vd) > opts.tolerance * scale) {
        all_small = false;
        break;
      }
    } catch (const eval_error&) {
      continue;
    }
  }
  if (accepted == 0)
    throw sampling_error("no admissible sample points for numeric equality");
  if (!all_small) return {false, true};
  if (accepted < opts.points)
    throw sampling_error("too few admissible sample points (" +
                         std::to_string(accepted) + " of " +
                         std::to_string(opts.points) + ")");
  return {true, true};
}

bool equal(const Expr& a, const Expr& b, const BundleChart& chart,
           const EqOptions& opts) {
  return equal_detailed(a, b, chart, opts).equal;
}

}  // namespace jetred
