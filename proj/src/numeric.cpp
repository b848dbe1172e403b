#include "jetred/numeric.hpp"

#include "jetred/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace jetred {

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton iteration on P_n with the three-term recurrence; roots seeded by
  // the Chebyshev approximation.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

Expr pullback_section(const Expr& P, const SectionSpec& s,
                      const BundleChart& chart) {
  if (static_cast<int>(s.components.size()) != chart.fiber_dim())
    throw validation_error("section", "component count mismatch");
  std::map<VarRef, Expr> binding;
  for (const VarRef& v : variables(P)) {
    if (!v.is_jet()) continue;
    Expr d = s.components[v.index];
    for (int i : v.jet.indices()) d = partial(d, VarRef::base_var(i));
    binding[v] = std::move(d);
  }
  return substitute(P, binding);
}

namespace {

// Flat evaluation tape; quadrature evaluates the same expression at ~1e6
// points, so the tree walk is compiled once.
class Tape {
 public:
  Tape(const Expr& e, const std::vector<VarRef>& vars) {
    std::map<VarRef, int> slot;
    for (std::size_t i = 0; i < vars.size(); ++i)
      slot[vars[i]] = static_cast<int>(i);
    compile(e, slot);
  }

  double eval(const std::vector<double>& values) const {
    stack_.clear();
    for (const Op& op : ops_) {
      switch (op.code) {
        case Code::constant:
          stack_.push_back(op.a);
          break;
        case Code::variable:
          stack_.push_back(values[op.n]);
          break;
        case Code::add: {
          double s = 0;
          for (int i = 0; i < op.n; ++i) {
            s += stack_.back();
            stack_.pop_back();
          }
          stack_.push_back(s);
          break;
        }
        case Code::mul: {
          double p = 1;
          for (int i = 0; i < op.n; ++i) {
            p *= stack_.back();
            stack_.pop_back();
          }
          stack_.push_back(p);
          break;
        }
        case Code::power: {
          double b = stack_.back();
          stack_.pop_back();
          if (b == 0 && op.a < 0) throw eval_error("division by zero");
          if (b < 0 && !op.integral)
            throw eval_error("negative radicand for fractional power");
          stack_.push_back(std::pow(b, op.a));
          break;
        }
        case Code::fn_exp:
          stack_.back() = std::exp(stack_.back());
          break;
        case Code::fn_sin:
          stack_.back() = std::sin(stack_.back());
          break;
        case Code::fn_cos:
          stack_.back() = std::cos(stack_.back());
          break;
      }
    }
    return stack_.back();
  }

 private:
  enum class Code { constant, variable, add, mul, power, fn_exp, fn_sin, fn_cos };
  struct Op {
    Code code;
    double a = 0;
    int n = 0;
    bool integral = false;
  };

  void compile(const Expr& e, const std::map<VarRef, int>& slot) {
    switch (e.kind()) {
      case NodeKind::rational:
        ops_.push_back({Code::constant, to_double(e.rational_value()), 0, false});
        return;
      case NodeKind::var: {
        auto it = slot.find(e.var());
        if (it == slot.end())
          throw eval_error("unbound variable in quadrature integrand");
        ops_.push_back({Code::variable, 0, it->second, false});
        return;
      }
      case NodeKind::sum:
        for (const Expr& k : e.children()) compile(k, slot);
        ops_.push_back({Code::add, 0, static_cast<int>(e.children().size()),
                        false});
        return;
      case NodeKind::product:
        for (const Expr& k : e.children()) compile(k, slot);
        ops_.push_back({Code::mul, 0, static_cast<int>(e.children().size()),
                        false});
        return;
      case NodeKind::power:
        compile(e.base(), slot);
        ops_.push_back({Code::power, to_double(e.exponent()), 0,
                        is_integer(e.exponent())});
        return;
      case NodeKind::call:
        compile(e.base(), slot);
        ops_.push_back({e.fn() == CallFn::exp   ? Code::fn_exp
                        : e.fn() == CallFn::sin ? Code::fn_sin
                                                : Code::fn_cos,
                        0, 0, false});
        return;
    }
  }

  std::vector<Op> ops_;
  mutable std::vector<double> stack_;
};

struct Rule1D {
  std::vector<double> x, w;
};

Rule1D rule_on(double lo, double hi, int n) {
  Rule1D r;
  std::vector<double> nodes, weights;
  gauss_legendre(n, nodes, weights);
  r.x.resize(n);
  r.w.resize(n);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int i = 0; i < n; ++i) {
    r.x[i] = mid + half * nodes[i];
    r.w[i] = half * weights[i];
  }
  return r;
}

double quad_box(const Tape& tape, const std::vector<Rule1D>& rules) {
  const int dim = static_cast<int>(rules.size());
  std::vector<int> ix(dim, 0);
  std::vector<double> point(dim);
  double sum = 0, comp = 0;  // Kahan compensated accumulation
  for (;;) {
    double w = 1;
    for (int d = 0; d < dim; ++d) {
      point[d] = rules[d].x[ix[d]];
      w *= rules[d].w[ix[d]];
    }
    double f = tape.eval(point);
    if (!std::isfinite(f)) throw eval_error("non-finite integrand sample");
    double y = w * f - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    int d = dim - 1;
    while (d >= 0 && ++ix[d] == static_cast<int>(rules[d].x.size())) {
      ix[d] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return sum;
}

double quad_shell(const Tape& tape, double r0, double r1, int n) {
  Rule1D rr = rule_on(r0, r1, n);
  Rule1D rt = rule_on(0.0, M_PI, n);
  Rule1D rp = rule_on(0.0, 2.0 * M_PI, n);
  std::vector<double> point(3);
  double sum = 0, comp = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double r = rr.x[i], th = rt.x[j], ph = rp.x[k];
        const double st = std::sin(th);
        point[0] = r * st * std::cos(ph);
        point[1] = r * st * std::sin(ph);
        point[2] = r * std::cos(th);
        double f = tape.eval(point);
        if (!std::isfinite(f)) throw eval_error("non-finite integrand sample");
        double w = rr.w[i] * rt.w[j] * rp.w[k] * r * r * st;
        double y = w * f - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
      }
  return sum;
}

double quad(const Expr& integrand, const Region& region,
            const BundleChart& chart, int nodes) {
  std::vector<VarRef> vars;
  for (int i = 0; i < chart.base_dim(); ++i) vars.push_back(VarRef::base_var(i));
  for (const VarRef& v : variables(integrand))
    if (v.is_jet())
      throw eval_error("integrand still contains jet variables");
  Tape tape(integrand, vars);
  if (region.kind == Region::Kind::spherical_shell) {
    if (chart.base_dim() != 3)
      throw validation_error("region", "spherical shells need a 3D base");
    if (region.intervals.size() != 1)
      throw validation_error("region", "shell takes one radial interval");
    return quad_shell(tape, region.intervals[0].first,
                      region.intervals[0].second, nodes);
  }
  if (static_cast<int>(region.intervals.size()) != chart.base_dim())
    throw validation_error("region", "box needs one interval per base variable");
  std::vector<Rule1D> rules;
  rules.reserve(region.intervals.size());
  for (const auto& [lo, hi] : region.intervals)
    rules.push_back(rule_on(lo, hi, nodes));
  return quad_box(tape, rules);
}

}  // namespace

QuadratureResult integrate(const Expr& P, const SectionSpec& s,
                           const Region& region, const Expr& nu_coeff,
                           const BundleChart& chart) {
  Expr integrand = pullback_section(P, s, chart) * nu_coeff;
  QuadratureResult out;
  out.value = quad(integrand, region, chart, region.nodes_per_axis);
  double half = quad(integrand, region, chart,
                     std::max(2, region.nodes_per_axis / 2));
  out.error_estimate = std::abs(out.value - half);
  return out;
}

bool section_invariant(const SectionSpec& s,
                       const std::vector<Generator>& generators,
                       const BundleChart& chart, double tol,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto draw = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  for (const Generator& g : generators) {
    for (std::size_t a = 0; a < s.components.size(); ++a) {
      std::vector<Expr> parts;
      for (int i = 0; i < chart.base_dim(); ++i)
        parts.push_back(g.base[i] *
                        partial(s.components[a], VarRef::base_var(i)));
      Expr drift = Expr::sum(std::move(parts));
      if (drift.is_zero()) continue;
      int checked = 0;
      for (int attempt = 0; attempt < 400 && checked < 20; ++attempt) {
        std::map<VarRef, double> point;
        for (int i = 0; i < chart.base_dim(); ++i) {
          auto [lo, hi] = chart.range_of(VarRef::base_var(i));
          point[VarRef::base_var(i)] = draw(lo, hi);
        }
        try {
          double v = evaluate(drift, point);
          double scale = std::max(1.0, std::abs(evaluate(s.components[a], point)));
          ++checked;
          if (std::abs(v) > tol * scale) return false;
        } catch (const eval_error&) {
          continue;
        }
      }
      if (checked == 0)
        throw sampling_error("no admissible points for section invariance");
    }
  }
  return true;
}

SectionSpec reduce_section(const SectionSpec& s, const AdaptedChart& ac,
                           const EqOptions& opts) {
  std::map<VarRef, Expr> inv_binding;
  for (int i = 0; i < ac.original.base_dim(); ++i)
    inv_binding[VarRef::base_var(i)] = ac.inverse[i];
  SectionSpec out;
  out.components.reserve(s.components.size());
  for (const Expr& c : s.components) {
    Expr over_adapted = substitute(c, inv_binding);
    out.components.push_back(
        restrict_to_invariant(over_adapted, ac, opts));
  }
  return out;
}

CompareReducedResult compare_reduced_functional(
    const Expr& P, const SectionSpec& s, const Region& region,
    const Region& reduced_region, const ReductionSetup& setup,
    const EqOptions& opts) {
  const BundleChart& orig = setup.chart.original;
  const BundleChart& red = setup.chart.reduced;
  if (!setup.nu_invariant)
    throw validation_error("compare_reduced", "nu must be G-invariant");
  if (!section_invariant(s, setup.generators, orig, 1e-6, opts.seed))
    throw validation_error("compare_reduced", "section is not G-invariant");
  if (!is_invariant(P, setup.generators, orig, opts))
    throw validation_error("compare_reduced", "P is not G-invariant");

  std::vector<int> top(orig.base_dim());
  for (int i = 0; i < orig.base_dim(); ++i) top[i] = i;
  Expr nu_coeff = setup.nu.coefficient(top);

  QuadratureResult lhs = integrate(P, s, region, nu_coeff, orig);

  HorizontalForm reduced_form = rho_chain(setup.nu.scaled(P), setup, opts);
  std::vector<int> rtop(red.base_dim());
  for (int i = 0; i < red.base_dim(); ++i) rtop[i] = i;
  Expr reduced_density = reduced_form.coefficient(rtop);

  SectionSpec sbar = reduce_section(s, setup.chart, opts);
  QuadratureResult rhs =
      integrate(reduced_density, sbar, reduced_region, Expr::one(), red);

  CompareReducedResult out;
  out.lhs = lhs.value;
  out.rhs = rhs.value;
  if (std::abs(rhs.value) < 1e-14)
    throw eval_error("reduced integral too small: ratio undefined");
  out.ratio = lhs.value / rhs.value;
  double el = std::abs(lhs.error_estimate / std::max(1e-300, std::abs(lhs.value)));
  double er = std::abs(rhs.error_estimate / std::max(1e-300, std::abs(rhs.value)));
  out.quadrature_error = std::max(el, er);
  return out;
}

}  // namespace jetred
