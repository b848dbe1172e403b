#include "jetred/jet_ops.hpp"

#include "jetred/errors.hpp"

#include <algorithm>

namespace jetred {

Expr total_derivative(const Expr& P, int i, const BundleChart& chart) {
  std::vector<Expr> parts;
  parts.push_back(partial(P, VarRef::base_var(i)));
  for (const VarRef& v : variables(P)) {
    if (!v.is_jet()) continue;
    Expr dv = partial(P, v);
    if (dv.is_zero()) continue;
    if (v.order() + 1 > chart.order_cap)
      throw order_cap_error(v.order() + 1, chart.order_cap);
    parts.push_back(Expr::variable(VarRef::jet_var(v.index, v.jet.with(i))) *
                    dv);
  }
  return Expr::sum(std::move(parts));
}

Expr multi_total_derivative(const Expr& P, const MultiIndex& I,
                            const BundleChart& chart) {
  Expr e = P;
  for (int i : I.indices()) e = total_derivative(e, i, chart);
  return e;
}

SourceForm euler_lagrange(const Expr& P, const BundleChart& chart,
                          const Expr& volume_coeff) {
  const bool unit_volume = volume_coeff.is_one();
  Expr density = unit_volume ? P : volume_coeff * P;
  SourceForm out;
  out.volume_coeff = volume_coeff;
  out.components.reserve(chart.fiber_dim());
  std::set<VarRef> vars = variables(density);
  for (int a = 0; a < chart.fiber_dim(); ++a) {
    // Distinct sorted multi-indices with u^a_I present in the density; each
    // contributes (-1)^{|I|} D_I (dP/du^a_I) exactly once.
    std::vector<Expr> parts;
    for (const VarRef& v : vars) {
      if (!v.is_jet() || v.index != a) continue;
      Expr d = partial(density, v);
      if (d.is_zero()) continue;
      Expr t = multi_total_derivative(d, v.jet, chart);
      if (v.order() % 2 == 1) t = -t;
      parts.push_back(std::move(t));
    }
    Expr comp = Expr::sum(std::move(parts));
    if (!unit_volume) comp = comp / volume_coeff;
    out.components.push_back(std::move(comp));
  }
  return out;
}

Expr prolonged_apply(const Generator& g, const Expr& f,
                     const BundleChart& chart) {
  const int n = chart.base_dim();
  std::vector<Expr> parts;
  for (int i = 0; i < n; ++i) {
    if (g.base[i].is_zero()) continue;
    parts.push_back(g.base[i] * total_derivative(f, i, chart));
  }
  // Characteristics Q^a = phi^a - xi^i u^a_i, computed lazily per fiber.
  std::vector<Expr> charac(chart.fiber_dim());
  std::vector<bool> have(chart.fiber_dim(), false);
  for (const VarRef& v : variables(f)) {
    if (!v.is_jet()) continue;
    Expr df = partial(f, v);
    if (df.is_zero()) continue;
    if (!have[v.index]) {
      std::vector<Expr> q;
      q.push_back(g.fiber[v.index]);
      for (int i = 0; i < n; ++i)
        q.push_back(-(g.base[i] *
                      Expr::variable(VarRef::jet_var(v.index, MultiIndex({i})))));
      charac[v.index] = Expr::sum(std::move(q));
      have[v.index] = true;
    }
    parts.push_back(multi_total_derivative(charac[v.index], v.jet, chart) * df);
  }
  return Expr::sum(std::move(parts));
}

HorizontalForm lie_derivative(const Generator& g, const HorizontalForm& a,
                              const BundleChart& chart) {
  HorizontalForm out(a.degree());
  for (const auto& [idx, c] : a.components()) {
    out.add(idx, prolonged_apply(g, c, chart));
    // basis variation: dx^{i_p} -> D_j xi^{i_p} dx^j
    for (std::size_t p = 0; p < idx.size(); ++p) {
      const Expr& xi = g.base[idx[p]];
      if (xi.is_zero()) continue;
      for (int j = 0; j < chart.base_dim(); ++j) {
        Expr dxi = total_derivative(xi, j, chart);
        if (dxi.is_zero()) continue;
        std::vector<int> nidx = idx;
        nidx[p] = j;
        out.add(std::move(nidx), c * dxi);
      }
    }
  }
  return out;
}

bool is_invariant(const Expr& e, const std::vector<Generator>& gens,
                  const BundleChart& chart, const EqOptions& opts) {
  for (const Generator& g : gens)
    if (!is_zero(prolonged_apply(g, e, chart), chart, opts)) return false;
  return true;
}

bool is_invariant(const HorizontalForm& a, const std::vector<Generator>& gens,
                  const BundleChart& chart, const EqOptions& opts) {
  for (const Generator& g : gens) {
    HorizontalForm lie = lie_derivative(g, a, chart);
    for (const auto& [idx, c] : lie.components())
      if (!is_zero(c, chart, opts)) return false;
  }
  return true;
}

}  // namespace jetred
