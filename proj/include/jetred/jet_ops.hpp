#pragma once

#include "jetred/chart.hpp"
#include "jetred/equality.hpp"
#include "jetred/expr.hpp"
#include "jetred/forms.hpp"

#include <vector>

namespace jetred {

// D_i = d/dx^i + u^a_{iJ} d/du^a_J, summed over jet variables present in P.
Expr total_derivative(const Expr& P, int i, const BundleChart& chart);

Expr multi_total_derivative(const Expr& P, const MultiIndex& I,
                            const BundleChart& chart);

// E_a(P) = (-D)_I d(fP)/du^a_I / f for the reference volume nu = f d^n x;
// the sum runs over the multi-indices actually present.
SourceForm euler_lagrange(const Expr& P, const BundleChart& chart,
                          const Expr& volume_coeff = Expr::one());

// Infinitesimal generator with order-0 components (point vector field).
struct Generator {
  std::vector<Expr> base;   // xi^i
  std::vector<Expr> fiber;  // phi^a
};

// pr X (f) in evolutionary form: xi^i D_i f + sum_J D_J(Q^a) df/du^a_J with
// characteristic Q^a = phi^a - xi^i u^a_i.
Expr prolonged_apply(const Generator& g, const Expr& f,
                     const BundleChart& chart);

// Lie derivative of a horizontal form along the prolonged generator:
// coefficients move by pr X, the dx basis by the horizontal part of d(xi).
HorizontalForm lie_derivative(const Generator& g, const HorizontalForm& a,
                              const BundleChart& chart);

bool is_invariant(const Expr& e, const std::vector<Generator>& gens,
                  const BundleChart& chart, const EqOptions& opts = {});
bool is_invariant(const HorizontalForm& a, const std::vector<Generator>& gens,
                  const BundleChart& chart, const EqOptions& opts = {});

}  // namespace jetred
