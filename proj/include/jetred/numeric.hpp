#pragma once

#include "jetred/chart.hpp"
#include "jetred/equality.hpp"
#include "jetred/expr.hpp"
#include "jetred/forms.hpp"
#include "jetred/jet_ops.hpp"
#include "jetred/reduction.hpp"

#include <vector>

namespace jetred {

// Closed-form test section: one base-variable expression per fiber variable
// (exp/sin/cos allowed here, and only here).
struct SectionSpec {
  std::vector<Expr> components;
};

struct Region {
  enum class Kind { box, spherical_shell };
  Kind kind = Kind::box;
  // box: one interval per base variable, in chart order.
  // spherical_shell (3D charts): a single radial interval; the polar and
  // azimuthal angles cover the full sphere.
  std::vector<std::pair<double, double>> intervals;
  int nodes_per_axis = 96;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

// Substitute u^a_I by the corresponding partial derivative of the section
// components; the result is a base-variable expression.
Expr pullback_section(const Expr& P, const SectionSpec& s,
                      const BundleChart& chart);

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;  // against the half-resolution rule
};

// Tensor-product Gauss-Legendre quadrature of (P o j^infty s) * nu over the
// region. Throws eval_error on non-finite integrand samples.
QuadratureResult integrate(const Expr& P, const SectionSpec& s,
                           const Region& region, const Expr& nu_coeff,
                           const BundleChart& chart);

// Sampled check that the section depends only on invariant combinations:
// |xi^i d_i s^a| <= tol at every sample point.
bool section_invariant(const SectionSpec& s,
                       const std::vector<Generator>& generators,
                       const BundleChart& chart, double tol = 1e-6,
                       std::uint64_t seed = 0);

// Reduced section: components composed with the inverse base map, required
// free of orbit coordinates, re-charted onto the reduced base.
SectionSpec reduce_section(const SectionSpec& s, const AdaptedChart& ac,
                           const EqOptions& opts = {});

struct CompareReducedResult {
  double lhs = 0;          // integral over the original region
  double rhs = 0;          // integral of rho_X(P nu) over the reduced region
  double ratio = 0;        // empirical orbit-volume factor V = lhs / rhs
  double quadrature_error = 0;  // max relative half-resolution defect
};

CompareReducedResult compare_reduced_functional(
    const Expr& P, const SectionSpec& s, const Region& region,
    const Region& reduced_region, const ReductionSetup& setup,
    const EqOptions& opts = {});

}  // namespace jetred
