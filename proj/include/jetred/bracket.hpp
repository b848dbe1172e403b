#pragma once

#include "jetred/chart.hpp"
#include "jetred/equality.hpp"
#include "jetred/expr.hpp"
#include "jetred/forms.hpp"
#include "jetred/prolong.hpp"

#include <vector>

namespace jetred {

// omega^{ab} = omega(theta^a ^ nu, theta^b ^ nu); skew by construction.
struct OmegaStructure {
  ExprMatrix entries;

  static OmegaStructure create(ExprMatrix entries, const BundleChart& chart,
                               const EqOptions& opts = {});
  int dim() const { return static_cast<int>(entries.size()); }
};

// Fiber-linear bundle automorphism: x~ = psi_M(x), u~^a = A^a_b(x) u^b.
struct Automorphism {
  std::vector<Expr> base_forward;  // over base vars
  std::vector<Expr> base_inverse;
  ExprMatrix fiber_matrix;

  static Automorphism create(std::vector<Expr> forward,
                             std::vector<Expr> inverse, ExprMatrix fiber,
                             const BundleChart& chart,
                             const EqOptions& opts = {});
};

// (j^infty psi)^* f: base vars through psi_M, jet variables through the
// prolonged chain rule with the inverse base Jacobian.
Expr pullback(const Expr& f, const Automorphism& psi,
              const BundleChart& chart);

// det of the base Jacobian of psi (an expression over the base vars).
Expr base_jacobian_det(const Automorphism& psi, const BundleChart& chart);

// Coefficient of l~2(P nu, Q nu) = omega^{ab} E_b(Q) E_a(P) nu.
Expr l2_tilde(const Expr& P, const Expr& Q, const OmegaStructure& omega,
              const BundleChart& chart, const Expr& volume_coeff = Expr::one());

// Signed sum over the (2,1)-unshuffles:
//   l2(l2(P,Q),R) - l2(l2(P,R),Q) + l2(l2(Q,R),P).
Expr jacobiator(const Expr& P, const Expr& Q, const Expr& R,
                const OmegaStructure& omega, const BundleChart& chart);

// True iff E annihilates the Jacobiator, i.e. it is d_H-exact under the
// assumed exactness of the horizontal complex.
bool check_jacobiator_exact(const Expr& P, const Expr& Q, const Expr& R,
                            const OmegaStructure& omega,
                            const BundleChart& chart,
                            const EqOptions& opts = {});

// Covariance of omega with respect to psi:
//   omega(psi^* theta, psi^* theta') = det(psi_M) psi^* omega(theta, theta').
// In coordinates: A^a_c A^b_d det(J) omega^{cd} = omega^{ab} o j^infty psi.
bool check_covariance(const OmegaStructure& omega, const Automorphism& psi,
                      const BundleChart& chart, const EqOptions& opts = {});

}  // namespace jetred
