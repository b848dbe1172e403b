#include "jetred/bracket.hpp"

#include "jetred/errors.hpp"
#include "jetred/jet_ops.hpp"

namespace jetred {

OmegaStructure OmegaStructure::create(ExprMatrix entries,
                                      const BundleChart& chart,
                                      const EqOptions& opts) {
  const std::size_t m = entries.size();
  if (m != static_cast<std::size_t>(chart.fiber_dim()))
    throw validation_error("omega", "matrix size does not match fiber dimension");
  for (const auto& row : entries)
    if (row.size() != m)
      throw validation_error("omega", "matrix is not square");
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b)
      if (!equal(entries[a][b], -entries[b][a], chart, opts))
        throw validation_error(
            "omega", "not skew-symmetric at entry (" + std::to_string(a) +
                         "," + std::to_string(b) + ")");
  return OmegaStructure{std::move(entries)};
}

Automorphism Automorphism::create(std::vector<Expr> forward,
                                  std::vector<Expr> inverse, ExprMatrix fiber,
                                  const BundleChart& chart,
                                  const EqOptions& opts) {
  const int n = chart.base_dim();
  const int m = chart.fiber_dim();
  if (static_cast<int>(forward.size()) != n ||
      static_cast<int>(inverse.size()) != n)
    throw validation_error("automorphism", "base map arity mismatch");
  if (static_cast<int>(fiber.size()) != m)
    throw validation_error("automorphism", "fiber matrix size mismatch");
  for (const auto& row : fiber)
    if (static_cast<int>(row.size()) != m)
      throw validation_error("automorphism", "fiber matrix not square");
  std::map<VarRef, Expr> via_inverse, via_forward;
  for (int i = 0; i < n; ++i) {
    via_inverse[VarRef::base_var(i)] = inverse[i];
    via_forward[VarRef::base_var(i)] = forward[i];
  }
  for (int i = 0; i < n; ++i) {
    if (!equal(substitute(forward[i], via_inverse),
               Expr::variable(VarRef::base_var(i)), chart, opts))
      throw validation_error("automorphism",
                             "forward o inverse is not the identity on base "
                             "component " + std::to_string(i));
    if (!equal(substitute(inverse[i], via_forward),
               Expr::variable(VarRef::base_var(i)), chart, opts))
      throw validation_error("automorphism",
                             "inverse o forward is not the identity on base "
                             "component " + std::to_string(i));
  }
  Expr det = determinant(fiber);
  if (equal_detailed(det, Expr::zero(), chart, opts).equal)
    throw validation_error("automorphism",
                           "fiber matrix is singular at the sampled points");
  return Automorphism{std::move(forward), std::move(inverse),
                      std::move(fiber)};
}

namespace {

JetSubstitution pullback_engine(const Automorphism& psi,
                                const BundleChart& chart) {
  ExprMatrix jac = jacobian(psi.base_forward, chart.base_dim());
  ExprMatrix binv = invert(jac);
  // jet image of u~^a_{iI} uses D_j with the inverse-Jacobian column of i.
  const int n = chart.base_dim();
  ExprMatrix dmat(n, std::vector<Expr>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dmat[i][j] = binv[j][i];
  return JetSubstitution(chart, chart, psi.base_forward, std::move(dmat),
                         psi.fiber_matrix);
}

}  // namespace

Expr pullback(const Expr& f, const Automorphism& psi,
              const BundleChart& chart) {
  return pullback_engine(psi, chart).apply(f);
}

Expr base_jacobian_det(const Automorphism& psi, const BundleChart& chart) {
  return determinant(jacobian(psi.base_forward, chart.base_dim()));
}

Expr l2_tilde(const Expr& P, const Expr& Q, const OmegaStructure& omega,
              const BundleChart& chart, const Expr& volume_coeff) {
  SourceForm ep = euler_lagrange(P, chart, volume_coeff);
  SourceForm eq = euler_lagrange(Q, chart, volume_coeff);
  std::vector<Expr> parts;
  const int m = omega.dim();
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (omega.entries[a][b].is_zero()) continue;
      parts.push_back(omega.entries[a][b] * eq.components[b] *
                      ep.components[a]);
    }
  return Expr::sum(std::move(parts));
}

Expr jacobiator(const Expr& P, const Expr& Q, const Expr& R,
                const OmegaStructure& omega, const BundleChart& chart) {
  Expr t1 = l2_tilde(l2_tilde(P, Q, omega, chart), R, omega, chart);
  Expr t2 = l2_tilde(l2_tilde(P, R, omega, chart), Q, omega, chart);
  Expr t3 = l2_tilde(l2_tilde(Q, R, omega, chart), P, omega, chart);
  return t1 - t2 + t3;
}

bool check_jacobiator_exact(const Expr& P, const Expr& Q, const Expr& R,
                            const OmegaStructure& omega,
                            const BundleChart& chart, const EqOptions& opts) {
  Expr jac = jacobiator(P, Q, R, omega, chart);
  SourceForm el = euler_lagrange(jac, chart);
  for (const Expr& c : el.components)
    if (!is_zero(c, chart, opts)) return false;
  return true;
}

bool check_covariance(const OmegaStructure& omega, const Automorphism& psi,
                      const BundleChart& chart, const EqOptions& opts) {
  Expr det = base_jacobian_det(psi, chart);
  if (equal_detailed(det, Expr::zero(), chart, opts).equal)
    throw validation_error("covariance",
                           "singular base Jacobian at the sampled points");
  JetSubstitution pb = pullback_engine(psi, chart);
  const int m = omega.dim();
  const ExprMatrix& A = psi.fiber_matrix;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      std::vector<Expr> parts;
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) {
          if (omega.entries[c][d].is_zero()) continue;
          parts.push_back(A[a][c] * A[b][d] * det * omega.entries[c][d]);
        }
      Expr lhs = Expr::sum(std::move(parts));
      Expr rhs = pb.apply(omega.entries[a][b]);
      if (!equal(lhs, rhs, chart, opts)) return false;
    }
  return true;
}

}  // namespace jetred
