#pragma once

#include "jetred/bracket.hpp"
#include "jetred/chart.hpp"
#include "jetred/equality.hpp"
#include "jetred/expr.hpp"
#include "jetred/forms.hpp"
#include "jetred/jet_ops.hpp"

#include <optional>
#include <vector>

namespace jetred {

// Adapted coordinates (x^, y, v): the first orbit_count adapted base
// variables point along group orbits, the rest are invariants; the fiber map
// is the identity (v^a = u^a). forward maps x -> (x^, y) over the original
// base; inverse maps back over the adapted base.
struct AdaptedChart {
  BundleChart original;
  BundleChart adapted;
  BundleChart reduced;  // invariant base coordinates only
  int orbit_count = 0;
  std::vector<Expr> forward;
  std::vector<Expr> inverse;

  static AdaptedChart create(BundleChart original, BundleChart adapted,
                             int orbit_count, std::vector<Expr> forward,
                             std::vector<Expr> inverse,
                             const EqOptions& opts = {});
};

// X = J (tot X_1 ^ ... ^ tot X_q) over the original chart.
struct QChain {
  Expr scale;
  std::vector<TotalVectorField> vectors;
  int q() const { return static_cast<int>(vectors.size()); }
};

struct ReductionSetup {
  AdaptedChart chart;
  QChain chain;
  std::vector<Generator> generators;
  HorizontalForm nu;       // volume on the original chart, degree n
  bool nu_invariant = false;
  HorizontalForm nu_bar;   // rho_X(nu), degree n - q over the reduced chart
  Expr nu_bar_coeff;

  static ReductionSetup create(AdaptedChart chart, QChain chain,
                               std::vector<Generator> generators,
                               HorizontalForm nu, const EqOptions& opts = {});
};

// Rewrite over the adapted jet chart: base variables via the inverse map,
// jet variables via D_i = (dF^k/dx^i o F^{-1}) D^_k applied recursively.
Expr prolong_change_of_coords(const Expr& e, const AdaptedChart& ac);

// Substitute 0 for every jet variable whose multi-index touches an orbit
// coordinate (the pullback along Inv_G -> J^infty E). Result stays on the
// adapted chart.
Expr restrict_jets_only(const Expr& e, const AdaptedChart& ac);

// Full restriction: zero orbit-indexed jets, require the result free of the
// orbit base coordinates, re-chart onto the reduced chart.
Expr restrict_to_invariant(const Expr& e, const AdaptedChart& ac,
                           const EqOptions& opts = {});

// rho(f) for G-invariant f over the original chart.
Expr rho(const Expr& f, const ReductionSetup& setup, const EqOptions& opts = {},
         bool check_invariance = true);

// rho_X(gamma) = (-1)^{q r} rho(X -| gamma) for a horizontal degree-r form.
HorizontalForm rho_chain(const HorizontalForm& gamma,
                         const ReductionSetup& setup,
                         const EqOptions& opts = {});

// rho_X on source forms: components a -> rho(E_a), volume nu -> nu_bar.
SourceForm rho_chain_source(const SourceForm& delta,
                            const ReductionSetup& setup,
                            const EqOptions& opts = {});

struct L2HatResult {
  Expr coeff;             // against nu_bar
  bool omega_path_checked = false;
  Expr omega_path_coeff;  // the omega-bar route, when nu is invariant
};

// l^2(rho_X(P nu), rho_X(Q nu)) = rho_X(l~2(P nu, Q nu)). P and Q are the
// chosen invariant representatives; optional claims for the reduced inputs
// are verified against rho_X (representative_mismatch otherwise). When nu is
// G-invariant the omega-bar route is computed and must agree.
L2HatResult l2_hat(const Expr& P, const Expr& Q,
                   const std::optional<Expr>& p_bar_claim,
                   const std::optional<Expr>& q_bar_claim,
                   const ReductionSetup& setup, const OmegaStructure& omega,
                   const EqOptions& opts = {});

// Precondition rho_X(P nu) = rho_X(P' nu) (representative_mismatch if not);
// verdict: rho_X(l~2((P - P') nu, Q nu)) = 0.
bool verify_l2hat_well_defined(const Expr& P, const Expr& P_prime,
                               const Expr& Q, const ReductionSetup& setup,
                               const OmegaStructure& omega,
                               const EqOptions& opts = {});

// rho_X(d_H alpha) = d_H(rho_X alpha) on an invariant form of degree < n.
bool verify_cochain(const HorizontalForm& alpha, const ReductionSetup& setup,
                    const EqOptions& opts = {});

}  // namespace jetred
