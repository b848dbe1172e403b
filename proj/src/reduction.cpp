#include "jetred/reduction.hpp"

#include "jetred/errors.hpp"
#include "jetred/parse.hpp"
#include "jetred/prolong.hpp"

#include <algorithm>
#include <functional>

namespace jetred {

AdaptedChart AdaptedChart::create(BundleChart original, BundleChart adapted,
                                  int orbit_count, std::vector<Expr> forward,
                                  std::vector<Expr> inverse,
                                  const EqOptions& opts) {
  const int n = original.base_dim();
  if (adapted.base_dim() != n)
    throw validation_error("adapted_chart", "base dimension changed");
  if (adapted.fiber_dim() != original.fiber_dim())
    throw validation_error("adapted_chart",
                           "fiber dimension changed (v1 fiber map is the "
                           "identity)");
  if (orbit_count < 1 || orbit_count >= n)
    throw validation_error("adapted_chart",
                           "orbit coordinate count must be in [1, n)");
  if (static_cast<int>(forward.size()) != n ||
      static_cast<int>(inverse.size()) != n)
    throw validation_error("adapted_chart", "coordinate map arity mismatch");

  std::map<VarRef, Expr> fwd_binding, inv_binding;
  for (int i = 0; i < n; ++i) {
    fwd_binding[VarRef::base_var(i)] = forward[i];   // over original
    inv_binding[VarRef::base_var(i)] = inverse[i];   // over adapted
  }
  for (int i = 0; i < n; ++i) {
    // F(F^{-1}(x^,y)) - adapted identity, checked over the adapted chart.
    if (!equal(substitute(forward[i], inv_binding),
               Expr::variable(VarRef::base_var(i)), adapted, opts))
      throw validation_error("adapted_chart",
                             "forward o inverse is not the identity in "
                             "component " + adapted.base_names[i]);
    if (!equal(substitute(inverse[i], fwd_binding),
               Expr::variable(VarRef::base_var(i)), original, opts))
      throw validation_error("adapted_chart",
                             "inverse o forward is not the identity in "
                             "component " + original.base_names[i]);
  }
  Expr det = determinant(jacobian(forward, n));
  if (equal_detailed(det, Expr::zero(), original, opts).equal)
    throw validation_error("adapted_chart",
                           "base Jacobian is singular at the sampled points");

  BundleChart reduced;
  reduced.base_names.assign(adapted.base_names.begin() + orbit_count,
                            adapted.base_names.end());
  reduced.fiber_names = adapted.fiber_names;
  reduced.order_cap = adapted.order_cap;
  reduced.base_ranges.assign(adapted.base_ranges.begin() + orbit_count,
                             adapted.base_ranges.end());
  reduced.jet_range = adapted.jet_range;
  reduced.validate();

  AdaptedChart ac;
  ac.original = std::move(original);
  ac.adapted = std::move(adapted);
  ac.reduced = std::move(reduced);
  ac.orbit_count = orbit_count;
  ac.forward = std::move(forward);
  ac.inverse = std::move(inverse);
  return ac;
}

Expr prolong_change_of_coords(const Expr& e, const AdaptedChart& ac) {
  const int n = ac.original.base_dim();
  const int m = ac.original.fiber_dim();
  std::map<VarRef, Expr> inv_binding;
  for (int i = 0; i < n; ++i)
    inv_binding[VarRef::base_var(i)] = ac.inverse[i];
  // dmat[i][k] = (dF^k/dx^i) o F^{-1}, an expression over the adapted chart.
  ExprMatrix jacF = jacobian(ac.forward, n);
  ExprMatrix dmat(n, std::vector<Expr>(n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      dmat[i][k] = substitute(jacF[k][i], inv_binding);
  ExprMatrix fiber(m, std::vector<Expr>(m, Expr::zero()));
  for (int a = 0; a < m; ++a) fiber[a][a] = Expr::one();
  JetSubstitution js(ac.original, ac.adapted, ac.inverse, std::move(dmat),
                     std::move(fiber));
  return js.apply(e);
}

Expr restrict_jets_only(const Expr& e, const AdaptedChart& ac) {
  std::map<VarRef, Expr> zeros;
  for (const VarRef& v : variables(e))
    if (v.is_jet() && v.jet.contains_less_than(ac.orbit_count))
      zeros[v] = Expr::zero();
  return zeros.empty() ? e : substitute(e, zeros);
}

namespace {

// Re-chart an orbit-free adapted expression onto the reduced chart.
Expr remap_to_reduced(const Expr& e, const AdaptedChart& ac) {
  const int q = ac.orbit_count;
  std::map<VarRef, Expr> remap;
  for (const VarRef& v : variables(e)) {
    if (v.is_base()) {
      if (v.index < q)
        throw invariance_violation(
            "residual orbit coordinate '" + ac.adapted.base_names[v.index] +
            "' could not be eliminated structurally");
      remap[v] = Expr::variable(VarRef::base_var(v.index - q));
    } else {
      if (v.jet.contains_less_than(q))
        throw invariance_violation("orbit-indexed jet variable survived "
                                   "restriction");
      remap[v] = Expr::variable(VarRef::jet_var(v.index, v.jet.shifted(-q)));
    }
  }
  return substitute(e, remap);
}

}  // namespace

Expr restrict_to_invariant(const Expr& e, const AdaptedChart& ac,
                           const EqOptions& opts) {
  Expr r = restrict_jets_only(e, ac);
  for (int j = 0; j < ac.orbit_count; ++j) {
    Expr d = partial(r, VarRef::base_var(j));
    if (!is_zero(d, ac.adapted, opts))
      throw invariance_violation(
          "result depends on orbit coordinate '" + ac.adapted.base_names[j] +
          "': d/d" + ac.adapted.base_names[j] + " = " + format(d, ac.adapted));
  }
  return remap_to_reduced(r, ac);
}

namespace {

HorizontalForm rho_chain_impl(const HorizontalForm& gamma,
                              const AdaptedChart& ac, const QChain& chain,
                              const EqOptions& opts) {
  const int n = ac.original.base_dim();
  const int q = chain.q();
  const int r = gamma.degree();
  if (r < q)
    throw degree_error("rho_X needs form degree >= q (" + std::to_string(r) +
                       " < " + std::to_string(q) + ")");
  HorizontalForm contracted = contract(gamma, chain.vectors);
  contracted = contracted.scaled(chain.scale);
  if ((q * r) % 2 == 1)
    contracted = contracted.scaled(Expr::rational(Rat(-1)));

  // Basis change dx^i = T[i][k] d(adapted)^k, T[i][k] = d inverse[i] / d a_k.
  ExprMatrix T = jacobian(ac.inverse, n);

  HorizontalForm adapted_form(r - q);
  for (const auto& [idx, c] : contracted.components()) {
    Expr cc = prolong_change_of_coords(c, ac);
    // expand the basis product over all adapted index choices
    std::vector<int> cur;
    std::function<void(std::size_t, Expr)> rec = [&](std::size_t p, Expr acc) {
      if (acc.is_zero()) return;
      if (p == idx.size()) {
        adapted_form.add(cur, acc);
        return;
      }
      for (int k = 0; k < n; ++k) {
        const Expr& t = T[idx[p]][k];
        if (t.is_zero()) continue;
        cur.push_back(k);
        rec(p + 1, acc * t);
        cur.pop_back();
      }
    };
    rec(0, cc);
  }

  HorizontalForm reduced(r - q);
  for (const auto& [idx, c] : adapted_form.components()) {
    bool orbit_component =
        !idx.empty() && idx.front() < ac.orbit_count;  // keys sorted
    Expr restricted = restrict_jets_only(c, ac);
    if (orbit_component) {
      if (!is_zero(restricted, ac.adapted, opts))
        throw basicness_violation(
            "contracted form keeps a component along an orbit differential: " +
            format(restricted, ac.adapted));
      continue;
    }
    for (int j = 0; j < ac.orbit_count; ++j) {
      Expr d = partial(restricted, VarRef::base_var(j));
      if (!is_zero(d, ac.adapted, opts))
        throw invariance_violation(
            "reduced coefficient depends on orbit coordinate '" +
            ac.adapted.base_names[j] + "'");
    }
    Expr rc = remap_to_reduced(restricted, ac);
    std::vector<int> ridx = idx;
    for (int& i : ridx) i -= ac.orbit_count;
    reduced.add(std::move(ridx), rc);
  }
  return reduced;
}

}  // namespace

ReductionSetup ReductionSetup::create(AdaptedChart chart, QChain chain,
                                      std::vector<Generator> generators,
                                      HorizontalForm nu,
                                      const EqOptions& opts) {
  const int n = chart.original.base_dim();
  if (nu.degree() != n)
    throw validation_error("volume", "nu must have degree n");
  if (chain.q() < 1 || chain.q() > n)
    throw validation_error("qchain", "need 1 <= q <= n vector fields");
  for (const auto& X : chain.vectors)
    if (static_cast<int>(X.components.size()) != n)
      throw validation_error("qchain", "vector field arity mismatch");
  for (const auto& g : generators)
    if (static_cast<int>(g.base.size()) != n ||
        static_cast<int>(g.fiber.size()) != chart.original.fiber_dim())
      throw validation_error("generators", "component arity mismatch");

  ReductionSetup s;
  s.chart = std::move(chart);
  s.chain = std::move(chain);
  s.generators = std::move(generators);
  s.nu = std::move(nu);
  s.nu_invariant = is_invariant(s.nu, s.generators, s.chart.original, opts);

  // Spot-check that the chain produces invariant contractions.
  HorizontalForm probe =
      contract(s.nu, s.chain.vectors).scaled(s.chain.scale);
  if (!is_invariant(probe, s.generators, s.chart.original, opts))
    throw validation_error("qchain",
                           "X -| nu is not invariant under the generators");

  s.nu_bar = rho_chain_impl(s.nu, s.chart, s.chain, opts);
  if (s.nu_bar.components().size() != 1)
    throw validation_error("qchain", "rho_X(nu) is not a reduced volume");
  s.nu_bar_coeff = s.nu_bar.components().begin()->second;
  return s;
}

Expr rho(const Expr& f, const ReductionSetup& setup, const EqOptions& opts,
         bool check_invariance) {
  if (check_invariance &&
      !is_invariant(f, setup.generators, setup.chart.original, opts))
    throw invariance_violation("rho applied to a non-invariant function");
  return restrict_to_invariant(prolong_change_of_coords(f, setup.chart),
                               setup.chart, opts);
}

HorizontalForm rho_chain(const HorizontalForm& gamma,
                         const ReductionSetup& setup, const EqOptions& opts) {
  return rho_chain_impl(gamma, setup.chart, setup.chain, opts);
}

SourceForm rho_chain_source(const SourceForm& delta,
                            const ReductionSetup& setup,
                            const EqOptions& opts) {
  SourceForm out;
  out.volume_coeff = setup.nu_bar_coeff;
  out.components.reserve(delta.components.size());
  for (const Expr& c : delta.components)
    out.components.push_back(rho(c, setup, opts, /*check_invariance=*/false));
  return out;
}

namespace {

Expr reduced_top_coeff(const HorizontalForm& f, const ReductionSetup& setup) {
  const int nd = setup.chart.reduced.base_dim();
  if (f.degree() != nd)
    throw degree_error("expected a reduced top form");
  std::vector<int> key(nd);
  for (int i = 0; i < nd; ++i) key[i] = i;
  return f.coefficient(key);
}

Expr top_volume_coeff(const HorizontalForm& nu, int n) {
  std::vector<int> key(n);
  for (int i = 0; i < n; ++i) key[i] = i;
  return nu.coefficient(key);
}

}  // namespace

L2HatResult l2_hat(const Expr& P, const Expr& Q,
                   const std::optional<Expr>& p_bar_claim,
                   const std::optional<Expr>& q_bar_claim,
                   const ReductionSetup& setup, const OmegaStructure& omega,
                   const EqOptions& opts) {
  const BundleChart& orig = setup.chart.original;
  const BundleChart& red = setup.chart.reduced;
  Expr nu_coeff = top_volume_coeff(setup.nu, orig.base_dim());

  Expr p_bar = reduced_top_coeff(rho_chain(setup.nu.scaled(P), setup, opts),
                                 setup) /
               setup.nu_bar_coeff;
  Expr q_bar = reduced_top_coeff(rho_chain(setup.nu.scaled(Q), setup, opts),
                                 setup) /
               setup.nu_bar_coeff;
  if (p_bar_claim && !equal(*p_bar_claim, p_bar, red, opts))
    throw representative_mismatch(
        "rho_X(P nu) does not match the claimed reduced input");
  if (q_bar_claim && !equal(*q_bar_claim, q_bar, red, opts))
    throw representative_mismatch(
        "rho_X(Q nu) does not match the claimed reduced input");

  Expr c = l2_tilde(P, Q, omega, orig, nu_coeff);
  L2HatResult out;
  out.coeff = reduced_top_coeff(rho_chain(setup.nu.scaled(c), setup, opts),
                                setup) /
              setup.nu_bar_coeff;

  if (setup.nu_invariant) {
    const int m = omega.dim();
    ExprMatrix wbar(m, std::vector<Expr>(m));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        wbar[a][b] = omega.entries[a][b].is_zero()
                         ? Expr::zero()
                         : rho(omega.entries[a][b], setup, opts,
                               /*check_invariance=*/false);
    SourceForm ep = euler_lagrange(p_bar, red, setup.nu_bar_coeff);
    SourceForm eq = euler_lagrange(q_bar, red, setup.nu_bar_coeff);
    std::vector<Expr> parts;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        if (wbar[a][b].is_zero()) continue;
        parts.push_back(wbar[a][b] * eq.components[b] * ep.components[a]);
      }
    out.omega_path_coeff = Expr::sum(std::move(parts));
    out.omega_path_checked = true;
    if (!equal(out.coeff, out.omega_path_coeff, red, opts))
      throw error(
          "l2_hat: the representative route and the omega-bar route disagree");
  }
  return out;
}

bool verify_l2hat_well_defined(const Expr& P, const Expr& P_prime,
                               const Expr& Q, const ReductionSetup& setup,
                               const OmegaStructure& omega,
                               const EqOptions& opts) {
  const BundleChart& orig = setup.chart.original;
  const BundleChart& red = setup.chart.reduced;
  Expr rp = reduced_top_coeff(rho_chain(setup.nu.scaled(P), setup, opts),
                              setup);
  Expr rp2 = reduced_top_coeff(
      rho_chain(setup.nu.scaled(P_prime), setup, opts), setup);
  if (!equal(rp, rp2, red, opts))
    throw representative_mismatch(
        "precondition rho_X(P nu) = rho_X(P' nu) fails");
  Expr nu_coeff = top_volume_coeff(setup.nu, orig.base_dim());
  Expr c = l2_tilde(P - P_prime, Q, omega, orig, nu_coeff);
  Expr rc = reduced_top_coeff(rho_chain(setup.nu.scaled(c), setup, opts),
                              setup);
  return is_zero(rc, red, opts);
}

bool verify_cochain(const HorizontalForm& alpha, const ReductionSetup& setup,
                    const EqOptions& opts) {
  const BundleChart& orig = setup.chart.original;
  const BundleChart& red = setup.chart.reduced;
  HorizontalForm lhs = rho_chain(d_H(alpha, orig), setup, opts);
  HorizontalForm rhs = d_H(rho_chain(alpha, setup, opts), red);
  HorizontalForm diff = lhs - rhs;
  for (const auto& [idx, c] : diff.components())
    if (!is_zero(c, red, opts)) return false;
  return true;
}

}  // namespace jetred
