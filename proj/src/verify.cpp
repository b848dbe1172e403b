#include "jetred/verify.hpp"

#include "jetred/errors.hpp"
#include "jetred/jet_ops.hpp"
#include "jetred/parse.hpp"

#include <chrono>
#include <functional>
#include <random>

namespace jetred {

namespace {

using Clock = std::chrono::steady_clock;

class Rand {
 public:
  Rand(const BundleChart& chart, std::uint64_t seed)
      : chart_(chart), rng_(seed) {}

  Expr atom() {
    int n = chart_.base_dim(), m = chart_.fiber_dim();
    int pick = static_cast<int>(rng_() % static_cast<unsigned>(n + 3 * m));
    if (pick < n) return Expr::variable(VarRef::base_var(pick));
    pick -= n;
    if (pick < m) return Expr::variable(VarRef::jet_var(pick));
    pick -= m;
    if (pick < m) {
      int i = static_cast<int>(rng_() % static_cast<unsigned>(n));
      return Expr::variable(VarRef::jet_var(pick, MultiIndex({i})));
    }
    pick -= m;
    int i = static_cast<int>(rng_() % static_cast<unsigned>(n));
    int j = static_cast<int>(rng_() % static_cast<unsigned>(n));
    return Expr::variable(VarRef::jet_var(pick, MultiIndex({i, j})));
  }

  Rat coeff() {
    long long num = static_cast<long long>(rng_() % 7) - 3;
    if (num == 0) num = 1;
    return Rat(num, 1 + static_cast<long long>(rng_() % 3));
  }

  Expr poly(int max_terms = 2, int max_factors = 2) {
    int k = 1 + static_cast<int>(rng_() % static_cast<unsigned>(max_terms));
    std::vector<Expr> ts;
    for (int t = 0; t < k; ++t) {
      int f = 1 + static_cast<int>(rng_() % static_cast<unsigned>(max_factors));
      std::vector<Expr> fs{Expr::rational(coeff())};
      for (int i = 0; i < f; ++i) fs.push_back(atom());
      ts.push_back(Expr::product(std::move(fs)));
    }
    return Expr::sum(std::move(ts));
  }

  Expr invariant_scalar(const std::vector<Expr>& atoms, int max_terms = 2) {
    int k = 1 + static_cast<int>(rng_() % static_cast<unsigned>(max_terms));
    std::vector<Expr> ts;
    for (int t = 0; t < k; ++t) {
      int f = 1 + static_cast<int>(rng_() % 2u);
      std::vector<Expr> fs{Expr::rational(coeff())};
      for (int i = 0; i < f; ++i) fs.push_back(atoms[rng_() % atoms.size()]);
      ts.push_back(Expr::product(std::move(fs)));
    }
    return Expr::sum(std::move(ts));
  }

  HorizontalForm form(int degree, int max_terms = 2) {
    HorizontalForm f(degree);
    const int n = chart_.base_dim();
    int k = 1 + static_cast<int>(rng_() % static_cast<unsigned>(max_terms));
    for (int t = 0; t < k; ++t) {
      std::vector<int> idx;
      for (int i = 0; i < degree; ++i)
        idx.push_back(static_cast<int>(rng_() % static_cast<unsigned>(n)));
      f.add(std::move(idx), poly());
    }
    return f;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  const BundleChart& chart_;
  std::mt19937_64 rng_;
};

CheckLine timed(const std::string& name, int cases,
                const std::function<int()>& run) {
  CheckLine line;
  line.name = name;
  auto t0 = Clock::now();
  int failures = run();
  line.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  line.pass = failures == 0;
  line.detail = std::to_string(cases - failures) + "/" +
                std::to_string(cases) + " cases";
  if (failures > 0)
    line.detail += " (" + std::to_string(failures) + " failed)";
  return line;
}

CheckLine skipped(const std::string& name, const std::string& why) {
  CheckLine line;
  line.name = name;
  line.pass = true;
  line.applicable = false;
  line.detail = "skipped: " + why;
  return line;
}

CheckLine suite_dh2(const Problem& p, int cases, std::uint64_t seed) {
  const int n = p.chart.base_dim();
  if (n < 2)
    return skipped("d_H o d_H = 0", "needs base dimension >= 2");
  Rand gen(p.chart, seed);
  return timed("d_H o d_H = 0", cases, [&] {
    int failures = 0;
    for (int k = 0; k < cases; ++k) {
      int deg =
          static_cast<int>(gen.rng()() % static_cast<unsigned>(n - 1));
      HorizontalForm a = gen.form(deg);
      if (!d_H(d_H(a, p.chart), p.chart).empty()) ++failures;
    }
    return failures;
  });
}

CheckLine suite_e_dh(const Problem& p, int cases, std::uint64_t seed) {
  Rand gen(p.chart, seed + 1);
  const int n = p.chart.base_dim();
  std::vector<int> top(n);
  for (int i = 0; i < n; ++i) top[i] = i;
  return timed("E o d_H = 0", cases, [&] {
    int failures = 0;
    for (int k = 0; k < cases; ++k) {
      HorizontalForm a = gen.form(n - 1);
      Expr c = d_H(a, p.chart).coefficient(top);
      SourceForm el = euler_lagrange(c, p.chart);
      for (const Expr& comp : el.components)
        if (!comp.is_zero()) {
          ++failures;
          break;
        }
    }
    return failures;
  });
}

CheckLine suite_l2_skew(const Problem& p, int cases, std::uint64_t seed) {
  if (!p.omega) return skipped("l2_tilde skew/bilinear", "no omega declared");
  Rand gen(p.chart, seed + 2);
  return timed("l2_tilde skew/bilinear", cases, [&] {
    int failures = 0;
    for (int k = 0; k < cases; ++k) {
      Expr a = gen.poly(), b = gen.poly(), c = gen.poly();
      Rat s = gen.coeff(), t = gen.coeff();
      Expr lab = l2_tilde(a, b, *p.omega, p.chart);
      bool ok =
          lab == -l2_tilde(b, a, *p.omega, p.chart) &&
          l2_tilde(Expr::rational(s) * a + Expr::rational(t) * c, b, *p.omega,
                   p.chart) ==
              Expr::rational(s) * lab +
                  Expr::rational(t) * l2_tilde(c, b, *p.omega, p.chart);
      if (!ok) ++failures;
    }
    return failures;
  });
}

CheckLine suite_jacobiator_random(const Problem& p, int cases,
                                  std::uint64_t seed) {
  if (!p.omega)
    return skipped("jacobiator E-annihilated", "no omega declared");
  if (p.chart.base_dim() != 1)
    return skipped("jacobiator E-annihilated",
                   "random suite runs on 1D charts (use jacobiator_triples)");
  Rand gen(p.chart, seed + 3);
  return timed("jacobiator E-annihilated", cases, [&] {
    int failures = 0;
    for (int k = 0; k < cases; ++k) {
      Expr a = gen.poly(), b = gen.poly(), c = gen.poly();
      if (!check_jacobiator_exact(a, b, c, *p.omega, p.chart, p.eq))
        ++failures;
    }
    return failures;
  });
}

CheckLine suite_jacobiator_named(const Problem& p) {
  if (!p.omega || p.jacobiator_triples.empty())
    return skipped("jacobiator triples", "none declared");
  return timed("jacobiator triples",
               static_cast<int>(p.jacobiator_triples.size()), [&] {
                 int failures = 0;
                 for (const auto& t : p.jacobiator_triples) {
                   bool exact = check_jacobiator_exact(
                       p.expression(t.p), p.expression(t.q), p.expression(t.r),
                       *p.omega, p.chart, p.eq);
                   if (exact != t.expect_exact) ++failures;
                 }
                 return failures;
               });
}

// Invariant scalars for the reduction suites need declared atoms.
bool invariant_toolkit(const Problem& p, std::vector<Expr>& atoms,
                       std::vector<Expr>& base_only) {
  atoms = p.invariant_atoms;
  base_only.clear();
  for (const Expr& a : atoms)
    if (max_jet_order(a) == 0) {
      bool pure_base = true;
      for (const VarRef& v : variables(a))
        if (v.is_jet()) pure_base = false;
      if (pure_base) base_only.push_back(a);
    }
  return !atoms.empty();
}

// f * d_H g ^ d_H h for invariant f, g, h is an invariant 2-form; with g a
// pure base invariant its chain contraction stays basic.
HorizontalForm invariant_two_form(Rand& gen, const Problem& p,
                                  const std::vector<Expr>& atoms,
                                  const std::vector<Expr>& base_only) {
  const Expr g = base_only[gen.rng()() % base_only.size()];
  const Expr h = atoms[gen.rng()() % atoms.size()];
  HorizontalForm dg(1), dh(1);
  for (int i = 0; i < p.chart.base_dim(); ++i) {
    dg.add({i}, total_derivative(g, i, p.chart));
    dh.add({i}, total_derivative(h, i, p.chart));
  }
  Expr f = gen.invariant_scalar(atoms);
  return wedge(dg, dh, p.chart.base_dim()).scaled(f);
}

CheckLine suite_cochain(const Problem& p, int cases, std::uint64_t seed) {
  if (!p.reduction) return skipped("cochain rho_X o d_H", "no reduction");
  std::vector<Expr> atoms, base_only;
  if (!invariant_toolkit(p, atoms, base_only) || base_only.empty())
    return skipped("cochain rho_X o d_H", "no invariant_atoms declared");
  Rand gen(p.chart, seed + 4);
  return timed("cochain rho_X o d_H = d_H o rho_X", cases, [&] {
    int failures = 0;
    for (int k = 0; k < cases; ++k) {
      HorizontalForm alpha = invariant_two_form(gen, p, atoms, base_only);
      if (!verify_cochain(alpha, *p.reduction, p.eq)) ++failures;
    }
    return failures;
  });
}

CheckLine suite_el_commute(const Problem& p, int cases, std::uint64_t seed) {
  if (!p.reduction) return skipped("E o rho_X = rho_X o E", "no reduction");
  std::vector<Expr> atoms, base_only;
  if (!invariant_toolkit(p, atoms, base_only))
    return skipped("E o rho_X = rho_X o E", "no invariant_atoms declared");
  Rand gen(p.chart, seed + 5);
  const ReductionSetup& setup = *p.reduction;
  const BundleChart& red = setup.chart.reduced;
  std::vector<int> rtop(red.base_dim());
  for (int i = 0; i < red.base_dim(); ++i) rtop[i] = i;
  return timed("E o rho_X = rho_X o E", cases, [&] {
    int failures = 0;
    for (int k = 0; k < cases; ++k) {
      Expr P = gen.invariant_scalar(atoms);
      HorizontalForm rt = rho_chain(setup.nu.scaled(P), setup, p.eq);
      Expr qbar = rt.coefficient(rtop) / setup.nu_bar_coeff;
      SourceForm lhs = euler_lagrange(qbar, red, setup.nu_bar_coeff);
      SourceForm rhs =
          rho_chain_source(euler_lagrange(P, p.chart), setup, p.eq);
      for (std::size_t a = 0; a < lhs.components.size(); ++a)
        if (!equal(lhs.components[a], rhs.components[a], red, p.eq)) {
          ++failures;
          break;
        }
    }
    return failures;
  });
}

CheckLine suite_covariance(const Problem& p) {
  if (!p.omega || p.automorphisms.empty())
    return skipped("covariance", "needs omega and automorphisms");
  return timed("covariance", static_cast<int>(p.automorphisms.size()), [&] {
    int failures = 0;
    for (const auto& [name, psi] : p.automorphisms) {
      bool cov = check_covariance(*p.omega, psi, p.chart, p.eq);
      if (cov != p.automorphism_covariant.at(name)) ++failures;
    }
    return failures;
  });
}

CheckLine suite_well_defined(const Problem& p, int cases,
                             std::uint64_t seed) {
  if (!p.reduction || !p.omega)
    return skipped("l2_hat well-defined", "needs reduction and omega");
  std::vector<Expr> atoms, base_only;
  if (!invariant_toolkit(p, atoms, base_only) || base_only.empty())
    return skipped("l2_hat well-defined", "no invariant_atoms declared");
  Rand gen(p.chart, seed + 6);
  const ReductionSetup& setup = *p.reduction;
  const int n = p.chart.base_dim();
  std::vector<int> top(n);
  for (int i = 0; i < n; ++i) top[i] = i;
  return timed("l2_hat well-defined", cases, [&] {
    int failures = 0;
    for (int k = 0; k < cases; ++k) {
      Expr P = gen.invariant_scalar(atoms);
      Expr Q = gen.invariant_scalar(atoms);
      // kappa = d_H(eta) with X -| eta = 0: shifts P without moving rho_X
      HorizontalForm eta = invariant_two_form(gen, p, atoms, base_only);
      Expr kappa = d_H(eta, p.chart).coefficient(top);
      if (!verify_l2hat_well_defined(P + kappa, P, Q, setup, *p.omega, p.eq))
        ++failures;
    }
    return failures;
  });
}

}  // namespace

std::vector<CheckLine> run_verifications(const Problem& p,
                                         const std::string& what, int cases,
                                         std::uint64_t seed) {
  std::vector<CheckLine> out;
  auto want = [&what](const char* name) {
    return what == "all" || what == name;
  };
  if (want("dh2")) out.push_back(suite_dh2(p, cases, seed));
  if (want("e-dh")) out.push_back(suite_e_dh(p, cases, seed));
  if (want("l2-skew")) out.push_back(suite_l2_skew(p, cases, seed));
  if (want("jacobiator")) {
    out.push_back(suite_jacobiator_random(p, cases, seed));
    out.push_back(suite_jacobiator_named(p));
  }
  if (want("cochain")) out.push_back(suite_cochain(p, cases, seed));
  if (want("el-commute")) out.push_back(suite_el_commute(p, cases, seed));
  if (want("covariance")) out.push_back(suite_covariance(p));
  if (want("well-defined")) out.push_back(suite_well_defined(p, cases, seed));
  if (out.empty())
    throw error("unknown verification '" + what + "'");
  return out;
}

}  // namespace jetred
