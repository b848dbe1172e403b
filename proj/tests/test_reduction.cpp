#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

#include "jetred/errors.hpp"
#include "jetred/parse.hpp"
#include "jetred/reduction.hpp"

using namespace jetred;
using namespace jetred::testing;

namespace {

// x dy^dz - y dx^dz + z dx^dy: the radial contraction of the volume, an
// SO(3)-invariant 2-form used to generate invariant test forms.
HorizontalForm radial_two_form(const BundleChart& c) {
  HorizontalForm f(2);
  f.add({1, 2}, parse("x", c));
  f.add({0, 2}, parse("-y", c));
  f.add({0, 1}, parse("z", c));
  return f;
}

}  // namespace

TEST_CASE("adapted chart validation") {
  BundleChart orig = so3_chart();
  BundleChart adapted = so3_adapted_chart();
  SUBCASE("mismatched inverse is rejected") {
    std::vector<Expr> fwd = {parse("x", orig), parse("y", orig),
                             parse("sqrt(x^2+y^2+z^2)", orig)};
    std::vector<Expr> bad = {parse("xh", adapted), parse("yh", adapted),
                             parse("r", adapted)};
    CHECK_THROWS_AS(AdaptedChart::create(orig, adapted, 2, fwd, bad),
                    validation_error);
  }
  SUBCASE("valid chart passes") { CHECK_NOTHROW(so3_adapted()); }
}

TEST_CASE("prolong_change_of_coords: paper examples") {
  AdaptedChart ac = so3_adapted();
  const BundleChart& orig = ac.original;
  const BundleChart& ad = ac.adapted;
  SUBCASE("u_x = v_xh + (xh/r) v_r") {
    CHECK(prolong_change_of_coords(parse("u1_x", orig), ac) ==
          parse("v1_xh + xh/r*v1_r", ad));
  }
  SUBCASE("u_zz with z^2 = r^2 - xh^2 - yh^2") {
    Expr got = prolong_change_of_coords(parse("u1_zz", orig), ac);
    Expr expect = parse(
        "(r^2-xh^2-yh^2)/r^2*v1_rr + (xh^2+yh^2)/r^3*v1_r", ad);
    CHECK(equal(got, expect, ad));
  }
  SUBCASE("constants are unchanged") {
    CHECK(prolong_change_of_coords(parse("2/3", orig), ac) ==
          parse("2/3", ad));
  }
}

TEST_CASE("round trip through the inverse chart") {
  // Moving to adapted coordinates and back is the identity; the inverse
  // adapted chart swaps the roles of the two maps.
  AdaptedChart there = so3_adapted();
  AdaptedChart back = AdaptedChart::create(
      there.adapted, there.original, 2, there.inverse, there.forward);
  RandomExprGen gen(there.original, 17);
  for (int k = 0; k < 10; ++k) {
    Expr e = gen.poly(2, 2);
    Expr round =
        prolong_change_of_coords(prolong_change_of_coords(e, there), back);
    CHECK(equal(round, e, there.original));
  }
}

TEST_CASE("restrict_to_invariant: spec examples") {
  AdaptedChart ac = so3_adapted();
  const BundleChart& orig = ac.original;
  const BundleChart& ad = ac.adapted;
  SUBCASE("prolonged Laplacian") {
    Expr lap = prolong_change_of_coords(parse("u1_xx+u1_yy+u1_zz", orig), ac);
    CHECK(restrict_to_invariant(lap, ac) ==
          parse("v1_rr + 2/r*v1_r", ac.reduced));
  }
  SUBCASE("mixed-index jets vanish") {
    CHECK(restrict_to_invariant(parse("v1_xhr", ad), ac).is_zero());
  }
  SUBCASE("non-invariant input fires the violation") {
    Expr ux = prolong_change_of_coords(parse("u1_x", orig), ac);
    CHECK_THROWS_AS(restrict_to_invariant(ux, ac), invariance_violation);
  }
}

TEST_CASE("rho: spec examples") {
  ReductionSetup setup = so3_setup();
  const BundleChart& orig = setup.chart.original;
  const BundleChart& red = setup.chart.reduced;
  CHECK(rho(parse("u1_xx+u1_yy+u1_zz", orig), setup) ==
        parse("v1_rr + 2/r*v1_r", red));
  CHECK(rho(parse("x^2+y^2+z^2", orig), setup) == parse("r^2", red));
  CHECK(rho(parse("u1*u2", orig), setup) == parse("v1*v2", red));
  CHECK_THROWS_AS(rho(parse("u1_x", orig), setup), invariance_violation);
}

TEST_CASE("rho is an algebra map on invariant functions") {
  ReductionSetup setup = so3_setup(8);
  const BundleChart& orig = setup.chart.original;
  const BundleChart& red = setup.chart.reduced;
  RandomExprGen gen(orig, 23);
  for (int k = 0; k < 10; ++k) {
    Expr f = gen.so3_invariant(), g = gen.so3_invariant();
    CHECK(equal(rho(f * g, setup), rho(f, setup) * rho(g, setup), red));
    CHECK(equal(rho(f + g, setup), rho(f, setup) + rho(g, setup), red));
  }
}

TEST_CASE("rho_chain: paper examples") {
  ReductionSetup setup = so3_setup();
  const BundleChart& orig = setup.chart.original;
  const BundleChart& red = setup.chart.reduced;
  SUBCASE("volume reduces to r^2 dr") {
    CHECK(setup.nu_bar_coeff == parse("r^2", red));
  }
  SUBCASE("top form factorizes through rho") {
    Expr P = parse("u1*(u2_xx+u2_yy+u2_zz)", orig);
    HorizontalForm rr = rho_chain(setup.nu.scaled(P), setup);
    Expr expect = parse("v1*(v2_rr + 2/r*v2_r)*r^2", red);
    CHECK(equal(rr.coefficient({0}), expect, red));
  }
  SUBCASE("factorization on random invariant tops") {
    RandomExprGen gen(orig, 29);
    for (int k = 0; k < 8; ++k) {
      Expr P = gen.so3_invariant();
      HorizontalForm rr = rho_chain(setup.nu.scaled(P), setup);
      CHECK(equal(rr.coefficient({0}),
                  rho(P, setup) * setup.nu_bar_coeff, red));
    }
  }
  SUBCASE("degree below q is rejected") {
    HorizontalForm low(1);
    low.add({0}, parse("x", orig));
    CHECK_THROWS_AS(rho_chain(low, setup), degree_error);
  }
  SUBCASE("mis-adapted charts fail the basicness check") {
    // Translations along x with a skewed "invariant" coordinate x + y: the
    // reduced volume keeps a dxh component, which is a hard error.
    BundleChart o2({"x", "y"}, {"u1"});
    BundleChart a2({"xh", "yb"}, {"v1"});
    AdaptedChart ac2 = AdaptedChart::create(
        o2, a2, 1, {parse("x", o2), parse("x+y", o2)},
        {parse("xh", a2), parse("yb-xh", a2)});
    QChain chain1{Expr::one(), {TotalVectorField{{Expr::one(), Expr::zero()}}}};
    std::vector<Generator> gens1 = {{{Expr::one(), Expr::zero()},
                                     {Expr::zero()}}};
    CHECK_THROWS_AS(ReductionSetup::create(ac2, chain1, gens1,
                                           HorizontalForm::top(Expr::one(), 2)),
                    basicness_violation);
  }
  SUBCASE("non-invariant residue after full contraction is rejected") {
    // dx^dy contracts with both chain fields to the scalar r z, which still
    // depends on the orbit coordinates
    HorizontalForm dxdy(2);
    dxdy.add({0, 1}, Expr::one());
    CHECK_THROWS_AS(rho_chain(dxdy, setup), invariance_violation);
  }
}

TEST_CASE("rho_chain is a cochain map") {
  ReductionSetup setup = so3_setup(8);
  const BundleChart& orig = setup.chart.original;
  RandomExprGen gen(orig, 31);
  for (int k = 0; k < 6; ++k) {
    HorizontalForm alpha = radial_two_form(orig).scaled(gen.so3_invariant());
    REQUIRE(is_invariant(alpha, setup.generators, orig));
    CHECK(verify_cochain(alpha, setup));
  }
  SUBCASE("zero form") {
    CHECK(verify_cochain(HorizontalForm(2), setup));
  }
  SUBCASE("degree below q errors") {
    HorizontalForm low(1);
    low.add({0}, parse("x", orig));
    CHECK_THROWS_AS(verify_cochain(low, setup), degree_error);
  }
}

TEST_CASE("E commutes with rho_X on invariant top forms") {
  ReductionSetup setup = so3_setup(8);
  const BundleChart& orig = setup.chart.original;
  const BundleChart& red = setup.chart.reduced;
  RandomExprGen gen(orig, 37);
  for (int k = 0; k < 6; ++k) {
    Expr P = gen.so3_invariant();
    HorizontalForm reduced_top = rho_chain(setup.nu.scaled(P), setup);
    Expr qbar = reduced_top.coefficient({0}) / setup.nu_bar_coeff;
    SourceForm lhs = euler_lagrange(qbar, red, setup.nu_bar_coeff);
    SourceForm rhs = rho_chain_source(euler_lagrange(P, orig), setup);
    REQUIRE(lhs.components.size() == rhs.components.size());
    for (std::size_t a = 0; a < lhs.components.size(); ++a)
      CHECK(equal(lhs.components[a], rhs.components[a], red));
  }
}

TEST_CASE("rho_chain_source: spec examples") {
  ReductionSetup setup = so3_setup();
  const BundleChart& orig = setup.chart.original;
  const BundleChart& red = setup.chart.reduced;
  SUBCASE("Laplacian pair") {
    SourceForm el =
        euler_lagrange(parse("u1*(u2_xx+u2_yy+u2_zz)", orig), orig);
    SourceForm r = rho_chain_source(el, setup);
    CHECK(equal(r.components[0], parse("v2_rr + 2/r*v2_r", red), red));
    CHECK(equal(r.components[1], parse("v1_rr + 2/r*v1_r", red), red));
    CHECK(r.volume_coeff == parse("r^2", red));
  }
  SUBCASE("zero source form") {
    SourceForm z{{Expr::zero(), Expr::zero()}, Expr::one()};
    SourceForm r = rho_chain_source(z, setup);
    CHECK(r.components[0].is_zero());
    CHECK(r.components[1].is_zero());
  }
  SUBCASE("divergences map to zero") {
    RandomExprGen gen(orig, 41);
    Expr f = gen.poly(2, 2);
    HorizontalForm k2(2);
    k2.add({1, 2}, f);
    Expr div = d_H(k2, orig).coefficient({0, 1, 2});
    SourceForm el = euler_lagrange(div, orig);
    SourceForm r = rho_chain_source(el, setup);
    for (const Expr& cmp : r.components) CHECK(cmp.is_zero());
  }
}

TEST_CASE("l2_hat: paper example and structural properties") {
  ReductionSetup setup = so3_setup();
  const BundleChart& orig = setup.chart.original;
  const BundleChart& red = setup.chart.reduced;
  OmegaStructure omega = so3_omega(orig);
  Expr P = parse("u1*(u2_xx+u2_yy+u2_zz)", orig);
  Expr Q = parse("u1*u2", orig);

  SUBCASE("reproduces the displayed reduced bracket") {
    L2HatResult r = l2_hat(P, Q, {}, {}, setup, omega);
    Expr expect =
        parse("(r*v2_rr + 2*v2_r)*v1 - (r*v1_rr + 2*v1_r)*v2", red);
    CHECK(equal(r.coeff, expect, red));
    CHECK(r.omega_path_checked);
    CHECK(equal(r.omega_path_coeff, expect, red));
  }
  SUBCASE("claimed reduced inputs are verified") {
    Expr pbar = parse("v1*(v2_rr + 2/r*v2_r)", red);
    CHECK_NOTHROW(l2_hat(P, Q, pbar, parse("v1*v2", red), setup, omega));
    CHECK_THROWS_AS(
        l2_hat(P, Q, parse("v1*v2_rr", red), {}, setup, omega),
        representative_mismatch);
  }
  SUBCASE("skew") {
    L2HatResult r = l2_hat(P, P, {}, {}, setup, omega);
    CHECK(is_zero(r.coeff, red));
  }
  SUBCASE("d_H-exact representatives produce zero") {
    RandomExprGen gen(orig, 43);
    HorizontalForm kappa = radial_two_form(orig).scaled(gen.so3_invariant());
    Expr div = d_H(kappa, orig).coefficient({0, 1, 2});
    L2HatResult r = l2_hat(div, Q, {}, {}, setup, omega);
    CHECK(is_zero(r.coeff, red));
  }
}

TEST_CASE("verify_l2hat_well_defined") {
  ReductionSetup setup = so3_setup(8);
  const BundleChart& orig = setup.chart.original;
  OmegaStructure omega = so3_omega(orig);
  Expr P = parse("u1*(u2_xx+u2_yy+u2_zz)", orig);
  Expr Q = parse("u1*u2", orig);

  SUBCASE("identical representatives") {
    CHECK(verify_l2hat_well_defined(P, P, Q, setup, omega));
  }
  SUBCASE("d_H-exact shift with vanishing rho_X") {
    // eta = (x dx + y dy + z dz) ^ d_H u1 annihilates the 2-chain, so
    // kappa = d_H eta is exact, rho_X-null, and E-annihilated.
    HorizontalForm radial1(1);
    radial1.add({0}, parse("x", orig));
    radial1.add({1}, parse("y", orig));
    radial1.add({2}, parse("z", orig));
    HorizontalForm du(1);
    for (int i = 0; i < 3; ++i)
      du.add({i}, total_derivative(parse("u1", orig), i, orig));
    HorizontalForm eta = wedge(radial1, du, 3);
    REQUIRE(is_invariant(eta, setup.generators, orig));
    Expr kappa = d_H(eta, orig).coefficient({0, 1, 2});
    CHECK(verify_l2hat_well_defined(P + kappa, P, Q, setup, omega));
  }
  SUBCASE("non-invariant perturbation fails the precondition") {
    CHECK_THROWS(verify_l2hat_well_defined(P + parse("u1_x", orig), P, Q,
                                           setup, omega));
  }
}
