#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

#include "jetred/errors.hpp"
#include "jetred/forms.hpp"
#include "jetred/jet_ops.hpp"
#include "jetred/parse.hpp"

using namespace jetred;
using namespace jetred::testing;

TEST_CASE("total derivative: spec examples") {
  BundleChart c = so3_chart();
  CHECK(total_derivative(parse("u1", c), 0, c) == parse("u1_x", c));
  CHECK(total_derivative(parse("x*u1_y", c), 0, c) ==
        parse("u1_y + x*u1_xy", c));
  CHECK(total_derivative(parse("u1_x^2", c), 0, c) ==
        parse("2*u1_x*u1_xx", c));
}

TEST_CASE("total derivatives commute on random expressions") {
  BundleChart c = so3_chart(8);
  RandomExprGen gen(c, 21);
  for (int k = 0; k < 60; ++k) {
    Expr e = gen.poly();
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        CHECK(total_derivative(total_derivative(e, i, c), j, c) ==
              total_derivative(total_derivative(e, j, c), i, c));
  }
}

TEST_CASE("order cap reports the needed order") {
  BundleChart tight({"x"}, {"u1"}, 2);
  Expr e = parse("u1_xx", tight);
  try {
    total_derivative(e, 0, tight);
    FAIL("expected order_cap_error");
  } catch (const order_cap_error& err) {
    CHECK(err.needed() == 3);
    CHECK(err.cap() == 2);
  }
}

TEST_CASE("euler_lagrange: spec examples") {
  SUBCASE("one-dimensional quadratic") {
    BundleChart line = line_chart(6);
    SourceForm el = euler_lagrange(parse("u1_x^2", line), line);
    CHECK(el.components[0] == parse("-2*u1_xx", line));
    CHECK(el.components[1].is_zero());
  }
  SUBCASE("total divergences are annihilated") {
    BundleChart line = line_chart(8);
    RandomExprGen gen(line, 33);
    for (int k = 0; k < 40; ++k) {
      Expr f = gen.poly();
      SourceForm el = euler_lagrange(total_derivative(f, 0, line), line);
      for (const Expr& comp : el.components) CHECK(comp.is_zero());
    }
  }
  SUBCASE("coupled Laplacian pair") {
    BundleChart c = so3_chart();
    SourceForm el = euler_lagrange(parse("u1*(u2_xx+u2_yy+u2_zz)", c), c);
    CHECK(el.components[0] == parse("u2_xx+u2_yy+u2_zz", c));
    CHECK(el.components[1] == parse("u1_xx+u1_yy+u1_zz", c));
  }
}

TEST_CASE("d_H: spec examples") {
  SUBCASE("two-dimensional example") {
    BundleChart c2({"x", "y"}, {"u1"});
    HorizontalForm a(1);
    a.add({0}, parse("u1", c2));  // u1 dx
    HorizontalForm d = d_H(a, c2);
    CHECK(d.coefficient({0, 1}) == parse("-u1_y", c2));
  }
  SUBCASE("d_H of a constant in one dimension") {
    BundleChart line = line_chart();
    HorizontalForm c0 = HorizontalForm::scalar(Expr::rational(Rat(5)));
    CHECK(d_H(c0, line).empty());
  }
  SUBCASE("top degree is an error") {
    BundleChart line = line_chart();
    HorizontalForm top = HorizontalForm::top(parse("u1", line), 1);
    CHECK_THROWS_AS(d_H(top, line), degree_error);
  }
}

TEST_CASE("d_H o d_H = 0 on random forms") {
  BundleChart c = so3_chart(8);
  RandomExprGen gen(c, 77);
  for (int k = 0; k < 40; ++k) {
    for (int deg = 0; deg <= 1; ++deg) {
      HorizontalForm a = gen.form(deg);
      CHECK(d_H(d_H(a, c), c).empty());
    }
  }
}

TEST_CASE("E o d_H = 0 on random forms") {
  BundleChart c = so3_chart(8);
  RandomExprGen gen(c, 78);
  for (int k = 0; k < 30; ++k) {
    HorizontalForm a = gen.form(2);
    HorizontalForm top = d_H(a, c);
    SourceForm el = euler_lagrange(top.coefficient({0, 1, 2}), c);
    for (const Expr& comp : el.components) CHECK(comp.is_zero());
  }
}

TEST_CASE("wedge: spec examples") {
  BundleChart c = so3_chart();
  HorizontalForm dx(1), dy(1);
  dx.add({0}, Expr::one());
  dy.add({1}, Expr::one());
  SUBCASE("dx ^ dy") {
    HorizontalForm w = wedge(dx, dy, 3);
    CHECK(w.coefficient({0, 1}) == Expr::one());
  }
  SUBCASE("dx ^ dx = 0") { CHECK(wedge(dx, dx, 3).empty()); }
  SUBCASE("antisymmetry with coefficients") {
    HorizontalForm xdy(1), ydx(1);
    xdy.add({1}, parse("x", c));
    ydx.add({0}, parse("y", c));
    HorizontalForm w = wedge(xdy, ydx, 3);
    CHECK(w.coefficient({0, 1}) == parse("-x*y", c));
  }
  SUBCASE("degree overflow") {
    HorizontalForm top = HorizontalForm::top(Expr::one(), 3);
    CHECK_THROWS_AS(wedge(top, dx, 3), degree_error);
  }
}

TEST_CASE("contract: spec examples") {
  BundleChart c = so3_chart();
  SUBCASE("rotational 2-chain on the volume") {
    HorizontalForm nu = HorizontalForm::top(Expr::one(), 3);
    TotalVectorField X1{{parse("-y", c), parse("x", c), Expr::zero()}};
    TotalVectorField X2{{Expr::zero(), parse("-z", c), parse("y", c)}};
    HorizontalForm w = contract(nu, {X1, X2});
    CHECK(w.coefficient({0}) == parse("x*y", c));
    CHECK(w.coefficient({1}) == parse("y^2", c));
    CHECK(w.coefficient({2}) == parse("y*z", c));
    // scaled by r/y this is r (x dx + y dy + z dz)
    Expr scale = parse("sqrt(x^2+y^2+z^2)/y", c);
    Expr r = parse("sqrt(x^2+y^2+z^2)", c);
    CHECK(equal(scale * w.coefficient({0}), r * parse("x", c), c));
  }
  SUBCASE("contract dx with D_x") {
    BundleChart line = line_chart();
    HorizontalForm dx(1);
    dx.add({0}, Expr::one());
    HorizontalForm w = contract(dx, {TotalVectorField{{Expr::one()}}});
    CHECK(w.scalar_value() == Expr::one());
  }
  SUBCASE("contract f dx^dy with d/dx") {
    BundleChart c2({"x", "y"}, {"u1"});
    HorizontalForm f2(2);
    f2.add({0, 1}, parse("u1", c2));
    HorizontalForm w =
        contract(f2, {TotalVectorField{{Expr::one(), Expr::zero()}}});
    CHECK(w.coefficient({1}) == parse("u1", c2));
  }
  SUBCASE("too many fields") {
    BundleChart line = line_chart();
    HorizontalForm dx(1);
    dx.add({0}, Expr::one());
    TotalVectorField X{{Expr::one()}};
    CHECK_THROWS_AS(contract(dx, {X, X}), degree_error);
  }
}

TEST_CASE("contract is multilinear and alternating") {
  BundleChart c = so3_chart();
  RandomExprGen gen(c, 11);
  HorizontalForm nu = HorizontalForm::top(Expr::one(), 3);
  for (int k = 0; k < 20; ++k) {
    TotalVectorField X{{gen.poly(2, 1), gen.poly(2, 1), gen.poly(2, 1)}};
    TotalVectorField Y{{gen.poly(2, 1), gen.poly(2, 1), gen.poly(2, 1)}};
    // alternating
    HorizontalForm xx = contract(nu, {X, X});
    for (const auto& [i, e] : xx.components()) CHECK(e.is_zero());
    // antisymmetric
    HorizontalForm xy = contract(nu, {X, Y});
    HorizontalForm yx = contract(nu, {Y, X});
    CHECK((xy + yx).empty());
    // additive in a slot
    TotalVectorField XplusY{{X.components[0] + Y.components[0],
                             X.components[1] + Y.components[1],
                             X.components[2] + Y.components[2]}};
    HorizontalForm lhs = contract(nu, {XplusY, Y});
    CHECK((lhs - xy - contract(nu, {Y, Y})).empty());
  }
}

TEST_CASE("prolonged generators: spec examples") {
  BundleChart c = so3_chart();
  Generator X1{{parse("-y", c), parse("x", c), Expr::zero()},
               {Expr::zero(), Expr::zero()}};
  CHECK(prolonged_apply(X1, parse("sqrt(x^2+y^2+z^2)", c), c).is_zero());
  CHECK(prolonged_apply(X1, parse("u1_x", c), c) == parse("-u1_y", c));
  CHECK(prolonged_apply(X1, parse("u1_xx+u1_yy+u1_zz", c), c).is_zero());
}

TEST_CASE("prolongation is a derivation") {
  BundleChart c = so3_chart(8);
  RandomExprGen gen(c, 55);
  Generator X1{{parse("-y", c), parse("x", c), Expr::zero()},
               {Expr::zero(), Expr::zero()}};
  for (int k = 0; k < 30; ++k) {
    Expr f = gen.poly(2, 2), g = gen.poly(2, 2);
    CHECK(prolonged_apply(X1, f * g, c) ==
          prolonged_apply(X1, f, c) * g + f * prolonged_apply(X1, g, c));
  }
}

TEST_CASE("is_invariant: spec examples") {
  BundleChart c = so3_chart();
  auto gens = so3_generators(c);
  CHECK(is_invariant(parse("u1_xx+u1_yy+u1_zz", c), gens, c));
  CHECK_FALSE(is_invariant(parse("u1_x", c), gens, c));
  CHECK(is_invariant(HorizontalForm::top(Expr::one(), 3), gens, c));
}
