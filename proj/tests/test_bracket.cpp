#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

#include "jetred/bracket.hpp"
#include "jetred/errors.hpp"
#include "jetred/parse.hpp"

using namespace jetred;
using namespace jetred::testing;

TEST_CASE("omega construction validates skew-symmetry") {
  BundleChart line = line_chart();
  CHECK_THROWS_AS(OmegaStructure::create(
                      {{Expr::zero(), Expr::one()}, {Expr::one(), Expr::zero()}},
                      line),
                  validation_error);
  CHECK_NOTHROW(constant_omega(line));
}

TEST_CASE("l2_tilde: paper and derived examples") {
  SUBCASE("SO(3) Laplacian pair") {
    BundleChart c = so3_chart();
    OmegaStructure omega = so3_omega(c);
    Expr br = l2_tilde(parse("u1*(u2_xx+u2_yy+u2_zz)", c), parse("u1*u2", c),
                       omega, c);
    Expr expect = parse(
        "sqrt(x^2+y^2+z^2)*((u2_xx+u2_yy+u2_zz)*u1-(u1_xx+u1_yy+u1_zz)*u2)",
        c);
    CHECK(equal(br, expect, c));
  }
  SUBCASE("skew: l2(P,P) = 0 on random inputs") {
    BundleChart line = line_chart();
    OmegaStructure omega = constant_omega(line);
    RandomExprGen gen(line, 3);
    for (int k = 0; k < 30; ++k) {
      Expr p = gen.poly();
      CHECK(l2_tilde(p, p, omega, line).is_zero());
    }
  }
  SUBCASE("constant omega, hand expansion") {
    BundleChart line = line_chart();
    OmegaStructure omega = constant_omega(line);
    Expr br = l2_tilde(parse("u1_x^2", line), parse("u2^2", line), omega, line);
    CHECK(br == parse("-4*u1_xx*u2", line));
  }
}

TEST_CASE("l2_tilde is bilinear and skew on random inputs") {
  BundleChart line = line_chart();
  OmegaStructure omega = constant_omega(line);
  RandomExprGen gen(line, 4);
  for (int k = 0; k < 25; ++k) {
    Expr p = gen.poly(2, 2), p2 = gen.poly(2, 2), q = gen.poly(2, 2);
    Expr a = Expr::rational(gen.coeff()), b = Expr::rational(gen.coeff());
    CHECK(l2_tilde(p, q, omega, line) == -l2_tilde(q, p, omega, line));
    CHECK(l2_tilde(a * p + b * p2, q, omega, line) ==
          a * l2_tilde(p, q, omega, line) + b * l2_tilde(p2, q, omega, line));
  }
}

TEST_CASE("condition (i) in the strong sense: l2(d_H image, h) = 0") {
  BundleChart line = line_chart(10);
  OmegaStructure omega = constant_omega(line);
  RandomExprGen gen(line, 5);
  for (int k = 0; k < 25; ++k) {
    Expr div = total_derivative(gen.poly(2, 2), 0, line);
    Expr h = gen.poly(2, 2);
    CHECK(l2_tilde(div, h, omega, line).is_zero());
  }
}

TEST_CASE("jacobiator: spec examples") {
  BundleChart line = line_chart();
  OmegaStructure omega = constant_omega(line);
  SUBCASE("identical arguments vanish") {
    Expr u1 = parse("u1", line);
    CHECK(jacobiator(u1, u1, u1, omega, line).is_zero());
  }
  SUBCASE("derived triple is a total derivative") {
    Expr P = parse("u1*u2", line), Q = parse("u1^2", line),
         R = parse("u2^2", line);
    CHECK(check_jacobiator_exact(P, Q, R, omega, line));
  }
  SUBCASE("a total-derivative slot kills its terms") {
    RandomExprGen gen(line, 6);
    Expr f = total_derivative(gen.poly(2, 2), 0, line);
    Expr Q = parse("u1*u2_x", line), R = parse("u2*u1_x", line);
    CHECK(jacobiator(f, Q, R, omega, line).is_zero());
  }
  SUBCASE("equal first arguments") {
    Expr P = parse("u1_x*u2", line);
    Expr R = parse("u2_x^2", line);
    CHECK(check_jacobiator_exact(P, P, R, omega, line));
  }
}

TEST_CASE("automorphism validation") {
  BundleChart line = line_chart();
  ExprMatrix I2{{Expr::one(), Expr::zero()}, {Expr::zero(), Expr::one()}};
  SUBCASE("bad inverse is rejected") {
    CHECK_THROWS_AS(Automorphism::create({parse("2*x", line)},
                                         {parse("x/3", line)}, I2, line),
                    validation_error);
  }
  SUBCASE("singular fiber matrix is rejected") {
    ExprMatrix sing{{Expr::one(), Expr::one()}, {Expr::one(), Expr::one()}};
    CHECK_THROWS_AS(Automorphism::create({parse("x", line)},
                                         {parse("x", line)}, sing, line),
                    validation_error);
  }
}

TEST_CASE("pullback through the prolonged chain rule") {
  BundleChart line = line_chart();
  ExprMatrix I2{{Expr::one(), Expr::zero()}, {Expr::zero(), Expr::one()}};
  Automorphism scale = Automorphism::create({parse("2*x", line)},
                                            {parse("x/2", line)}, I2, line);
  // u~_x pulls back to (1/2) u_x under x~ = 2x
  CHECK(pullback(parse("u1_x", line), scale, line) ==
        parse("1/2*u1_x", line));
  CHECK(pullback(parse("u1_xx", line), scale, line) ==
        parse("1/4*u1_xx", line));
  CHECK(pullback(parse("x", line), scale, line) == parse("2*x", line));
}

TEST_CASE("check_covariance: spec examples") {
  SUBCASE("identity automorphism") {
    BundleChart c = so3_chart();
    OmegaStructure omega = so3_omega(c);
    ExprMatrix I2{{Expr::one(), Expr::zero()}, {Expr::zero(), Expr::one()}};
    Automorphism id = Automorphism::create(
        {parse("x", c), parse("y", c), parse("z", c)},
        {parse("x", c), parse("y", c), parse("z", c)}, I2, c);
    CHECK(check_covariance(omega, id, c));
  }
  SUBCASE("3-4-5 rotation about the z axis") {
    BundleChart c = so3_chart();
    OmegaStructure omega = so3_omega(c);
    ExprMatrix I2{{Expr::one(), Expr::zero()}, {Expr::zero(), Expr::one()}};
    Automorphism rot = Automorphism::create(
        {parse("(3*x-4*y)/5", c), parse("(4*x+3*y)/5", c), parse("z", c)},
        {parse("(3*x+4*y)/5", c), parse("(-4*x+3*y)/5", c), parse("z", c)},
        I2, c);
    CHECK(check_covariance(omega, rot, c));
  }
  SUBCASE("base scaling fails for constant omega") {
    BundleChart line = line_chart();
    OmegaStructure omega = constant_omega(line);
    ExprMatrix I2{{Expr::one(), Expr::zero()}, {Expr::zero(), Expr::one()}};
    Automorphism scale = Automorphism::create({parse("2*x", line)},
                                              {parse("x/2", line)}, I2, line);
    CHECK_FALSE(check_covariance(omega, scale, line));
  }
}

TEST_CASE("covariant automorphisms commute with l2_tilde (Theorem 3.4 level)") {
  // omega^{12} = x is covariant for x~ = 2x: det(J) A A omega = 2x = omega o psi.
  BundleChart line = line_chart(10);
  OmegaStructure omega = OmegaStructure::create(
      {{Expr::zero(), parse("x", line)}, {parse("-x", line), Expr::zero()}},
      line);
  ExprMatrix I2{{Expr::one(), Expr::zero()}, {Expr::zero(), Expr::one()}};
  Automorphism scale = Automorphism::create({parse("2*x", line)},
                                            {parse("x/2", line)}, I2, line);
  REQUIRE(check_covariance(omega, scale, line));
  Expr det = base_jacobian_det(scale, line);
  RandomExprGen gen(line, 8);
  for (int k = 0; k < 15; ++k) {
    Expr P = gen.poly(2, 2), Q = gen.poly(2, 2);
    // pullback of the top form P nu multiplies the coefficient by det J
    Expr lhs = l2_tilde(det * pullback(P, scale, line),
                        det * pullback(Q, scale, line), omega, line);
    Expr rhs = det * pullback(l2_tilde(P, Q, omega, line), scale, line);
    CHECK(equal(lhs, rhs, line));
  }
}
