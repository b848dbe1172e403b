#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

#include "jetred/errors.hpp"
#include "jetred/parse.hpp"

using namespace jetred;
using namespace jetred::testing;

TEST_CASE("grammar: spec examples") {
  BundleChart c = so3_chart();
  SUBCASE("sum of jet variables") {
    Expr e = parse("u1_xx + u1_yy", c);
    CHECK(e.kind() == NodeKind::sum);
    CHECK(e.children().size() == 2);
  }
  SUBCASE("adapted chart product") {
    BundleChart ad({"r"}, {"v1"});
    Expr e = parse("2/r * v1_r", ad);
    CHECK(e.kind() == NodeKind::product);
    CHECK(equal(e, parse("2*v1_r*r^(-1)", ad), ad));
  }
  SUBCASE("sqrt sugar") {
    Expr e = parse("(x^2+y^2+z^2)^(1/2)", c);
    CHECK(e.kind() == NodeKind::power);
    CHECK(e.exponent() == Rat(1, 2));
    CHECK(e == parse("sqrt(x^2+y^2+z^2)", c));
  }
}

TEST_CASE("precedence and associativity") {
  BundleChart c = so3_chart();
  CHECK(parse("x+y*z", c) == parse("x+(y*z)", c));
  CHECK(parse("x-y-z", c) == parse("(x-y)-z", c));
  CHECK(parse("x/y/z", c) == parse("(x/y)/z", c));
  CHECK(parse("x^2^3", c) == parse("x^(2^3)", c));  // hmm: right-assoc
  CHECK(parse("-x^2", c) == -parse("x^2", c));
  CHECK(parse("2/3*x", c) == parse("(2/3)*x", c));
}

TEST_CASE("jet suffix decomposition uses longest base-name match") {
  BundleChart ad = so3_adapted_chart();
  Expr e = parse("v1_xhr", ad);
  CHECK(e.var().is_jet());
  CHECK(e.var().jet.order() == 2);
  CHECK(e == parse("v1_rxh", ad));  // sorted multiset
  CHECK(parse("v1_rr", ad).var().jet.order() == 2);
}

TEST_CASE("parse errors carry positions and identifiers") {
  BundleChart c = so3_chart();
  CHECK_THROWS_AS(parse("x + ", c), parse_error);
  CHECK_THROWS_AS(parse("x + )", c), parse_error);
  CHECK_THROWS_AS(parse("x y", c), parse_error);
  try {
    parse("x + nope", c);
    FAIL("expected unknown identifier");
  } catch (const unknown_identifier_error& e) {
    CHECK(e.identifier() == "nope");
    CHECK(e.position() == 4);
  }
  // calls only with allow_calls
  CHECK_THROWS_AS(parse("exp(x)", c), parse_error);
  CHECK(parse("exp(x)", c, true).kind() == NodeKind::call);
  // jet order above the cap
  BundleChart tight({"x"}, {"u1"}, 2);
  CHECK_THROWS_AS(parse("u1_xxx", tight), parse_error);
}

TEST_CASE("parse/format roundtrip on random expressions") {
  BundleChart c = so3_chart();
  RandomExprGen gen(c, 1234);
  for (int k = 0; k < 200; ++k) {
    Expr e = gen.poly(4, 3);
    CHECK(parse(format(e, c), c) == e);
    CHECK(parse(format(e, c, /*full_parens=*/true), c) == e);
  }
}

TEST_CASE("roundtrip covers radicals, quotients, and calls") {
  BundleChart c = so3_chart();
  for (const char* s :
       {"sqrt(x^2+y^2+z^2)", "x/(x+y)", "2/3*u1_x", "-x", "(x+y)^(-2)",
        "x^(5/2)", "1/2*x", "u1_xx - 2*u1_xy + u1_yy", "2^(1/2)*x"}) {
    Expr e = parse(s, c);
    CHECK(parse(format(e, c), c) == e);
    CHECK(parse(format(e, c, true), c) == e);
  }
  Expr e = parse("exp(-(x^2+y^2+z^2))*sin(x)", c, true);
  CHECK(parse(format(e, c), c, true) == e);
}
