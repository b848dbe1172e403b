#pragma once

#include "jetred/chart.hpp"
#include "jetred/expr.hpp"

#include <string>

namespace jetred {

// Expression grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := integer | identifier | '(' expr ')' | 'sqrt' '(' expr ')'
// Identifiers are base-variable names or jet variables written
// <fiber>_<baseletters> (e.g. u1_xx); the bare fiber name is the order-0 jet
// variable. The suffix is decomposed greedily, longest base name first.
// With allow_calls, exp/sin/cos are accepted (numeric section path only).
Expr parse(const std::string& text, const BundleChart& chart,
           bool allow_calls = false);

// Precedence-aware rendering; parse(format(e)) == e on normalized input.
// full_parens wraps every compound subexpression (serialized form).
std::string format(const Expr& e, const BundleChart& chart,
                   bool full_parens = false);

}  // namespace jetred
