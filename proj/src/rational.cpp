#include "jetred/rational.hpp"

#include "jetred/errors.hpp"

namespace jetred {

Rat pow_rat(const Rat& base, const Int& exp) {
  if (exp == 0) return Rat(1);
  if (base == 0) {
    if (exp > 0) return Rat(0);
    throw eval_error("zero raised to a negative power");
  }
  Int e = abs(exp);
  Rat acc(1), b = base;
  while (e > 0) {
    if (bit_test(e, 0)) acc *= b;
    b *= b;
    e >>= 1;
  }
  if (exp < 0) acc = Rat(1) / acc;
  return acc;
}

std::optional<Int> exact_nth_root(const Int& n, unsigned q) {
  if (q == 1) return n;
  if (n == 0) return Int(0);
  if (n < 0) {
    if (q % 2 == 0) return std::nullopt;
    auto r = exact_nth_root(-n, q);
    if (!r) return std::nullopt;
    return -*r;
  }
  // Binary search for the integer q-th root, then verify exactness.
  Int lo = 1, hi = 1;
  while (pow_rat(Rat(hi), Int(q)) < Rat(n)) hi <<= 1;
  while (lo < hi) {
    Int mid = (lo + hi) / 2;
    Rat p = pow_rat(Rat(mid), Int(q));
    if (p == Rat(n))
      return mid;
    else if (p < Rat(n))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (pow_rat(Rat(lo), Int(q)) == Rat(n)) return lo;
  return std::nullopt;
}

std::optional<Rat> exact_pow(const Rat& base, const Rat& exp) {
  if (is_integer(exp)) return pow_rat(base, numerator(exp));
  if (base == 0) {
    if (exp > 0) return Rat(0);
    throw eval_error("zero raised to a negative power");
  }
  const Int p = numerator(exp);
  const Int qi = denominator(exp);
  if (qi > 64) return std::nullopt;  // enormous root orders never arise here
  unsigned q = qi.convert_to<unsigned>();
  Rat pw = pow_rat(base, p);
  auto rn = exact_nth_root(numerator(pw), q);
  if (!rn) return std::nullopt;
  auto rd = exact_nth_root(denominator(pw), q);
  if (!rd) return std::nullopt;
  return Rat(*rn, *rd);
}

std::string to_string(const Rat& r) {
  std::string s = numerator(r).str();
  if (!is_integer(r)) s += "/" + denominator(r).str();
  return s;
}

}  // namespace jetred
