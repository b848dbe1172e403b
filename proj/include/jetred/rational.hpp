#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace jetred {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

inline bool fits_int(const Rat& r, long long& out) {
  if (!is_integer(r)) return false;
  const Int n = numerator(r);
  if (n < std::numeric_limits<long long>::min() ||
      n > std::numeric_limits<long long>::max())
    return false;
  out = n.convert_to<long long>();
  return true;
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// b^e for integer e (e may be negative; b must be nonzero then).
Rat pow_rat(const Rat& base, const Int& exp);

// Exact q-th root of n if n is a perfect q-th power (q >= 1). Negative n is
// allowed for odd q.
std::optional<Int> exact_nth_root(const Int& n, unsigned q);

// Exact value of base^exp over the rationals, when it exists.
std::optional<Rat> exact_pow(const Rat& base, const Rat& exp);

std::string to_string(const Rat& r);

}  // namespace jetred
