#pragma once

#include "jetred/rational.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace jetred {

// Sorted multiset of base-coordinate indices. u^a_{ij} = u^a_{ji} is enforced
// by keeping the indices sorted, so equal mixed partials are one variable.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> indices);

  int order() const { return static_cast<int>(ix_.size()); }
  bool empty() const { return ix_.empty(); }
  const std::vector<int>& indices() const { return ix_; }

  MultiIndex with(int i) const;     // insert one index, re-sorted
  bool contains(int i) const;
  bool contains_less_than(int bound) const;  // any index < bound
  MultiIndex shifted(int delta) const;       // all indices + delta

  friend int compare(const MultiIndex& a, const MultiIndex& b);
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.ix_ == b.ix_;
  }

 private:
  std::vector<int> ix_;
};

struct VarRef {
  enum class Kind { base, jet };

  Kind kind = Kind::base;
  int index = 0;    // base index, or fiber index for jets
  MultiIndex jet;   // jets only; empty multi-index means u^a itself

  static VarRef base_var(int i) { return VarRef{Kind::base, i, {}}; }
  static VarRef jet_var(int fiber, MultiIndex mi = {}) {
    return VarRef{Kind::jet, fiber, std::move(mi)};
  }

  bool is_base() const { return kind == Kind::base; }
  bool is_jet() const { return kind == Kind::jet; }
  int order() const { return is_jet() ? jet.order() : 0; }
};

int compare(const VarRef& a, const VarRef& b);
inline bool operator==(const VarRef& a, const VarRef& b) {
  return compare(a, b) == 0;
}
inline bool operator<(const VarRef& a, const VarRef& b) {
  return compare(a, b) < 0;
}

enum class NodeKind : unsigned char { rational, var, call, power, product, sum };

// Transcendental calls are admitted for numeric test sections only; the
// symbolic chart grammar rejects them at parse time.
enum class CallFn : unsigned char { exp, sin, cos };

struct ExprNode;

// Immutable normalized expression. Copies are cheap (shared subtrees).
//
// Normal form invariants:
//  - sums: >= 2 terms, no nested sums, like terms combined, sorted, no zeros;
//  - products: optional leading rational coefficient plus >= 1 sorted
//    non-rational factors, same-base powers combined, no nested products,
//    no sum factors (products of sums are expanded);
//  - powers: exponent is rational, never 0 or 1; base is a variable, a call,
//    a sum (with non-positive-integer exponent), or a rational that is not an
//    exact rational power;
//  - power laws (ab)^e = a^e b^e and (a^m)^e = a^(me) are applied assuming
//    positive bases wherever fractional exponents occur (principal branch on
//    the valid region; see README).
class Expr {
 public:
  Expr();  // zero

  static Expr rational(Rat r);
  static Expr integer(long long n) { return rational(Rat(n)); }
  static Expr variable(VarRef v);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(const Expr& base, const Rat& exponent);
  static Expr call(CallFn fn, const Expr& argument);

  static const Expr& zero();
  static const Expr& one();

  NodeKind kind() const;
  bool is_rational() const { return kind() == NodeKind::rational; }
  bool is_zero() const;
  bool is_one() const;

  const Rat& rational_value() const;        // rational nodes
  const VarRef& var() const;                // var nodes
  const std::vector<Expr>& children() const;  // sum/product
  const Expr& base() const;                 // power base / call argument
  const Rat& exponent() const;              // power nodes
  CallFn fn() const;                        // call nodes

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  friend int compare(const Expr& a, const Expr& b);

 private:
  friend struct ExprFactory;
  explicit Expr(std::shared_ptr<const ExprNode> n) : n_(std::move(n)) {}
  std::shared_ptr<const ExprNode> n_;
};

inline bool operator==(const Expr& a, const Expr& b) {
  return compare(a, b) == 0;
}
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

Expr pow(const Expr& base, long long num, long long den = 1);

// Exact partial derivative treating every other variable as independent.
Expr partial(const Expr& e, const VarRef& v);

// Simultaneous, non-recursive substitution followed by normalization.
Expr substitute(const Expr& e, const std::map<VarRef, Expr>& bindings);

// IEEE double evaluation. Throws eval_error on unbound variables, division
// by zero, negative radicands of fractional powers, or non-finite results.
double evaluate(const Expr& e, const std::map<VarRef, double>& point);

void collect_vars(const Expr& e, std::set<VarRef>& out);
std::set<VarRef> variables(const Expr& e);
bool depends_on(const Expr& e, const VarRef& v);
int max_jet_order(const Expr& e);
bool contains_call(const Expr& e);

// True if some power node has a sum, call, or non-exact rational base, i.e.
// structural nonzero-ness of a normal form is not conclusive for inequality.
bool has_opaque_power(const Expr& e);

// Multiplies away negative powers of sum-based atoms (common-denominator
// clearing). Preserves the zero set on the region where denominators are
// nonzero.
Expr clear_denominators(const Expr& e);

}  // namespace jetred
