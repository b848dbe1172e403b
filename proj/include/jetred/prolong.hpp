#pragma once

#include "jetred/chart.hpp"
#include "jetred/expr.hpp"

#include <map>
#include <vector>

namespace jetred {

using ExprMatrix = std::vector<std::vector<Expr>>;

// Jacobian d maps[r] / d base-var c over the given chart.
ExprMatrix jacobian(const std::vector<Expr>& maps, int nvars);

Expr determinant(const ExprMatrix& m);

// Adjugate-based symbolic inverse; throws if the determinant normalizes to
// the zero expression.
ExprMatrix invert(const ExprMatrix& m);

// Prolonged chain-rule rewrite shared by automorphism pullbacks and adapted
// coordinate changes. A source-chart expression is rewritten over the
// destination chart via
//   base var x^i        -> base_subst[i]
//   u^a (order 0)       -> sum_b fiber[a][b] * v^b
//   u^a_{iI}            -> sum_k dmat[i][k] * D^dst_k( image of u^a_I )
// with base_subst, dmat, fiber all expressions over the destination chart.
class JetSubstitution {
 public:
  JetSubstitution(const BundleChart& src, const BundleChart& dst,
                  std::vector<Expr> base_subst, ExprMatrix dmat,
                  ExprMatrix fiber);

  Expr apply(const Expr& e) const;

 private:
  Expr jet_image(int a, const MultiIndex& I) const;

  const BundleChart& src_;
  const BundleChart& dst_;
  std::vector<Expr> base_subst_;
  ExprMatrix dmat_;
  ExprMatrix fiber_;
  struct Key {
    int a;
    MultiIndex I;
    bool operator<(const Key& o) const {
      if (a != o.a) return a < o.a;
      return compare(I, o.I) < 0;
    }
  };
  mutable std::map<Key, Expr> cache_;
};

}  // namespace jetred
