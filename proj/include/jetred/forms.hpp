#pragma once

#include "jetred/chart.hpp"
#include "jetred/expr.hpp"

#include <map>
#include <vector>

namespace jetred {

// xi^i D_i with local-function components.
struct TotalVectorField {
  std::vector<Expr> components;
};

// Horizontal (r,0)-form: coefficients keyed by strictly increasing index
// tuples; insertion sign-normalizes arbitrary tuples. Absent key = zero.
class HorizontalForm {
 public:
  explicit HorizontalForm(int degree = 0) : degree_(degree) {}
  static HorizontalForm scalar(Expr e);
  // coefficient * dx^0 ^ ... ^ dx^{n-1}
  static HorizontalForm top(Expr coeff, int n);

  int degree() const { return degree_; }
  const std::map<std::vector<int>, Expr>& components() const { return comp_; }
  Expr coefficient(std::vector<int> idx) const;  // sign-adjusted lookup
  Expr scalar_value() const;                     // degree 0 only

  // Accumulate coeff * dx^idx; idx in any order, duplicates vanish.
  void add(std::vector<int> idx, const Expr& coeff);

  bool empty() const { return comp_.empty(); }  // structurally zero

  HorizontalForm scaled(const Expr& f) const;

  friend HorizontalForm operator+(const HorizontalForm& a,
                                  const HorizontalForm& b);
  friend HorizontalForm operator-(const HorizontalForm& a,
                                  const HorizontalForm& b);

 private:
  int degree_;
  std::map<std::vector<int>, Expr> comp_;
};

// Sorts idx in place; returns the permutation sign, or 0 on repeated indices.
int sort_sign(std::vector<int>& idx);

HorizontalForm wedge(const HorizontalForm& a, const HorizontalForm& b, int n);

// Iterated interior product, first field filling the first slot.
HorizontalForm contract(const HorizontalForm& a,
                        const std::vector<TotalVectorField>& fields);

HorizontalForm d_H(const HorizontalForm& a, const BundleChart& chart);

// Source (n,1)-form E_a (theta^a ^ nu), nu = volume_coeff * d^n x.
struct SourceForm {
  std::vector<Expr> components;
  Expr volume_coeff = Expr::one();
};

}  // namespace jetred
