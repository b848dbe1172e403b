#include "jetred/prolong.hpp"

#include "jetred/errors.hpp"
#include "jetred/jet_ops.hpp"

namespace jetred {

ExprMatrix jacobian(const std::vector<Expr>& maps, int nvars) {
  ExprMatrix j(maps.size(), std::vector<Expr>(nvars));
  for (std::size_t r = 0; r < maps.size(); ++r)
    for (int c = 0; c < nvars; ++c)
      j[r][c] = partial(maps[r], VarRef::base_var(c));
  return j;
}

Expr determinant(const ExprMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return Expr::one();
  if (n == 1) return m[0][0];
  std::vector<Expr> parts;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    ExprMatrix minor(n - 1, std::vector<Expr>(n - 1));
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == c) continue;
        minor[r - 1][cc++] = m[r][k];
      }
    }
    Expr t = m[0][c] * determinant(minor);
    if (c % 2 == 1) t = -t;
    parts.push_back(std::move(t));
  }
  return Expr::sum(std::move(parts));
}

ExprMatrix invert(const ExprMatrix& m) {
  const std::size_t n = m.size();
  Expr det = determinant(m);
  if (det.is_zero()) throw error("matrix inverse: determinant is zero");
  ExprMatrix inv(n, std::vector<Expr>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      ExprMatrix minor(n - 1, std::vector<Expr>(n - 1));
      std::size_t rr = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == c) continue;  // adjugate: delete row c, column r
        std::size_t cc = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == r) continue;
          minor[rr][cc++] = m[i][j];
        }
        ++rr;
      }
      Expr cof = determinant(minor);
      if ((r + c) % 2 == 1) cof = -cof;
      inv[r][c] = cof / det;
    }
  return inv;
}

JetSubstitution::JetSubstitution(const BundleChart& src, const BundleChart& dst,
                                 std::vector<Expr> base_subst, ExprMatrix dmat,
                                 ExprMatrix fiber)
    : src_(src), dst_(dst), base_subst_(std::move(base_subst)),
      dmat_(std::move(dmat)), fiber_(std::move(fiber)) {
  if (static_cast<int>(base_subst_.size()) != src_.base_dim() ||
      static_cast<int>(dmat_.size()) != src_.base_dim() ||
      static_cast<int>(fiber_.size()) != src_.fiber_dim())
    throw error("jet substitution: dimension mismatch");
}

Expr JetSubstitution::jet_image(int a, const MultiIndex& I) const {
  Key key{a, I};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  Expr result;
  if (I.empty()) {
    std::vector<Expr> parts;
    for (int b = 0; b < dst_.fiber_dim(); ++b) {
      if (fiber_[a][b].is_zero()) continue;
      parts.push_back(fiber_[a][b] * Expr::variable(VarRef::jet_var(b)));
    }
    result = Expr::sum(std::move(parts));
  } else {
    const int i = I.indices().front();
    std::vector<int> rest(I.indices().begin() + 1, I.indices().end());
    Expr inner = jet_image(a, MultiIndex(std::move(rest)));
    std::vector<Expr> parts;
    for (int k = 0; k < dst_.base_dim(); ++k) {
      if (dmat_[i][k].is_zero()) continue;
      parts.push_back(dmat_[i][k] * total_derivative(inner, k, dst_));
    }
    result = Expr::sum(std::move(parts));
  }
  cache_.emplace(std::move(key), result);
  return result;
}

Expr JetSubstitution::apply(const Expr& e) const {
  switch (e.kind()) {
    case NodeKind::rational:
      return e;
    case NodeKind::var: {
      const VarRef& v = e.var();
      if (v.is_base()) return base_subst_.at(v.index);
      return jet_image(v.index, v.jet);
    }
    case NodeKind::sum: {
      std::vector<Expr> kids;
      kids.reserve(e.children().size());
      for (const Expr& k : e.children()) kids.push_back(apply(k));
      return Expr::sum(std::move(kids));
    }
    case NodeKind::product: {
      std::vector<Expr> kids;
      kids.reserve(e.children().size());
      for (const Expr& k : e.children()) kids.push_back(apply(k));
      return Expr::product(std::move(kids));
    }
    case NodeKind::power:
      return Expr::power(apply(e.base()), e.exponent());
    case NodeKind::call:
      return Expr::call(e.fn(), apply(e.base()));
  }
  return e;
}

}  // namespace jetred
