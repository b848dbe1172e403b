#include "jetred/forms.hpp"

#include "jetred/errors.hpp"
#include "jetred/jet_ops.hpp"

#include <algorithm>

namespace jetred {

int sort_sign(std::vector<int>& idx) {
  int sign = 1;
  // insertion sort, counting transpositions
  for (std::size_t i = 1; i < idx.size(); ++i) {
    int v = idx[i];
    std::size_t j = i;
    while (j > 0 && idx[j - 1] > v) {
      idx[j] = idx[j - 1];
      --j;
      sign = -sign;
    }
    idx[j] = v;
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

HorizontalForm HorizontalForm::scalar(Expr e) {
  HorizontalForm f(0);
  f.add({}, e);
  return f;
}

HorizontalForm HorizontalForm::top(Expr coeff, int n) {
  HorizontalForm f(n);
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  f.add(std::move(idx), coeff);
  return f;
}

Expr HorizontalForm::coefficient(std::vector<int> idx) const {
  int s = sort_sign(idx);
  if (s == 0) return Expr::zero();
  auto it = comp_.find(idx);
  if (it == comp_.end()) return Expr::zero();
  return s == 1 ? it->second : -it->second;
}

Expr HorizontalForm::scalar_value() const {
  if (degree_ != 0) throw degree_error("scalar_value on form of degree > 0");
  return coefficient({});
}

void HorizontalForm::add(std::vector<int> idx, const Expr& coeff) {
  if (static_cast<int>(idx.size()) != degree_)
    throw degree_error("index tuple length does not match form degree");
  if (coeff.is_zero()) return;
  int s = sort_sign(idx);
  if (s == 0) return;
  Expr c = s == 1 ? coeff : -coeff;
  auto it = comp_.find(idx);
  if (it == comp_.end()) {
    comp_.emplace(std::move(idx), std::move(c));
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) comp_.erase(it);
  }
}

HorizontalForm HorizontalForm::scaled(const Expr& f) const {
  HorizontalForm out(degree_);
  for (const auto& [idx, c] : comp_) out.add(idx, f * c);
  return out;
}

HorizontalForm operator+(const HorizontalForm& a, const HorizontalForm& b) {
  if (a.degree() != b.degree())
    throw degree_error("adding forms of different degrees");
  HorizontalForm out = a;
  for (const auto& [idx, c] : b.comp_) out.add(idx, c);
  return out;
}

HorizontalForm operator-(const HorizontalForm& a, const HorizontalForm& b) {
  return a + b.scaled(Expr::rational(Rat(-1)));
}

HorizontalForm wedge(const HorizontalForm& a, const HorizontalForm& b, int n) {
  if (a.degree() + b.degree() > n)
    throw degree_error("wedge degree exceeds base dimension");
  HorizontalForm out(a.degree() + b.degree());
  for (const auto& [ia, ca] : a.components())
    for (const auto& [ib, cb] : b.components()) {
      std::vector<int> idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add(std::move(idx), ca * cb);
    }
  return out;
}

HorizontalForm contract(const HorizontalForm& a,
                        const std::vector<TotalVectorField>& fields) {
  if (static_cast<int>(fields.size()) > a.degree())
    throw degree_error("contracting more vector fields than the form degree");
  HorizontalForm cur = a;
  for (const TotalVectorField& X : fields) {
    HorizontalForm next(cur.degree() - 1);
    for (const auto& [idx, c] : cur.components()) {
      for (std::size_t p = 0; p < idx.size(); ++p) {
        const Expr& xi = X.components.at(idx[p]);
        if (xi.is_zero()) continue;
        std::vector<int> rest;
        rest.reserve(idx.size() - 1);
        for (std::size_t k = 0; k < idx.size(); ++k)
          if (k != p) rest.push_back(idx[k]);
        Expr term = xi * c;
        if (p % 2 == 1) term = -term;
        next.add(std::move(rest), term);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

HorizontalForm d_H(const HorizontalForm& a, const BundleChart& chart) {
  const int n = chart.base_dim();
  if (a.degree() >= n)
    throw degree_error("d_H of a top-degree form");
  HorizontalForm out(a.degree() + 1);
  for (const auto& [idx, c] : a.components()) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> nidx;
      nidx.reserve(idx.size() + 1);
      nidx.push_back(i);
      nidx.insert(nidx.end(), idx.begin(), idx.end());
      out.add(std::move(nidx), total_derivative(c, i, chart));
    }
  }
  return out;
}

}  // namespace jetred
