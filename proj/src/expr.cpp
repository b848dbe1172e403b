#include "jetred/expr.hpp"

#include "jetred/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace jetred {

// ---------------------------------------------------------------- MultiIndex

MultiIndex::MultiIndex(std::vector<int> indices) : ix_(std::move(indices)) {
  std::sort(ix_.begin(), ix_.end());
}

MultiIndex MultiIndex::with(int i) const {
  std::vector<int> v = ix_;
  v.insert(std::upper_bound(v.begin(), v.end(), i), i);
  MultiIndex m;
  m.ix_ = std::move(v);
  return m;
}

bool MultiIndex::contains(int i) const {
  return std::binary_search(ix_.begin(), ix_.end(), i);
}

bool MultiIndex::contains_less_than(int bound) const {
  return !ix_.empty() && ix_.front() < bound;
}

MultiIndex MultiIndex::shifted(int delta) const {
  MultiIndex m;
  m.ix_ = ix_;
  for (int& i : m.ix_) i += delta;
  return m;
}

int compare(const MultiIndex& a, const MultiIndex& b) {
  if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
  for (std::size_t i = 0; i < a.ix_.size(); ++i)
    if (a.ix_[i] != b.ix_[i]) return a.ix_[i] < b.ix_[i] ? -1 : 1;
  return 0;
}

int compare(const VarRef& a, const VarRef& b) {
  if (a.kind != b.kind) return a.kind == VarRef::Kind::base ? -1 : 1;
  if (a.index != b.index) return a.index < b.index ? -1 : 1;
  return compare(a.jet, b.jet);
}

// ------------------------------------------------------------------ ExprNode

struct ExprNode {
  NodeKind kind = NodeKind::rational;
  Rat value;                // rational nodes; power exponent reuses `exponent`
  VarRef vref;
  std::vector<Expr> kids;   // sum/product children; power base / call arg
  Rat exponent;
  CallFn fn = CallFn::exp;
};

struct ExprFactory {
  static Expr wrap(std::shared_ptr<const ExprNode> n) {
    return Expr(std::move(n));
  }
};

namespace {

Expr wrap(std::shared_ptr<const ExprNode> n) {
  return ExprFactory::wrap(std::move(n));
}

Expr make_rational(Rat r) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::rational;
  n->value = std::move(r);
  return wrap(n);
}

Expr make_var(VarRef v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::var;
  n->vref = std::move(v);
  return wrap(n);
}

Expr make_call_node(CallFn fn, Expr arg) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::call;
  n->fn = fn;
  n->kids.push_back(std::move(arg));
  return wrap(n);
}

Expr make_power_node(Expr base, Rat e) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::power;
  n->kids.push_back(std::move(base));
  n->exponent = std::move(e);
  return wrap(n);
}

Expr make_sum_node(std::vector<Expr> kids) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::sum;
  n->kids = std::move(kids);
  return wrap(n);
}

Expr make_product_node(std::vector<Expr> kids) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::product;
  n->kids = std::move(kids);
  return wrap(n);
}

int kind_rank(NodeKind k) { return static_cast<int>(k); }

}  // namespace

// --------------------------------------------------------------------- Expr

Expr::Expr() : n_(nullptr) { *this = zero(); }

const Expr& Expr::zero() {
  static const Expr z = make_rational(Rat(0));
  return z;
}

const Expr& Expr::one() {
  static const Expr o = make_rational(Rat(1));
  return o;
}

NodeKind Expr::kind() const { return n_->kind; }
bool Expr::is_zero() const {
  return n_->kind == NodeKind::rational && n_->value == 0;
}
bool Expr::is_one() const {
  return n_->kind == NodeKind::rational && n_->value == 1;
}
const Rat& Expr::rational_value() const { return n_->value; }
const VarRef& Expr::var() const { return n_->vref; }
const std::vector<Expr>& Expr::children() const { return n_->kids; }
const Expr& Expr::base() const { return n_->kids.front(); }
const Rat& Expr::exponent() const { return n_->exponent; }
CallFn Expr::fn() const { return n_->fn; }

int compare(const Expr& a, const Expr& b) {
  if (&*a.n_ == &*b.n_) return 0;
  if (a.n_->kind != b.n_->kind)
    return kind_rank(a.n_->kind) < kind_rank(b.n_->kind) ? -1 : 1;
  switch (a.n_->kind) {
    case NodeKind::rational:
      if (a.n_->value == b.n_->value) return 0;
      return a.n_->value < b.n_->value ? -1 : 1;
    case NodeKind::var:
      return compare(a.n_->vref, b.n_->vref);
    case NodeKind::call:
      if (a.n_->fn != b.n_->fn) return a.n_->fn < b.n_->fn ? -1 : 1;
      return compare(a.n_->kids[0], b.n_->kids[0]);
    case NodeKind::power: {
      int c = compare(a.n_->kids[0], b.n_->kids[0]);
      if (c != 0) return c;
      if (a.n_->exponent == b.n_->exponent) return 0;
      return a.n_->exponent < b.n_->exponent ? -1 : 1;
    }
    case NodeKind::product:
    case NodeKind::sum: {
      const auto& ka = a.n_->kids;
      const auto& kb = b.n_->kids;
      const std::size_t m = std::min(ka.size(), kb.size());
      for (std::size_t i = 0; i < m; ++i) {
        int c = compare(ka[i], kb[i]);
        if (c != 0) return c;
      }
      if (ka.size() == kb.size()) return 0;
      return ka.size() < kb.size() ? -1 : 1;
    }
  }
  return 0;
}

Expr Expr::rational(Rat r) { return make_rational(std::move(r)); }
Expr Expr::variable(VarRef v) { return make_var(std::move(v)); }

Expr Expr::call(CallFn fn, const Expr& argument) {
  // Small exact folds; calls otherwise stay symbolic atoms.
  if (argument.is_zero()) {
    switch (fn) {
      case CallFn::exp: return one();
      case CallFn::sin: return zero();
      case CallFn::cos: return one();
    }
  }
  return make_call_node(fn, argument);
}

namespace {

// term -> (coefficient, monomial); monomial is Expr::one() for constants.
std::pair<Rat, Expr> split_term(const Expr& t) {
  switch (t.kind()) {
    case NodeKind::rational:
      return {t.rational_value(), Expr::one()};
    case NodeKind::product: {
      const auto& kids = t.children();
      if (kids.front().is_rational()) {
        Rat c = kids.front().rational_value();
        if (kids.size() == 2) return {std::move(c), kids[1]};
        std::vector<Expr> rest(kids.begin() + 1, kids.end());
        return {std::move(c), make_product_node(std::move(rest))};
      }
      return {Rat(1), t};
    }
    default:
      return {Rat(1), t};
  }
}

// Rebuild coefficient * monomial without re-normalizing (both canonical).
Expr build_term(const Rat& coeff, const Expr& mono) {
  if (coeff == 0) return Expr::zero();
  if (mono.is_one()) return Expr::rational(coeff);
  if (coeff == 1) return mono;
  std::vector<Expr> kids;
  kids.push_back(Expr::rational(coeff));
  if (mono.kind() == NodeKind::product)
    kids.insert(kids.end(), mono.children().begin(), mono.children().end());
  else
    kids.push_back(mono);
  return make_product_node(std::move(kids));
}

}  // namespace

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<std::pair<Expr, Rat>> acc;  // (monomial, coefficient)
  acc.reserve(terms.size());
  std::vector<Expr> work = std::move(terms);
  for (std::size_t w = 0; w < work.size(); ++w) {
    const Expr t = work[w];
    if (t.kind() == NodeKind::sum) {
      work.insert(work.end(), t.children().begin(), t.children().end());
      continue;
    }
    if (t.is_zero()) continue;
    auto [c, m] = split_term(t);
    acc.emplace_back(std::move(m), std::move(c));
  }
  std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) {
    return compare(a.first, b.first) < 0;
  });
  std::vector<Expr> out;
  out.reserve(acc.size());
  std::size_t i = 0;
  while (i < acc.size()) {
    Rat c = acc[i].second;
    std::size_t j = i + 1;
    while (j < acc.size() && compare(acc[j].first, acc[i].first) == 0) {
      c += acc[j].second;
      ++j;
    }
    if (c != 0) out.push_back(build_term(c, acc[i].first));
    i = j;
  }
  if (out.empty()) return zero();
  if (out.size() == 1) return out[0];
  return make_sum_node(std::move(out));
}

Expr Expr::power(const Expr& base, const Rat& e) {
  if (e == 0) return one();
  if (e == 1) return base;
  switch (base.kind()) {
    case NodeKind::rational: {
      const Rat& v = base.rational_value();
      if (v == 0) {
        if (e > 0) return zero();
        throw eval_error("division by zero: 0 raised to a negative power");
      }
      if (auto xp = exact_pow(v, e)) return rational(*xp);
      if (v < 0) return make_power_node(base, e);
      // v > 0, e = k + f with f in (0,1): fold the integer part, split the
      // base into integer numerator/denominator atoms, minimize the base.
      Int k = numerator(e) / denominator(e);
      if (numerator(e) < 0 && numerator(e) % denominator(e) != 0) k -= 1;
      Rat f = e - Rat(k);
      std::vector<Expr> parts;
      if (k != 0) parts.push_back(rational(pow_rat(v, k)));
      auto push_atom = [&parts](const Int& n, const Rat& fexp) {
        // n >= 2; reduce perfect-power bases: n = m^j -> m^(j*fexp).
        Int m = n;
        Rat fe = fexp;
        bool reduced = true;
        while (reduced) {
          reduced = false;
          unsigned maxj = static_cast<unsigned>(msb(m)) + 1;
          for (unsigned j = maxj; j >= 2; --j) {
            if (auto r = exact_nth_root(m, j)) {
              if (*r >= 2) {
                m = *r;
                fe *= j;
                reduced = true;
                break;
              }
            }
          }
        }
        // fe may have grown past 1: fold its integer part exactly.
        Int kk = numerator(fe) / denominator(fe);
        Rat ff = fe - Rat(kk);
        if (kk != 0) parts.push_back(rational(pow_rat(Rat(m), kk)));
        if (ff != 0) parts.push_back(make_power_node(rational(Rat(m)), ff));
      };
      if (numerator(v) != 1) push_atom(numerator(v), f);
      if (denominator(v) != 1) {
        parts.push_back(rational(Rat(1, denominator(v))));
        push_atom(denominator(v), 1 - f);
      }
      if (parts.empty()) return one();  // v == 1
      return product(std::move(parts));
    }
    case NodeKind::power:
      return power(base.base(), base.exponent() * e);
    case NodeKind::product: {
      std::vector<Expr> kids;
      kids.reserve(base.children().size());
      for (const Expr& k : base.children()) kids.push_back(power(k, e));
      return product(std::move(kids));
    }
    case NodeKind::sum: {
      if (is_integer(e) && e > 1 && e <= 64) {
        // expand by repeated distribution; multiplying whole sums would
        // re-merge into this same power and never terminate
        long long n = numerator(e).convert_to<long long>();
        Expr acc = one();
        for (long long k = 0; k < n; ++k) {
          std::vector<Expr> next;
          const std::vector<Expr> acc_terms =
              acc.kind() == NodeKind::sum ? acc.children()
                                          : std::vector<Expr>{acc};
          next.reserve(acc_terms.size() * base.children().size());
          for (const Expr& c : acc_terms)
            for (const Expr& t : base.children()) next.push_back(product({c, t}));
          acc = sum(std::move(next));
        }
        return acc;
      }
      return make_power_node(base, e);
    }
    default:
      return make_power_node(base, e);
  }
}

Expr Expr::product(std::vector<Expr> factors) {
  Rat coeff(1);
  std::vector<Expr> flat;
  std::vector<Expr> work = std::move(factors);
  for (std::size_t w = 0; w < work.size(); ++w) {
    const Expr f = work[w];
    switch (f.kind()) {
      case NodeKind::product:
        work.insert(work.end(), f.children().begin(), f.children().end());
        break;
      case NodeKind::rational:
        coeff *= f.rational_value();
        break;
      default:
        flat.push_back(f);
        break;
    }
  }
  if (coeff == 0) return zero();
  if (flat.empty()) return rational(coeff);

  // Group equal bases and add exponents before any expansion, so sum factors
  // cancel against their reciprocals. Unmerged factors are reused as-is
  // (they are already normalized; re-deriving them can recurse forever on
  // irreducible rational-base radicals).
  struct Entry {
    Expr base;
    Rat exp;
    Expr orig;
  };
  std::vector<Entry> entries;
  entries.reserve(flat.size());
  for (const Expr& f : flat) {
    if (f.kind() == NodeKind::power)
      entries.push_back({f.base(), f.exponent(), f});
    else
      entries.push_back({f, Rat(1), f});
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return compare(a.base, b.base) < 0;
  });
  std::vector<Expr> rebuilt;
  bool needs_retry = false;
  bool has_sum = false;
  std::size_t i = 0;
  while (i < entries.size()) {
    Rat e = entries[i].exp;
    std::size_t j = i + 1;
    while (j < entries.size() &&
           compare(entries[j].base, entries[i].base) == 0) {
      e += entries[j].exp;
      ++j;
    }
    Expr p = j == i + 1 ? entries[i].orig : power(entries[i].base, e);
    if (p.is_rational()) {
      coeff *= p.rational_value();
    } else {
      if (j > i + 1 && p.kind() == NodeKind::product) needs_retry = true;
      if (p.kind() == NodeKind::sum) has_sum = true;
      rebuilt.push_back(std::move(p));
    }
    i = j;
  }
  if (coeff == 0) return zero();
  if (needs_retry) {
    rebuilt.push_back(rational(coeff));
    return product(std::move(rebuilt));
  }
  if (has_sum) {
    // Distribute over one sum factor at a time; the recursion re-merges, so
    // reciprocal sum atoms in the remaining factors still cancel.
    std::size_t k = 0;
    while (rebuilt[k].kind() != NodeKind::sum) ++k;
    std::vector<Expr> rest;
    rest.reserve(rebuilt.size());
    for (std::size_t t = 0; t < rebuilt.size(); ++t)
      if (t != k) rest.push_back(rebuilt[t]);
    rest.push_back(rational(coeff));
    std::vector<Expr> terms;
    terms.reserve(rebuilt[k].children().size());
    for (const Expr& t : rebuilt[k].children()) {
      std::vector<Expr> l = rest;
      l.push_back(t);
      terms.push_back(product(std::move(l)));
    }
    return sum(std::move(terms));
  }
  if (rebuilt.empty()) return rational(coeff);
  std::sort(rebuilt.begin(), rebuilt.end(),
            [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  if (coeff == 1) {
    if (rebuilt.size() == 1) return rebuilt[0];
    return make_product_node(std::move(rebuilt));
  }
  std::vector<Expr> kids;
  kids.reserve(rebuilt.size() + 1);
  kids.push_back(rational(coeff));
  kids.insert(kids.end(), rebuilt.begin(), rebuilt.end());
  return make_product_node(std::move(kids));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) {
  return Expr::sum({a, Expr::product({Expr::rational(Rat(-1)), b})});
}
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
  return Expr::product({a, Expr::power(b, Rat(-1))});
}
Expr operator-(const Expr& a) {
  return Expr::product({Expr::rational(Rat(-1)), a});
}

Expr pow(const Expr& base, long long num, long long den) {
  return Expr::power(base, Rat(num, den));
}

// ------------------------------------------------------------------ calculus

Expr partial(const Expr& e, const VarRef& v) {
  switch (e.kind()) {
    case NodeKind::rational:
      return Expr::zero();
    case NodeKind::var:
      return e.var() == v ? Expr::one() : Expr::zero();
    case NodeKind::sum: {
      std::vector<Expr> parts;
      parts.reserve(e.children().size());
      for (const Expr& t : e.children()) parts.push_back(partial(t, v));
      return Expr::sum(std::move(parts));
    }
    case NodeKind::product: {
      std::vector<Expr> parts;
      const auto& kids = e.children();
      for (std::size_t i = 0; i < kids.size(); ++i) {
        Expr d = partial(kids[i], v);
        if (d.is_zero()) continue;
        std::vector<Expr> fs = kids;
        fs[i] = std::move(d);
        parts.push_back(Expr::product(std::move(fs)));
      }
      return Expr::sum(std::move(parts));
    }
    case NodeKind::power: {
      Expr db = partial(e.base(), v);
      if (db.is_zero()) return Expr::zero();
      return Expr::product({Expr::rational(e.exponent()),
                            Expr::power(e.base(), e.exponent() - 1),
                            std::move(db)});
    }
    case NodeKind::call: {
      Expr da = partial(e.base(), v);
      if (da.is_zero()) return Expr::zero();
      switch (e.fn()) {
        case CallFn::exp:
          return Expr::product({e, std::move(da)});
        case CallFn::sin:
          return Expr::product({Expr::call(CallFn::cos, e.base()),
                                std::move(da)});
        case CallFn::cos:
          return Expr::product({Expr::rational(Rat(-1)),
                                Expr::call(CallFn::sin, e.base()),
                                std::move(da)});
      }
    }
  }
  return Expr::zero();
}

Expr substitute(const Expr& e, const std::map<VarRef, Expr>& bindings) {
  switch (e.kind()) {
    case NodeKind::rational:
      return e;
    case NodeKind::var: {
      auto it = bindings.find(e.var());
      return it == bindings.end() ? e : it->second;
    }
    case NodeKind::sum: {
      std::vector<Expr> kids;
      kids.reserve(e.children().size());
      for (const Expr& k : e.children()) kids.push_back(substitute(k, bindings));
      return Expr::sum(std::move(kids));
    }
    case NodeKind::product: {
      std::vector<Expr> kids;
      kids.reserve(e.children().size());
      for (const Expr& k : e.children()) kids.push_back(substitute(k, bindings));
      return Expr::product(std::move(kids));
    }
    case NodeKind::power:
      return Expr::power(substitute(e.base(), bindings), e.exponent());
    case NodeKind::call:
      return Expr::call(e.fn(), substitute(e.base(), bindings));
  }
  return e;
}

namespace {

double evaluate_rec(const Expr& e, const std::map<VarRef, double>& point) {
  switch (e.kind()) {
    case NodeKind::rational:
      return to_double(e.rational_value());
    case NodeKind::var: {
      auto it = point.find(e.var());
      if (it == point.end()) throw eval_error("unbound variable in evaluation");
      return it->second;
    }
    case NodeKind::sum: {
      double s = 0;
      for (const Expr& k : e.children()) s += evaluate_rec(k, point);
      return s;
    }
    case NodeKind::product: {
      double p = 1;
      for (const Expr& k : e.children()) p *= evaluate_rec(k, point);
      return p;
    }
    case NodeKind::power: {
      double b = evaluate_rec(e.base(), point);
      const Rat& ex = e.exponent();
      if (b == 0 && ex < 0) throw eval_error("division by zero");
      if (b < 0 && !is_integer(ex))
        throw eval_error("negative radicand for fractional power");
      return std::pow(b, to_double(ex));
    }
    case NodeKind::call: {
      double a = evaluate_rec(e.base(), point);
      switch (e.fn()) {
        case CallFn::exp: return std::exp(a);
        case CallFn::sin: return std::sin(a);
        case CallFn::cos: return std::cos(a);
      }
    }
  }
  return 0;
}

}  // namespace

double evaluate(const Expr& e, const std::map<VarRef, double>& point) {
  double v = evaluate_rec(e, point);
  if (!std::isfinite(v)) throw eval_error("non-finite value in evaluation");
  return v;
}

void collect_vars(const Expr& e, std::set<VarRef>& out) {
  switch (e.kind()) {
    case NodeKind::rational:
      return;
    case NodeKind::var:
      out.insert(e.var());
      return;
    default:
      for (const Expr& k : e.children()) collect_vars(k, out);
  }
}

std::set<VarRef> variables(const Expr& e) {
  std::set<VarRef> s;
  collect_vars(e, s);
  return s;
}

bool depends_on(const Expr& e, const VarRef& v) {
  switch (e.kind()) {
    case NodeKind::rational:
      return false;
    case NodeKind::var:
      return e.var() == v;
    default:
      for (const Expr& k : e.children())
        if (depends_on(k, v)) return true;
      return false;
  }
}

int max_jet_order(const Expr& e) {
  int m = 0;
  switch (e.kind()) {
    case NodeKind::rational:
      return 0;
    case NodeKind::var:
      return e.var().order();
    default:
      for (const Expr& k : e.children()) m = std::max(m, max_jet_order(k));
      return m;
  }
}

bool contains_call(const Expr& e) {
  if (e.kind() == NodeKind::call) return true;
  if (e.kind() == NodeKind::rational || e.kind() == NodeKind::var) return false;
  for (const Expr& k : e.children())
    if (contains_call(k)) return true;
  return false;
}

bool has_opaque_power(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::rational:
    case NodeKind::var:
      return false;
    case NodeKind::call:
      return true;
    case NodeKind::power: {
      NodeKind bk = e.base().kind();
      if (bk == NodeKind::sum || bk == NodeKind::call ||
          bk == NodeKind::rational)
        return true;
      return has_opaque_power(e.base());
    }
    default:
      for (const Expr& k : e.children())
        if (has_opaque_power(k)) return true;
      return false;
  }
}

Expr clear_denominators(const Expr& e) {
  // Collect sum-based atoms appearing with negative exponents anywhere in
  // the term structure (top level and inside products).
  std::vector<std::pair<Expr, Rat>> denoms;  // (base, most negative exponent)
  auto note = [&denoms](const Expr& p) {
    if (p.kind() != NodeKind::power || p.exponent() >= 0) return;
    if (p.base().kind() != NodeKind::sum) return;
    for (auto& d : denoms)
      if (compare(d.first, p.base()) == 0) {
        d.second = std::min(d.second, p.exponent());
        return;
      }
    denoms.emplace_back(p.base(), p.exponent());
  };
  auto scan_factor = [&note](const Expr& t) {
    if (t.kind() == NodeKind::product)
      for (const Expr& f : t.children()) note(f);
    else
      note(t);
  };
  if (e.kind() == NodeKind::sum)
    for (const Expr& t : e.children()) scan_factor(t);
  else
    scan_factor(e);
  if (denoms.empty()) return e;
  std::vector<Expr> factors;
  factors.push_back(e);
  for (const auto& [base, emin] : denoms)
    factors.push_back(Expr::power(base, -emin));
  return Expr::product(std::move(factors));
}

}  // namespace jetred
