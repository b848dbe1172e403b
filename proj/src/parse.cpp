#include "jetred/parse.hpp"

#include "jetred/errors.hpp"

#include <algorithm>
#include <cctype>

namespace jetred {

namespace {

struct Parser {
  const std::string& text;
  const BundleChart& chart;
  bool allow_calls;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      throw parse_error(std::string("expected '") + c + "'", pos);
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (accept('+'))
        e = e + parse_term();
      else if (accept('-'))
        e = e - parse_term();
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (accept('*'))
        e = e * parse_factor();
      else if (accept('/'))
        e = e / parse_factor();
      else
        return e;
    }
  }

  Expr parse_factor() {
    if (accept('-')) return -parse_factor();
    return parse_power();
  }

  Expr parse_power() {
    Expr b = parse_atom();
    if (accept('^')) {
      std::size_t at = pos;
      Expr e = parse_factor();
      if (!e.is_rational())
        throw parse_error("exponent must be a rational constant", at);
      return Expr::power(b, e.rational_value());
    }
    return b;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos >= text.size()) throw parse_error("unexpected end of input", pos);
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_integer();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    if (c == '(') {
      ++pos;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", pos);
  }

  Expr parse_integer() {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      ++pos;
    return Expr::rational(Rat(Int(text.substr(start, pos - start))));
  }

  Expr parse_identifier() {
    std::size_t start = pos;
    auto word_char = [this]() {
      char c = text[pos];
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    while (pos < text.size() && word_char()) ++pos;
    std::string name = text.substr(start, pos - start);

    if (name == "sqrt" && peek() == '(') {
      ++pos;
      Expr a = parse_expr();
      expect(')');
      return Expr::power(a, Rat(1, 2));
    }
    if (allow_calls && peek() == '(') {
      CallFn fn;
      bool is_fn = true;
      if (name == "exp")
        fn = CallFn::exp;
      else if (name == "sin")
        fn = CallFn::sin;
      else if (name == "cos")
        fn = CallFn::cos;
      else
        is_fn = false;
      if (is_fn) {
        ++pos;
        Expr a = parse_expr();
        expect(')');
        return Expr::call(fn, a);
      }
    }

    if (auto bi = chart.base_index(name))
      return Expr::variable(VarRef::base_var(*bi));

    std::string head = name, tail;
    if (auto us = name.find('_'); us != std::string::npos) {
      if (name.find('_', us + 1) != std::string::npos)
        throw parse_error("at most one '_' allowed in an identifier", start);
      head = name.substr(0, us);
      tail = name.substr(us + 1);
      if (tail.empty())
        throw parse_error("empty jet suffix", start);
    }
    auto fi = chart.fiber_index(head);
    if (!fi) throw unknown_identifier_error(name, start);

    std::vector<int> indices;
    std::size_t t = 0;
    while (t < tail.size()) {
      // Greedy longest-match decomposition of the suffix into base names.
      int best = -1;
      std::size_t best_len = 0;
      for (int i = 0; i < chart.base_dim(); ++i) {
        const std::string& bn = chart.base_names[i];
        if (bn.size() > best_len && tail.compare(t, bn.size(), bn) == 0) {
          best = i;
          best_len = bn.size();
        }
      }
      if (best < 0) throw unknown_identifier_error(name, start);
      indices.push_back(best);
      t += best_len;
    }
    if (static_cast<int>(indices.size()) > chart.order_cap)
      throw parse_error("jet order " + std::to_string(indices.size()) +
                            " exceeds order cap " +
                            std::to_string(chart.order_cap),
                        start);
    return Expr::variable(VarRef::jet_var(*fi, MultiIndex(std::move(indices))));
  }
};

struct Formatter {
  const BundleChart& chart;
  bool full;

  std::string paren(const std::string& s) const { return "(" + s + ")"; }

  std::string rat_atom(const Rat& r) const {
    // Rendered in a multiplicative position: negative / fractional values
    // need parentheses to reparse as one factor.
    std::string s = to_string(r);
    if (r < 0 || !is_integer(r)) return paren(s);
    return s;
  }

  std::string fmt_power(const Expr& e) const {
    const Expr& b = e.base();
    const Rat& ex = e.exponent();
    if (ex == Rat(1, 2) && !full) return "sqrt(" + fmt(b) + ")";
    std::string bs;
    switch (b.kind()) {
      case NodeKind::var:
        bs = chart.var_name(b.var());
        break;
      case NodeKind::call:
        bs = fmt(b);
        break;
      case NodeKind::rational:
        bs = rat_atom(b.rational_value());
        break;
      default:
        bs = paren(fmt(b));
        break;
    }
    std::string es;
    if (is_integer(ex) && ex > 0)
      es = to_string(ex);
    else
      es = paren(to_string(ex));
    return bs + "^" + es;
  }

  // A product term without its sign; caller has made the coefficient >= 0.
  std::string fmt_factor(const Expr& f) const {
    switch (f.kind()) {
      case NodeKind::var:
        return chart.var_name(f.var());
      case NodeKind::power:
        return full ? paren(fmt_power(f)) : fmt_power(f);
      case NodeKind::call:
        return fmt(f);
      case NodeKind::rational:
        return rat_atom(f.rational_value());
      default:
        return paren(fmt(f));
    }
  }

  std::string fmt_product(const Expr& e) const {
    Rat coeff(1);
    std::vector<Expr> num, den;
    for (const Expr& k : e.children()) {
      if (k.is_rational()) {
        coeff *= k.rational_value();
      } else if (k.kind() == NodeKind::power && k.exponent() < 0 && !full) {
        den.push_back(Expr::power(k.base(), -k.exponent()));
      } else {
        num.push_back(k);
      }
    }
    std::string s;
    bool neg = coeff < 0;
    if (neg) coeff = -coeff;
    if (coeff != 1 || num.empty()) {
      if (is_integer(coeff))
        s = to_string(coeff);
      else if (den.empty() && !full) {
        // print p/q as division so "2/3*x" stays natural
        s = to_string(coeff);
      } else {
        s = paren(to_string(coeff));
      }
    }
    for (const Expr& k : num) {
      if (!s.empty()) s += "*";
      s += fmt_factor(k);
    }
    for (const Expr& k : den) {
      s += "/";
      std::string d = fmt_factor(k);
      s += d;
    }
    if (neg) s = "-" + s;
    return s;
  }

  std::string fmt(const Expr& e) const {
    switch (e.kind()) {
      case NodeKind::rational: {
        const Rat& r = e.rational_value();
        std::string s = to_string(r);
        return s;
      }
      case NodeKind::var:
        return chart.var_name(e.var());
      case NodeKind::call: {
        const char* n = e.fn() == CallFn::exp   ? "exp"
                        : e.fn() == CallFn::sin ? "sin"
                                                : "cos";
        return std::string(n) + "(" + fmt(e.base()) + ")";
      }
      case NodeKind::power:
        return fmt_power(e);
      case NodeKind::product:
        return full ? paren(fmt_product(e)) : fmt_product(e);
      case NodeKind::sum: {
        std::string s;
        bool first = true;
        for (const Expr& t : e.children()) {
          Rat c = t.is_rational() ? t.rational_value()
                  : (t.kind() == NodeKind::product &&
                     t.children().front().is_rational())
                      ? t.children().front().rational_value()
                      : Rat(1);
          std::string ts = fmt_term(first, c < 0 ? -t : t);
          if (first) {
            s = (c < 0 ? "-" : "") + ts;
            first = false;
          } else {
            s += (c < 0 ? " - " : " + ") + ts;
          }
        }
        return full ? paren(s) : s;
      }
    }
    return "0";
  }

  std::string fmt_term(bool, const Expr& t) const {
    switch (t.kind()) {
      case NodeKind::product:
        return full ? paren(fmt_product(t)) : fmt_product(t);
      case NodeKind::power:
        return full ? paren(fmt_power(t)) : fmt_power(t);
      default:
        return fmt(t);
    }
  }
};

}  // namespace

Expr parse(const std::string& text, const BundleChart& chart,
           bool allow_calls) {
  Parser p{text, chart, allow_calls};
  Expr e = p.parse_expr();
  if (!p.eof())
    throw parse_error("trailing input", p.pos);
  return e;
}

std::string format(const Expr& e, const BundleChart& chart, bool full_parens) {
  Formatter f{chart, full_parens};
  return f.fmt(e);
}

}  // namespace jetred
