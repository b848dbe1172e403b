#include "jetred/problem.hpp"

#include "jetred/errors.hpp"
#include "jetred/parse.hpp"

#include <json.hpp>

#include <fstream>

namespace jetred {

using nlohmann::json;

namespace {

const json& field(const json& j, const std::string& key,
                  const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw validation_error(where, "missing field '" + key + "'");
  return *it;
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw validation_error(where, "expected an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw validation_error(where, "expected strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Expr parse_at(const json& j, const BundleChart& chart, const std::string& where,
              bool allow_calls = false) {
  if (!j.is_string())
    throw validation_error(where, "expected an expression string");
  try {
    return parse(j.get<std::string>(), chart, allow_calls);
  } catch (const parse_error& e) {
    throw validation_error(where, std::string(e.what()) + " at offset " +
                                      std::to_string(e.position()));
  }
}

std::vector<Expr> expr_list(const json& j, const BundleChart& chart,
                            const std::string& where,
                            bool allow_calls = false) {
  if (!j.is_array()) throw validation_error(where, "expected an array");
  std::vector<Expr> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_at(j[i], chart, where + "[" + std::to_string(i) + "]",
                           allow_calls));
  return out;
}

double number_at(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    // allow exact "p/q" strings
    const std::string s = j.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return std::stod(s);
      return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
    } catch (...) {
      throw validation_error(where, "bad number '" + s + "'");
    }
  }
  throw validation_error(where, "expected a number");
}

std::pair<double, double> interval_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw validation_error(where, "expected [lo, hi]");
  double lo = number_at(j[0], where), hi = number_at(j[1], where);
  if (!(lo < hi)) throw validation_error(where, "need lo < hi");
  return {lo, hi};
}

void apply_ranges(BundleChart& chart, const json& j, const std::string& where) {
  if (auto it = j.find("ranges"); it != j.end()) {
    for (const auto& [name, iv] : it->items()) {
      auto bi = chart.base_index(name);
      if (!bi)
        throw validation_error(where + ".ranges", "unknown base variable '" +
                                                      name + "'");
      chart.base_ranges[*bi] = interval_at(iv, where + ".ranges." + name);
    }
  }
  if (auto it = j.find("jet_range"); it != j.end())
    chart.jet_range = interval_at(*it, where + ".jet_range");
}

BundleChart chart_from(const json& j, const std::string& where,
                       std::optional<int> cap_override) {
  BundleChart chart(string_list(field(j, "base", where), where + ".base"),
                    string_list(field(j, "fiber", where), where + ".fiber"),
                    j.value("order_cap", 6));
  if (cap_override) chart.order_cap = *cap_override;
  apply_ranges(chart, j, where);
  chart.validate();
  return chart;
}

Region region_from(const json& j, const std::string& where) {
  Region r;
  const std::string kind = j.value("kind", "box");
  if (kind == "box")
    r.kind = Region::Kind::box;
  else if (kind == "spherical_shell")
    r.kind = Region::Kind::spherical_shell;
  else
    throw validation_error(where, "unknown region kind '" + kind + "'");
  const json& iv = field(j, "intervals", where);
  if (!iv.is_array()) throw validation_error(where, "intervals: expected array");
  for (std::size_t i = 0; i < iv.size(); ++i)
    r.intervals.push_back(
        interval_at(iv[i], where + ".intervals[" + std::to_string(i) + "]"));
  r.nodes_per_axis = j.value("nodes", 96);
  if (r.nodes_per_axis < 2)
    throw validation_error(where, "nodes must be >= 2");
  return r;
}

}  // namespace

const Expr& Problem::expression(const std::string& n) const {
  auto it = expressions.find(n);
  if (it == expressions.end())
    throw validation_error("expressions", "no expression named '" + n + "'");
  return it->second;
}
const HorizontalForm& Problem::form(const std::string& n) const {
  auto it = forms.find(n);
  if (it == forms.end())
    throw validation_error("forms", "no form named '" + n + "'");
  return it->second;
}
const SectionSpec& Problem::section(const std::string& n) const {
  auto it = sections.find(n);
  if (it == sections.end())
    throw validation_error("sections", "no section named '" + n + "'");
  return it->second;
}
const Region& Problem::region(const std::string& n) const {
  auto it = regions.find(n);
  if (it == regions.end())
    throw validation_error("regions", "no region named '" + n + "'");
  return it->second;
}
const Automorphism& Problem::automorphism(const std::string& n) const {
  auto it = automorphisms.find(n);
  if (it == automorphisms.end())
    throw validation_error("automorphisms", "no automorphism named '" + n + "'");
  return it->second;
}

Problem load_problem(const std::string& path, const LoadOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw error("cannot open problem file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw validation_error(path, std::string("JSON parse failure: ") + e.what());
  }
  if (j.value("schema", 0) != 1)
    throw validation_error("schema", "expected \"schema\": 1");

  Problem p;
  p.name = j.value("name", "");
  p.seed = overrides.seed ? *overrides.seed : j.value("seed", 0ull);
  p.eq.seed = p.seed;
  if (overrides.tolerance) p.eq.tolerance = *overrides.tolerance;

  p.chart = chart_from(field(j, "chart", "problem"), "chart",
                       overrides.order_cap);
  const int n = p.chart.base_dim();
  const int m = p.chart.fiber_dim();

  Expr vol_coeff = Expr::one();
  if (auto it = j.find("volume"); it != j.end())
    vol_coeff = parse_at(*it, p.chart, "volume");
  p.volume = HorizontalForm::top(vol_coeff, n);

  if (auto it = j.find("generators"); it != j.end()) {
    for (std::size_t k = 0; k < it->size(); ++k) {
      const json& gj = (*it)[k];
      const std::string where = "generators[" + std::to_string(k) + "]";
      Generator g;
      g.base = expr_list(field(gj, "base", where), p.chart, where + ".base");
      if (auto fit = gj.find("fiber"); fit != gj.end())
        g.fiber = expr_list(*fit, p.chart, where + ".fiber");
      else
        g.fiber.assign(m, Expr::zero());
      if (static_cast<int>(g.base.size()) != n ||
          static_cast<int>(g.fiber.size()) != m)
        throw validation_error(where, "component arity mismatch");
      for (const Expr& c : g.base)
        if (max_jet_order(c) > 0)
          throw validation_error(where, "generator components must be order 0");
      p.generators.push_back(std::move(g));
    }
  }

  if (auto it = j.find("omega"); it != j.end()) {
    ExprMatrix entries;
    if (!it->is_array() || static_cast<int>(it->size()) != m)
      throw validation_error("omega", "expected an m x m matrix");
    for (int a = 0; a < m; ++a)
      entries.push_back(expr_list((*it)[a], p.chart,
                                  "omega[" + std::to_string(a) + "]"));
    p.omega = OmegaStructure::create(std::move(entries), p.chart, p.eq);
  }

  if (auto it = j.find("reduction"); it != j.end()) {
    const json& rj = *it;
    BundleChart adapted(
        string_list(field(rj, "adapted_base", "reduction"),
                    "reduction.adapted_base"),
        string_list(field(rj, "adapted_fiber", "reduction"),
                    "reduction.adapted_fiber"),
        p.chart.order_cap);
    apply_ranges(adapted, rj, "reduction");
    int q = field(rj, "orbit_count", "reduction").get<int>();
    std::vector<Expr> fwd = expr_list(field(rj, "forward", "reduction"),
                                      p.chart, "reduction.forward");
    std::vector<Expr> inv = expr_list(field(rj, "inverse", "reduction"),
                                      adapted, "reduction.inverse");
    AdaptedChart ac = AdaptedChart::create(p.chart, std::move(adapted), q,
                                           std::move(fwd), std::move(inv),
                                           p.eq);
    const json& cj = field(rj, "qchain", "reduction");
    QChain chain;
    chain.scale = parse_at(field(cj, "scale", "reduction.qchain"), p.chart,
                           "reduction.qchain.scale");
    const json& vj = field(cj, "vectors", "reduction.qchain");
    for (std::size_t k = 0; k < vj.size(); ++k)
      chain.vectors.push_back(TotalVectorField{expr_list(
          vj[k], p.chart, "reduction.qchain.vectors[" + std::to_string(k) + "]")});
    p.reduction = ReductionSetup::create(std::move(ac), std::move(chain),
                                         p.generators, p.volume, p.eq);
  }

  if (auto it = j.find("expressions"); it != j.end())
    for (const auto& [name, ej] : it->items())
      p.expressions.emplace(name,
                            parse_at(ej, p.chart, "expressions." + name));

  if (auto it = j.find("forms"); it != j.end()) {
    for (const auto& [name, fj] : it->items()) {
      const std::string where = "forms." + name;
      int degree = field(fj, "degree", where).get<int>();
      if (degree < 0 || degree > n)
        throw validation_error(where, "degree out of range");
      HorizontalForm f(degree);
      for (const auto& cj : field(fj, "components", where)) {
        std::vector<int> idx;
        for (const auto& iv : field(cj, "index", where)) {
          int i = iv.get<int>();
          if (i < 0 || i >= n)
            throw validation_error(where, "index out of range");
          idx.push_back(i);
        }
        f.add(std::move(idx), parse_at(field(cj, "coeff", where), p.chart,
                                       where + ".coeff"));
      }
      p.forms.emplace(name, std::move(f));
    }
  }

  if (auto it = j.find("sections"); it != j.end()) {
    for (const auto& [name, sj] : it->items()) {
      const std::string where = "sections." + name;
      SectionSpec s;
      s.components = expr_list(sj, p.chart, where, /*allow_calls=*/true);
      if (static_cast<int>(s.components.size()) != m)
        throw validation_error(where, "one component per fiber variable");
      for (const Expr& c : s.components)
        for (const VarRef& v : variables(c))
          if (v.is_jet())
            throw validation_error(where,
                                   "sections are base-variable expressions");
      p.sections.emplace(name, std::move(s));
    }
  }

  if (auto it = j.find("regions"); it != j.end())
    for (const auto& [name, rj] : it->items())
      p.regions.emplace(name, region_from(rj, "regions." + name));

  if (auto it = j.find("automorphisms"); it != j.end()) {
    for (const auto& [name, aj] : it->items()) {
      const std::string where = "automorphisms." + name;
      std::vector<Expr> fwd =
          expr_list(field(aj, "forward", where), p.chart, where + ".forward");
      std::vector<Expr> inv =
          expr_list(field(aj, "inverse", where), p.chart, where + ".inverse");
      ExprMatrix fiber;
      const json& mj = field(aj, "fiber", where);
      for (std::size_t a = 0; a < mj.size(); ++a)
        fiber.push_back(expr_list(mj[a], p.chart,
                                  where + ".fiber[" + std::to_string(a) + "]"));
      p.automorphisms.emplace(
          name, Automorphism::create(std::move(fwd), std::move(inv),
                                     std::move(fiber), p.chart, p.eq));
      p.automorphism_covariant[name] = aj.value("covariant", true);
    }
  }

  if (auto it = j.find("invariant_atoms"); it != j.end()) {
    p.invariant_atoms =
        expr_list(*it, p.chart, "invariant_atoms");
    for (std::size_t k = 0; k < p.invariant_atoms.size(); ++k)
      if (!p.generators.empty() &&
          !is_invariant(p.invariant_atoms[k], p.generators, p.chart, p.eq))
        throw validation_error("invariant_atoms[" + std::to_string(k) + "]",
                               "not invariant under the declared generators");
  }

  if (auto it = j.find("jacobiator_triples"); it != j.end()) {
    for (std::size_t k = 0; k < it->size(); ++k) {
      const json& tj = (*it)[k];
      const std::string where =
          "jacobiator_triples[" + std::to_string(k) + "]";
      Problem::JacobiatorTriple t;
      t.p = field(tj, "p", where).get<std::string>();
      t.q = field(tj, "q", where).get<std::string>();
      t.r = field(tj, "r", where).get<std::string>();
      t.expect_exact = tj.value("exact", true);
      for (const std::string* n : {&t.p, &t.q, &t.r})
        if (!p.expressions.count(*n))
          throw validation_error(where, "unknown expression '" + *n + "'");
      p.jacobiator_triples.push_back(std::move(t));
    }
  }

  return p;
}

}  // namespace jetred
