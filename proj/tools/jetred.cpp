#include "jetred/errors.hpp"
#include "jetred/numeric.hpp"
#include "jetred/parse.hpp"
#include "jetred/problem.hpp"
#include "jetred/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

using namespace jetred;
using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Options {
  std::string problem_path;
  bool as_json = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> order_cap;
  std::optional<double> tolerance;
  int cases = 25;

  Problem load() const {
    LoadOverrides o;
    o.seed = seed;
    o.order_cap = order_cap;
    o.tolerance = tolerance;
    return load_problem(problem_path, o);
  }
};

json form_to_json(const HorizontalForm& f, const BundleChart& chart) {
  json comps = json::array();
  for (const auto& [idx, c] : f.components())
    comps.push_back({{"index", idx}, {"coeff", format(c, chart, true)}});
  return {{"degree", f.degree()}, {"components", comps}};
}

std::string form_to_text(const HorizontalForm& f, const BundleChart& chart) {
  if (f.empty()) return "0";
  std::string out;
  for (const auto& [idx, c] : f.components()) {
    if (!out.empty()) out += "  +  ";
    out += "(" + format(c, chart) + ")";
    for (int i : idx) out += " d" + chart.base_names.at(i);
  }
  return out;
}

int cmd_el(const Options& opt, const std::string& expr_name) {
  Problem p = opt.load();
  SourceForm el = euler_lagrange(p.expression(expr_name), p.chart);
  if (opt.as_json) {
    json comps = json::array();
    for (const Expr& c : el.components)
      comps.push_back(format(c, p.chart, true));
    std::cout << json{{"components", comps}}.dump(2) << "\n";
  } else {
    for (std::size_t a = 0; a < el.components.size(); ++a)
      std::cout << "E_" << p.chart.fiber_names[a] << " = "
                << format(el.components[a], p.chart) << "\n";
  }
  return 0;
}

int cmd_dh(const Options& opt, const std::string& form_name) {
  Problem p = opt.load();
  HorizontalForm d = d_H(p.form(form_name), p.chart);
  if (opt.as_json)
    std::cout << form_to_json(d, p.chart).dump(2) << "\n";
  else
    std::cout << form_to_text(d, p.chart) << "\n";
  return 0;
}

int cmd_bracket(const Options& opt, const std::string& pn,
                const std::string& qn) {
  Problem p = opt.load();
  if (!p.omega) throw validation_error("bracket", "problem declares no omega");
  Expr c = l2_tilde(p.expression(pn), p.expression(qn), *p.omega, p.chart);
  if (opt.as_json)
    std::cout << json{{"coefficient", format(c, p.chart, true)}}.dump(2)
              << "\n";
  else
    std::cout << format(c, p.chart) << "\n";
  return 0;
}

int cmd_jacobiator(const Options& opt, const std::string& pn,
                   const std::string& qn, const std::string& rn) {
  Problem p = opt.load();
  if (!p.omega)
    throw validation_error("jacobiator", "problem declares no omega");
  Expr c = jacobiator(p.expression(pn), p.expression(qn), p.expression(rn),
                      *p.omega, p.chart);
  bool exact = check_jacobiator_exact(p.expression(pn), p.expression(qn),
                                      p.expression(rn), *p.omega, p.chart,
                                      p.eq);
  if (opt.as_json)
    std::cout << json{{"jacobiator", format(c, p.chart, true)},
                      {"e_annihilated", exact}}
                     .dump(2)
              << "\n";
  else
    std::cout << format(c, p.chart) << "\nE-annihilated: "
              << (exact ? "yes" : "no") << "\n";
  return exact ? 0 : 1;
}

int cmd_reduce(const Options& opt, const std::string& expr_name) {
  Problem p = opt.load();
  if (!p.reduction)
    throw validation_error("reduce", "problem declares no reduction");
  Expr r = rho(p.expression(expr_name), *p.reduction, p.eq);
  const BundleChart& red = p.reduction->chart.reduced;
  if (opt.as_json)
    std::cout << json{{"reduced", format(r, red, true)}}.dump(2) << "\n";
  else
    std::cout << format(r, red) << "\n";
  return 0;
}

int cmd_reduce_form(const Options& opt, const std::string& form_name,
                    bool volume) {
  Problem p = opt.load();
  if (!p.reduction)
    throw validation_error("reduce-form", "problem declares no reduction");
  HorizontalForm gamma = volume ? p.volume : p.form(form_name);
  HorizontalForm r = rho_chain(gamma, *p.reduction, p.eq);
  const BundleChart& red = p.reduction->chart.reduced;
  if (opt.as_json)
    std::cout << form_to_json(r, red).dump(2) << "\n";
  else
    std::cout << form_to_text(r, red) << "\n";
  return 0;
}

int cmd_l2hat(const Options& opt, const std::string& pn, const std::string& qn,
              const std::string& pbar, const std::string& qbar) {
  Problem p = opt.load();
  if (!p.reduction || !p.omega)
    throw validation_error("l2hat", "needs reduction and omega");
  const BundleChart& red = p.reduction->chart.reduced;
  std::optional<Expr> pb, qb;
  if (!pbar.empty()) pb = parse(pbar, red);
  if (!qbar.empty()) qb = parse(qbar, red);
  L2HatResult r = l2_hat(p.expression(pn), p.expression(qn), pb, qb,
                         *p.reduction, *p.omega, p.eq);
  if (opt.as_json) {
    json j{{"coefficient", format(r.coeff, red, true)},
           {"omega_bar_path_checked", r.omega_path_checked}};
    if (r.omega_path_checked)
      j["omega_bar_coefficient"] = format(r.omega_path_coeff, red, true);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << format(r.coeff, red) << "  (against nu_bar = "
              << format(p.reduction->nu_bar_coeff, red) << " d"
              << red.base_names[0] << ((red.base_dim() > 1) ? "..." : "")
              << ")\n";
    if (r.omega_path_checked)
      std::cout << "omega-bar route agrees\n";
  }
  return 0;
}

int cmd_verify(const Options& opt, const std::string& what) {
  Problem p = opt.load();
  std::uint64_t seed = opt.seed ? *opt.seed : p.seed;
  auto lines = run_verifications(p, what, opt.cases, seed);
  bool all_pass = true;
  json jl = json::array();
  for (const auto& line : lines) {
    if (line.applicable && !line.pass) all_pass = false;
    if (opt.as_json) {
      jl.push_back({{"name", line.name},
                    {"pass", line.pass},
                    {"applicable", line.applicable},
                    {"detail", line.detail},
                    {"seconds", line.seconds}});
    } else {
      std::string tag = !line.applicable ? "SKIP" : line.pass ? "PASS" : "FAIL";
      std::printf("[%s] %-36s %s\n", tag.c_str(), line.name.c_str(),
                  line.detail.c_str());
    }
  }
  if (opt.as_json)
    std::cout << json{{"verdicts", jl}, {"pass", all_pass}}.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

int cmd_eval(const Options& opt, const std::string& expr_name,
             const std::string& section_name, const std::string& region_name) {
  Problem p = opt.load();
  const int n = p.chart.base_dim();
  std::vector<int> top(n);
  for (int i = 0; i < n; ++i) top[i] = i;
  auto r = integrate(p.expression(expr_name), p.section(section_name),
                     p.region(region_name), p.volume.coefficient(top),
                     p.chart);
  if (opt.as_json)
    std::cout << json{{"value", r.value},
                      {"error_estimate", r.error_estimate}}
                     .dump(2)
              << "\n";
  else
    std::cout << fmt_double(r.value) << "  (half-resolution defect "
              << fmt_double(r.error_estimate) << ")\n";
  return 0;
}

int cmd_compare_reduced(const Options& opt, const std::string& expr_name,
                        const std::string& section_name,
                        const std::string& region_name,
                        const std::string& reduced_region_name) {
  Problem p = opt.load();
  if (!p.reduction)
    throw validation_error("compare-reduced", "problem declares no reduction");
  auto r = compare_reduced_functional(
      p.expression(expr_name), p.section(section_name), p.region(region_name),
      p.region(reduced_region_name), *p.reduction, p.eq);
  if (opt.as_json)
    std::cout << json{{"lhs", r.lhs},
                      {"rhs", r.rhs},
                      {"ratio", r.ratio},
                      {"quadrature_error", r.quadrature_error}}
                     .dump(2)
              << "\n";
  else
    std::cout << "lhs   = " << fmt_double(r.lhs) << "\nrhs   = "
              << fmt_double(r.rhs) << "\nV     = " << fmt_double(r.ratio)
              << "\nquadrature error ~ " << fmt_double(r.quadrature_error)
              << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jetred: jet-bundle variational calculus and symmetry reduction"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--problem", opt.problem_path, "problem file (JSON)")
      ->required();
  app.add_flag("--json", opt.as_json, "machine-readable output");
  std::uint64_t seed_val = 0;
  auto* seed_opt = app.add_option("--seed", seed_val, "randomization seed");
  int cap_val = 0;
  auto* cap_opt = app.add_option("--order-cap", cap_val, "jet order cap");
  double tol_val = 0;
  auto* tol_opt =
      app.add_option("--tolerance", tol_val, "numeric equality tolerance");
  app.add_option("--cases", opt.cases, "randomized cases per suite");

  std::string expr_name, form_name, p_name, q_name, r_name, pbar, qbar;
  std::string section_name, region_name, reduced_region_name, what;
  bool use_volume = false;

  auto* el = app.add_subcommand("el", "Euler-Lagrange components of P nu");
  el->add_option("--expr", expr_name)->required();

  auto* dh = app.add_subcommand("dh", "horizontal differential of a form");
  dh->add_option("--form", form_name)->required();

  auto* br = app.add_subcommand("bracket", "l2_tilde(P nu, Q nu) coefficient");
  br->add_option("--p", p_name)->required();
  br->add_option("--q", q_name)->required();

  auto* jac = app.add_subcommand("jacobiator",
                                 "unshuffle Jacobiator and its E-certificate");
  jac->add_option("--p", p_name)->required();
  jac->add_option("--q", q_name)->required();
  jac->add_option("--r", r_name)->required();

  auto* red = app.add_subcommand("reduce", "rho of an invariant function");
  red->add_option("--expr", expr_name)->required();

  auto* redf = app.add_subcommand("reduce-form", "rho_X of a horizontal form");
  redf->add_option("--form", form_name);
  redf->add_flag("--volume", use_volume, "reduce the declared volume form");

  auto* lh = app.add_subcommand("l2hat", "reduced bracket via representatives");
  lh->add_option("--p", p_name)->required();
  lh->add_option("--q", q_name)->required();
  lh->add_option("--p-bar", pbar, "claimed reduced input (checked)");
  lh->add_option("--q-bar", qbar, "claimed reduced input (checked)");

  auto* ver = app.add_subcommand("verify", "verification suites");
  ver->add_option("what", what,
                  "cochain|el-commute|covariance|jacobiator|well-defined|"
                  "dh2|e-dh|l2-skew|all")
      ->required();

  auto* ev = app.add_subcommand("eval", "integrate P along a section");
  ev->add_option("--expr", expr_name)->required();
  ev->add_option("--section", section_name)->required();
  ev->add_option("--region", region_name)->required();

  auto* cr = app.add_subcommand("compare-reduced",
                                "orbit-volume factor of a reduced functional");
  cr->add_option("--expr", expr_name)->required();
  cr->add_option("--section", section_name)->required();
  cr->add_option("--region", region_name)->required();
  cr->add_option("--reduced-region", reduced_region_name)->required();

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) opt.seed = seed_val;
  if (*cap_opt) opt.order_cap = cap_val;
  if (*tol_opt) opt.tolerance = tol_val;

  try {
    if (el->parsed()) return cmd_el(opt, expr_name);
    if (dh->parsed()) return cmd_dh(opt, form_name);
    if (br->parsed()) return cmd_bracket(opt, p_name, q_name);
    if (jac->parsed()) return cmd_jacobiator(opt, p_name, q_name, r_name);
    if (red->parsed()) return cmd_reduce(opt, expr_name);
    if (redf->parsed()) {
      if (!use_volume && form_name.empty())
        throw validation_error("reduce-form", "need --form or --volume");
      return cmd_reduce_form(opt, form_name, use_volume);
    }
    if (lh->parsed()) return cmd_l2hat(opt, p_name, q_name, pbar, qbar);
    if (ver->parsed()) return cmd_verify(opt, what);
    if (ev->parsed()) return cmd_eval(opt, expr_name, section_name, region_name);
    if (cr->parsed())
      return cmd_compare_reduced(opt, expr_name, section_name, region_name,
                                 reduced_region_name);
  } catch (const validation_error& e) {
    std::cerr << "error [" << e.where() << "]: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
