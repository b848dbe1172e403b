#pragma once

#include "jetred/bracket.hpp"
#include "jetred/chart.hpp"
#include "jetred/equality.hpp"
#include "jetred/expr.hpp"
#include "jetred/forms.hpp"
#include "jetred/numeric.hpp"
#include "jetred/reduction.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace jetred {

// A declarative problem file: chart, structures, and named entities. All
// construction-time validations run at load; see README for the schema.
struct Problem {
  std::string name;
  std::uint64_t seed = 0;
  BundleChart chart;
  HorizontalForm volume{0};
  std::optional<OmegaStructure> omega;
  std::vector<Generator> generators;
  std::optional<ReductionSetup> reduction;
  std::map<std::string, Expr> expressions;
  std::map<std::string, HorizontalForm> forms;
  std::map<std::string, SectionSpec> sections;
  std::map<std::string, Region> regions;
  std::map<std::string, Automorphism> automorphisms;
  // Load-time expectation per automorphism: is omega covariant w.r.t. it?
  std::map<std::string, bool> automorphism_covariant;
  // G-invariant local functions (validated at load); the randomized
  // verification suites build invariant test objects from these.
  std::vector<Expr> invariant_atoms;
  struct JacobiatorTriple {
    std::string p, q, r;
    bool expect_exact = true;
  };
  std::vector<JacobiatorTriple> jacobiator_triples;
  EqOptions eq;

  const Expr& expression(const std::string& name) const;
  const HorizontalForm& form(const std::string& name) const;
  const SectionSpec& section(const std::string& name) const;
  const Region& region(const std::string& name) const;
  const Automorphism& automorphism(const std::string& name) const;
};

struct LoadOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> order_cap;
  std::optional<double> tolerance;
};

Problem load_problem(const std::string& path,
                     const LoadOverrides& overrides = {});

}  // namespace jetred
