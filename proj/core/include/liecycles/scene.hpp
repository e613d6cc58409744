#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "liecycles/families.hpp"
#include "liecycles/tolerances.hpp"

namespace lie {

struct FamilySpec {
  std::vector<std::string> spanning;
  SpecialKind special = SpecialKind::Steiner;
  double torus_rho = 0;
};

struct Query {
  std::string kind;
  nlohmann::json args;
};

// Declaration order is preserved: reports and SVG output follow it, which
// keeps golden files stable.
struct Scene {
  int dimension = 2;
  std::vector<std::pair<std::string, Cycle>> cycles;
  std::vector<std::pair<std::string, FamilySpec>> families;
  std::vector<Query> queries;

  const Cycle* find_cycle(const std::string& id) const;
  const FamilySpec* find_family(const std::string& id) const;
};

// Throws ParseError with a JSON-pointer-ish path on any schema violation:
// duplicate or unresolved ids, wrong dimension, unknown cycle kind or query
// kind, malformed numbers.
Scene parse_scene(const std::string& text);

using Report = nlohmann::ordered_json;

// Runs every query in order.  A query that throws contributes
// {ok: false, error: {kind, message}} and the report continues; the report
// is deterministic for a fixed scene and tolerance set.
Report run_queries(const Scene& scene, const Tolerances& tol = {});

}  // namespace lie
