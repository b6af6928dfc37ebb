// Copyright 2026 the ampopt authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ampopt/harness.hpp"
#include "ampopt/io.hpp"

using namespace ampopt;

TEST_CASE("bundled instance has the documented shape") {
  const Problem p = builtin_nlp1();
  CHECK(p.name == "nlp1");
  CHECK(p.variables.size() == 8);
  CHECK(p.constraints.size() == 6);
  int nonlinear = 0;
  for (const Constraint& c : p.constraints) {
    bool has_bilinear = false;
    for (const Term& t : c.expr.terms)
      has_bilinear = has_bilinear || t.total_degree() >= 2;
    if (has_bilinear) ++nonlinear;
  }
  CHECK(nonlinear == 3);
  // Objective is x1 + x2 + x3.
  REQUIRE(p.objective.terms.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(p.objective.terms[i].coefficient == 1.0);
    CHECK(p.objective.terms[i].powers == std::map<VarId, int>{{i, 1}});
  }
  CHECK(p.known_optimum == 7049.2479);
  CHECK(validate(p).empty());
  // The published optimum is rounded to 6 significant figures; constraints of
  // magnitude ~1e6 then carry residuals of order 1.
  CHECK(p.max_violation(nlp1_solution()) <= 1.0);
  CHECK(p.objective.evaluate(nlp1_solution()) ==
        doctest::Approx(7049.2479).epsilon(1e-5));
}

TEST_CASE("parse accepts a box-only problem") {
  const Problem p = parse_problem(R"({
    "variables": [{"name": "x", "lb": 0, "ub": 1, "binary": false}],
    "objective": [{"coeff": 1, "powers": {"x": 1}}],
    "constraints": []
  })");
  CHECK(p.variables.size() == 1);
  CHECK(p.constraints.empty());
}

TEST_CASE("parse rejects malformed documents with located errors") {
  CHECK_THROWS_AS(parse_problem(R"({
    "variables": [{"name": "x", "lb": 0, "ub": 1}],
    "objective": [{"coeff": 1, "powers": {"x": 1.5}}]
  })"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem(R"({
    "variables": [{"name": "x", "lb": 0, "ub": 1},
                  {"name": "x", "lb": 0, "ub": 2}]
  })"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem(R"({
    "variables": [{"name": "x", "lb": 0, "ub": 1, "color": "red"}]
  })"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem(R"({
    "variables": [{"name": "x", "lb": "wide", "ub": 1}]
  })"),
                  ParseError);
  CHECK_THROWS_AS(parse_problem("not json"), ParseError);
}

TEST_CASE("serialize/parse round-trip is lossless") {
  const Problem p = builtin_nlp1();
  const std::string doc = serialize_problem(p);
  const Problem q = parse_problem(doc);
  CHECK(q.name == p.name);
  CHECK(q.known_optimum == p.known_optimum);
  REQUIRE(q.variables.size() == p.variables.size());
  for (size_t i = 0; i < p.variables.size(); ++i) {
    CHECK(q.variables[i].name == p.variables[i].name);
    CHECK(q.variables[i].lower == p.variables[i].lower);
    CHECK(q.variables[i].upper == p.variables[i].upper);
    CHECK(q.variables[i].is_binary == p.variables[i].is_binary);
  }
  REQUIRE(q.constraints.size() == p.constraints.size());
  for (size_t c = 0; c < p.constraints.size(); ++c) {
    CHECK(q.constraints[c].sense == p.constraints[c].sense);
    CHECK(q.constraints[c].rhs == p.constraints[c].rhs);
    REQUIRE(q.constraints[c].expr.terms.size() ==
            p.constraints[c].expr.terms.size());
    for (size_t t = 0; t < p.constraints[c].expr.terms.size(); ++t) {
      CHECK(q.constraints[c].expr.terms[t].coefficient ==
            p.constraints[c].expr.terms[t].coefficient);
      CHECK(q.constraints[c].expr.terms[t].powers ==
            p.constraints[c].expr.terms[t].powers);
    }
  }
  // Serialization is a fixed point: a second pass emits the same text.
  CHECK(serialize_problem(q) == doc);
}

TEST_CASE("infinite bounds survive the round-trip") {
  Problem p;
  p.name = "open";
  p.add_variable("x", -kInf, kInf);
  const Problem q = parse_problem(serialize_problem(p));
  CHECK(q.variables[0].lower == -kInf);
  CHECK(q.variables[0].upper == kInf);
}

TEST_CASE("benchmark mode names round-trip") {
  for (const char* name :
       {"amp", "uniform-compare", "delta-sweep", "obbt-report"}) {
    const BenchMode mode = parse_mode(name);
    CHECK(std::string(to_string(mode)) == name);
  }
  CHECK_THROWS(parse_mode("frobnicate"));
}
