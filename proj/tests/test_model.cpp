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

#include <random>
#include <set>

#include "ampopt/io.hpp"
#include "ampopt/model.hpp"

using namespace ampopt;

namespace {

Term term(double c, std::map<VarId, int> powers) {
  Term t;
  t.coefficient = c;
  t.powers = std::move(powers);
  return t;
}

}  // namespace

TEST_CASE("normalize merges like terms") {
  PolynomialExpr e;
  e.terms = {term(2.0, {{0, 1}, {1, 1}}), term(3.0, {{0, 1}, {1, 1}})};
  const PolynomialExpr n = normalize(e);
  REQUIRE(n.terms.size() == 1);
  CHECK(n.terms[0].coefficient == 5.0);
  CHECK(n.terms[0].powers == std::map<VarId, int>{{0, 1}, {1, 1}});
}

TEST_CASE("normalize cancels to the empty expression") {
  PolynomialExpr e;
  e.terms = {term(1.0, {{0, 2}}), term(-1.0, {{0, 2}})};
  CHECK(normalize(e).terms.empty());
}

TEST_CASE("normalize is commutativity-insensitive and idempotent") {
  // x2*x1 + x1*x2 share one canonical powers map.
  PolynomialExpr e;
  e.terms = {term(1.0, {{1, 1}, {0, 1}}), term(1.0, {{0, 1}, {1, 1}})};
  const PolynomialExpr n = normalize(e);
  REQUIRE(n.terms.size() == 1);
  CHECK(n.terms[0].coefficient == 2.0);
  const PolynomialExpr nn = normalize(n);
  REQUIRE(nn.terms.size() == 1);
  CHECK(nn.terms[0].coefficient == n.terms[0].coefficient);
  CHECK(nn.terms[0].powers == n.terms[0].powers);
}

TEST_CASE("lift x1*x2*x3 on the unit box") {
  Problem p;
  for (int i = 0; i < 3; ++i)
    p.add_variable("x" + std::to_string(i + 1), 0.0, 1.0);
  Constraint c;
  c.expr.terms = {term(1.0, {{0, 1}, {1, 1}, {2, 1}})};
  c.rhs = 1.0;
  p.constraints.push_back(c);
  auto [lifted, lifts] = lift_monomials(p);
  REQUIRE(lifts.entries.size() == 2);
  // xh1 = x1*x2 in [0,1], xh2 = xh1*x3 in [0,1].
  CHECK(lifts.entries[0].def.kind == LiftDef::Kind::bilinear);
  CHECK(lifts.entries[0].def.a == 0);
  CHECK(lifts.entries[0].def.b == 1);
  // Second link multiplies the first lift by x3 (operands stored id-ordered).
  const std::set<VarId> ops = {lifts.entries[1].def.a, lifts.entries[1].def.b};
  CHECK(ops == std::set<VarId>{2, lifts.entries[0].lifted_id});
  for (const LiftEntry& e : lifts.entries) {
    CHECK(lifted.var(e.lifted_id).lower == 0.0);
    CHECK(lifted.var(e.lifted_id).upper == 1.0);
  }
}

TEST_CASE("lift x^5 over [-1,2] squares first") {
  Problem p;
  p.add_variable("x", -1.0, 2.0);
  Constraint c;
  c.expr.terms = {term(1.0, {{0, 5}})};
  c.rhs = 100.0;
  p.constraints.push_back(c);
  auto [lifted, lifts] = lift_monomials(p);
  REQUIRE(lifts.entries.size() == 3);
  // x^2 in [0,4], (x^2)^2 in [0,16], x^4 * x in [-16,32].
  CHECK(lifts.entries[0].def.kind == LiftDef::Kind::square);
  CHECK(lifted.var(lifts.entries[0].lifted_id).lower == 0.0);
  CHECK(lifted.var(lifts.entries[0].lifted_id).upper == 4.0);
  CHECK(lifts.entries[1].def.kind == LiftDef::Kind::square);
  CHECK(lifted.var(lifts.entries[1].lifted_id).lower == 0.0);
  CHECK(lifted.var(lifts.entries[1].lifted_id).upper == 16.0);
  CHECK(lifts.entries[2].def.kind == LiftDef::Kind::bilinear);
  CHECK(lifted.var(lifts.entries[2].lifted_id).lower == -16.0);
  CHECK(lifted.var(lifts.entries[2].lifted_id).upper == 32.0);
}

TEST_CASE("lift x1*x6 of the bundled benchmark") {
  const Problem p = builtin_nlp1();
  auto [lifted, lifts] = lift_monomials(p);
  bool found = false;
  for (const LiftEntry& e : lifts.entries) {
    if (e.def.kind == LiftDef::Kind::bilinear && e.def.a == 0 && e.def.b == 5) {
      found = true;
      CHECK(lifted.var(e.lifted_id).lower == doctest::Approx(1000.0));
      CHECK(lifted.var(e.lifted_id).upper == doctest::Approx(1e7));
    }
  }
  CHECK(found);
}

TEST_CASE("lifting negates >= constraints to <=") {
  Problem p;
  p.add_variable("x", 0.0, 1.0);
  p.add_variable("y", 0.0, 1.0);
  Constraint c;
  c.expr.terms = {term(1.0, {{0, 1}, {1, 1}})};
  c.sense = Sense::ge;
  c.rhs = 0.5;
  p.constraints.push_back(c);
  auto [lifted, lifts] = lift_monomials(p);
  REQUIRE(lifted.constraints.size() == 1);
  CHECK(lifted.constraints[0].sense == Sense::le);
  CHECK(lifted.constraints[0].rhs == -0.5);
}

TEST_CASE("validate flags inverted bounds and unknown variables") {
  Problem p;
  p.add_variable("a", 2.0, 1.0);
  const auto diags1 = validate(p);
  REQUIRE(!diags1.empty());
  CHECK(diags1[0].variable == 0);

  Problem q;
  q.add_variable("b", 0.0, 1.0, true);
  CHECK(validate(q).empty());

  Constraint c;
  c.expr.terms = {term(1.0, {{7, 1}})};
  q.constraints.push_back(c);
  const auto diags2 = validate(q);
  REQUIRE(!diags2.empty());
  CHECK(diags2[0].constraint == 0);
}

TEST_CASE("lifted problem round-trips evaluation and bounds") {
  const Problem p = builtin_nlp1();
  auto [lifted, lifts] = lift_monomials(p);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < 1000; ++s) {
    std::vector<double> x(p.variables.size());
    for (size_t i = 0; i < x.size(); ++i) {
      const Variable& v = p.variables[i];
      x[i] = v.lower + unit(rng) * (v.upper - v.lower);
    }
    const std::vector<double> full = lifts.lifted_values(x);
    // Lifted defining products stay inside the computed lifted bounds.
    for (const LiftEntry& e : lifts.entries) {
      const Variable& v = lifted.var(e.lifted_id);
      CHECK(full[e.lifted_id] >= v.lower - 1e-9 * std::abs(v.lower));
      CHECK(full[e.lifted_id] <= v.upper + 1e-9 * std::abs(v.upper));
    }
    // Objective and constraints agree with the original at the extension.
    const double fo = p.objective.evaluate(x);
    const double fl = lifted.objective.evaluate(full);
    CHECK(fl == doctest::Approx(fo).epsilon(1e-9));
    for (size_t ci = 0; ci < p.constraints.size(); ++ci) {
      const Constraint& orig = p.constraints[ci];
      const double go = orig.expr.evaluate(x);
      // Find the lifted constraint (senses may be flipped to <=).
      const Constraint& lc = lifted.constraints[ci];
      const double gl = lc.expr.evaluate(full);
      const double sign = orig.sense == Sense::ge ? -1.0 : 1.0;
      CHECK(gl == doctest::Approx(sign * go).epsilon(1e-9));
    }
  }
}

TEST_CASE("interval helpers cover sign cases") {
  CHECK(interval_product(-1.0, 2.0, -3.0, 4.0) ==
        std::pair<double, double>{-6.0, 8.0});
  CHECK(interval_square(-1.0, 2.0) == std::pair<double, double>{0.0, 4.0});
  CHECK(interval_square(1.0, 2.0) == std::pair<double, double>{1.0, 4.0});
  CHECK(interval_square(-3.0, -2.0) == std::pair<double, double>{4.0, 9.0});
}
