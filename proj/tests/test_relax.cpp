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

#include <cmath>
#include <random>

#include "ampopt/io.hpp"
#include "ampopt/milp.hpp"
#include "ampopt/model.hpp"
#include "ampopt/relax.hpp"

using namespace ampopt;

namespace {

double row_residual(const LinearRow& row, const std::vector<double>& x) {
  double v = -row.rhs;
  for (const auto& [j, c] : row.coeffs) v += c * x.at(j);
  return v;  // feasible iff <= 0 (le) or == 0 (eq)
}

bool satisfies(const LinearRow& row, const std::vector<double>& x,
               double tol = 1e-8) {
  const double r = row_residual(row, x);
  return row.sense == RowSense::eq ? std::abs(r) <= tol : r <= tol;
}

/// Fix a model column to a value by pinching its bounds.
void fix(MilpModel& model, int col, double value) {
  model.vars.at(col).lower = value;
  model.vars.at(col).upper = value;
}

/// Feasibility of the model with some columns pinched, via the LP solver.
bool lp_feasible(const MilpModel& model) {
  const SolveResult r = solve_lp(model);
  return r.status != MilpStatus::infeasible;
}

}  // namespace

TEST_CASE("mccormick_bilinear on the unit box") {
  const auto rows = mccormick_bilinear({0, 1}, {0, 1}, 2, 0, 1);
  REQUIRE(rows.size() == 4);
  // Rows reduce to xh >= 0, xh >= x+y-1, xh <= x, xh <= y; compare the
  // affine functions at probe points.
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 2.0);
  for (int s = 0; s < 50; ++s) {
    const std::vector<double> p = {unit(rng), unit(rng), unit(rng)};
    CHECK(row_residual(rows[0], p) == doctest::Approx(-p[2]));
    CHECK(row_residual(rows[1], p) == doctest::Approx(p[0] + p[1] - 1 - p[2]));
    CHECK(row_residual(rows[2], p) == doctest::Approx(p[2] - p[0]));
    CHECK(row_residual(rows[3], p) == doctest::Approx(p[2] - p[1]));
  }
}

TEST_CASE("envelope is tight at box corners") {
  const auto rows = mccormick_bilinear({0, 1}, {0, 1}, 2, 0, 1);
  for (double xi : {0.0, 1.0}) {
    for (double xj : {0.0, 1.0}) {
      // Implied xh interval from the four rows at (xi, xj).
      double lo = -1e30, hi = 1e30;
      for (const LinearRow& row : rows) {
        double cxh = 0.0, rest = -row.rhs;
        for (const auto& [j, c] : row.coeffs) {
          if (j == 2)
            cxh = c;
          else
            rest += c * (j == 0 ? xi : xj);
        }
        if (cxh < 0.0)
          lo = std::max(lo, rest / -cxh);
        else
          hi = std::min(hi, -rest / cxh);
      }
      CHECK(lo == doctest::Approx(xi * xj));
      CHECK(hi == doctest::Approx(xi * xj));
    }
  }
}

TEST_CASE("lower envelope row for the benchmark's x1*x6 box") {
  // x1 in [100,10000], x6 in [10,1000]: xh >= 100*x6 + 10*x1 - 1000.
  const auto rows = mccormick_bilinear({100, 10000}, {10, 1000}, 2, 0, 1);
  std::map<int, double> c;
  for (const auto& [j, v] : rows[0].coeffs) c[j] = v;
  CHECK(c.at(1) == doctest::Approx(100.0));
  CHECK(c.at(0) == doctest::Approx(10.0));
  CHECK(c.at(2) == doctest::Approx(-1.0));
  CHECK(rows[0].rhs == doctest::Approx(1000.0));
}

TEST_CASE("recursive_mccormick block counts and sampling validity") {
  Problem p;
  for (int i = 0; i < 3; ++i)
    p.add_variable("x" + std::to_string(i + 1), 0.0, 1.0);
  Constraint c;
  Term t;
  t.coefficient = 1.0;
  t.powers = {{0, 1}, {1, 1}, {2, 1}};
  c.expr.terms = {t};
  c.rhs = 1.0;
  p.constraints.push_back(c);
  auto [lifted, lifts] = lift_monomials(p);
  const auto rows = recursive_mccormick(lifted, lifts);
  CHECK(rows.size() == 8);  // two chain links, four rows each

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < 1000; ++s) {
    std::vector<double> x = {unit(rng), unit(rng), unit(rng)};
    const std::vector<double> full = lifts.lifted_values(x);
    for (const LinearRow& row : rows) CHECK(satisfies(row, full));
  }
}

TEST_CASE("degree-2 term yields a single envelope block") {
  Problem p;
  p.add_variable("a", 0.0, 1.0);
  p.add_variable("b", 0.0, 1.0);
  Constraint c;
  Term t;
  t.coefficient = 1.0;
  t.powers = {{0, 1}, {1, 1}};
  c.expr.terms = {t};
  c.rhs = 1.0;
  p.constraints.push_back(c);
  auto [lifted, lifts] = lift_monomials(p);
  CHECK(recursive_mccormick(lifted, lifts).size() == 4);
}

TEST_CASE("single-piece piecewise McCormick collapses to the plain envelope") {
  MilpModel model;
  model.add_var("x", 0.0, 2.0);
  model.add_var("y", 0.0, 3.0);
  model.add_var("xh", 0.0, 6.0);
  RelaxBuilder builder(&model);
  builder.piecewise_mccormick(2, 0, 0, {{0.0, 2.0}}, 1, 1, {{0.0, 3.0}});
  const auto plain = mccormick_bilinear({0, 2}, {0, 3}, 2, 0, 1);
  REQUIRE(model.rows.size() == plain.size());
  CHECK(model.indicators.empty());
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unit(-1.0, 4.0);
  for (int s = 0; s < 50; ++s) {
    const std::vector<double> p = {unit(rng), unit(rng), unit(rng)};
    for (size_t i = 0; i < plain.size(); ++i)
      CHECK(row_residual(model.rows[i], p) ==
            doctest::Approx(row_residual(plain[i], p)));
  }
}

TEST_CASE("split-domain point is feasible with the left indicator active") {
  MilpModel model;
  model.add_var("x", 0.0, 2.0);
  model.add_var("y", 0.0, 2.0);
  model.add_var("xh", 0.0, 4.0);
  RelaxBuilder builder(&model);
  builder.piecewise_mccormick(2, 0, 0, {{0.0, 1.0}, {1.0, 2.0}}, 1, 1,
                              {{0.0, 2.0}});
  fix(model, 0, 0.5);
  fix(model, 1, 0.5);
  fix(model, 2, 0.25);
  fix(model, model.indicators.at({0, 0}), 1.0);
  fix(model, model.indicators.at({0, 1}), 0.0);
  CHECK(lp_feasible(model));
}

TEST_CASE("2x2 partitions: four indicators, two sum-to-one rows") {
  MilpModel model;
  model.add_var("x", 0.0, 2.0);
  model.add_var("y", 0.0, 2.0);
  model.add_var("xh", 0.0, 4.0);
  RelaxBuilder builder(&model);
  builder.piecewise_mccormick(2, 0, 0, {{0.0, 1.0}, {1.0, 2.0}}, 1, 1,
                              {{0.0, 1.0}, {1.0, 2.0}});
  CHECK(model.indicators.size() == 4);
  int sum_rows = 0;
  for (const LinearRow& row : model.rows) {
    if (row.sense != RowSense::eq || row.rhs != 1.0) continue;
    bool all_binary_unit = true;
    for (const auto& [j, c] : row.coeffs)
      all_binary_unit = all_binary_unit && model.vars[j].is_binary && c == 1.0;
    if (all_binary_unit) ++sum_rows;
  }
  CHECK(sum_rows == 2);
}

TEST_CASE("piecewise quadratic bounds xh over the active piece") {
  auto build = [] {
    MilpModel model;
    model.add_var("x", 0.0, 2.0);
    model.add_var("xh", 0.0, 4.0);
    RelaxBuilder builder(&model);
    builder.piecewise_quadratic(1, 0, 0, {{0.0, 1.0}, {1.0, 2.0}});
    fix(model, 0, 0.5);
    fix(model, model.indicators.at({0, 0}), 1.0);
    fix(model, model.indicators.at({0, 1}), 0.0);
    return model;
  };
  MilpModel lo = build();
  lo.objective = {{1, 1.0}};
  const SolveResult rlo = solve_lp(lo);
  REQUIRE(rlo.status == MilpStatus::optimal);
  CHECK(*rlo.objective == doctest::Approx(0.25).epsilon(1e-5));
  MilpModel hi = build();
  hi.objective = {{1, -1.0}};
  const SolveResult rhi = solve_lp(hi);
  REQUIRE(rhi.status == MilpStatus::optimal);
  CHECK(-*rhi.objective == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("unpartitioned secant over a symmetric box") {
  MilpModel model;
  model.add_var("x", -1.0, 1.0);
  model.add_var("xh", 0.0, 1.0);
  RelaxBuilder builder(&model);
  builder.piecewise_quadratic(1, 0, 0, {{-1.0, 1.0}});
  model.objective = {{1, -1.0}};  // maximize xh
  const SolveResult r = solve_lp(model);
  REQUIRE(r.status == MilpStatus::optimal);
  CHECK(-*r.objective == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("midpoint witness separates the quadratic and bilinear forms") {
  // For piece [l,u] with l != u, (x=(l+u)/2, xh=l*u) satisfies the i=j
  // piecewise McCormick rows but violates xh >= x^2.
  const std::vector<Interval> pieces = {{0.0, 1.0}, {1.0, 2.0}};
  for (int k = 0; k < 2; ++k) {
    const double l = pieces[k].lower, u = pieces[k].upper;
    auto build = [&](bool quadratic) {
      MilpModel model;
      model.add_var("x", 0.0, 2.0);
      model.add_var("xh", 0.0, 4.0);
      RelaxBuilder builder(&model);
      if (quadratic)
        builder.piecewise_quadratic(1, 0, 0, pieces);
      else
        builder.piecewise_mccormick(1, 0, 0, pieces, 0, 0, pieces);
      fix(model, 0, 0.5 * (l + u));
      fix(model, 1, l * u);
      for (int m = 0; m < 2; ++m)
        fix(model, model.indicators.at({0, m}), m == k ? 1.0 : 0.0);
      return model;
    };
    MilpModel bilinear = build(false);
    CHECK(lp_feasible(bilinear));
    MilpModel quad = build(true);
    CHECK(!lp_feasible(quad));
  }
}

namespace {

Problem reciprocal_toy() {
  // min x1+x2 s.t. x1*x2 >= 1, box [0.25,4]^2; optimum 2 at (1,1).
  Problem p;
  p.add_variable("x1", 0.25, 4.0);
  p.add_variable("x2", 0.25, 4.0);
  Term o1, o2;
  o1.coefficient = o2.coefficient = 1.0;
  o1.powers = {{0, 1}};
  o2.powers = {{1, 1}};
  p.objective.terms = {o1, o2};
  Constraint c;
  Term t;
  t.coefficient = 1.0;
  t.powers = {{0, 1}, {1, 1}};
  c.expr.terms = {t};
  c.sense = Sense::ge;
  c.rhs = 1.0;
  p.constraints.push_back(c);
  return p;
}

}  // namespace

TEST_CASE("build_relaxation: unpartitioned benchmark LP is a valid lower bound") {
  const Problem p = builtin_nlp1();
  auto [lifted, lifts] = lift_monomials(p);
  PartitionMap empty;
  const MilpModel model = build_relaxation(lifted, lifts, empty);
  CHECK(model.indicators.empty());
  const SolveResult r = solve_lp(model);
  REQUIRE(r.status == MilpStatus::optimal);
  CHECK(*r.objective <= 7049.2479);
}

TEST_CASE("build_relaxation: linear problems produce a plain LP") {
  Problem p;
  p.add_variable("x", 0.0, 1.0);
  Term t;
  t.coefficient = 1.0;
  t.powers = {{0, 1}};
  p.objective.terms = {t};
  auto [lifted, lifts] = lift_monomials(p);
  PartitionMap empty;
  const MilpModel model = build_relaxation(lifted, lifts, empty);
  CHECK(model.indicators.empty());
  CHECK(model.quad_rows.empty());
  CHECK(model.num_binaries() == 0);
}

TEST_CASE("refining partitions never weakens the relaxation bound") {
  const Problem p = reciprocal_toy();
  auto [lifted, lifts] = lift_monomials(p);
  auto lower_bound = [&](int pieces) {
    PartitionMap map;
    for (VarId v : {0, 1}) {
      std::vector<Interval> ivs;
      for (int k = 0; k < pieces; ++k)
        ivs.push_back({0.25 + 3.75 * k / pieces, 0.25 + 3.75 * (k + 1) / pieces});
      map.intervals[v] = ivs;
    }
    const MilpModel model = build_relaxation(lifted, lifts, map);
    const SolveResult r = solve_milp(model);
    REQUIRE(r.status == MilpStatus::optimal);
    return *r.objective;
  };
  const double b1 = lower_bound(1);
  const double b2 = lower_bound(2);
  const double b4 = lower_bound(4);
  CHECK(b2 >= b1 - 1e-9);
  CHECK(b4 >= b2 - 1e-9);
  CHECK(b4 <= 2.0 + 1e-6);  // still a lower bound on the true optimum
}

TEST_CASE("feasible points extend to the piecewise relaxation") {
  const Problem p = reciprocal_toy();
  auto [lifted, lifts] = lift_monomials(p);
  PartitionMap map;
  map.intervals[0] = {{0.25, 1.0}, {1.0, 2.5}, {2.5, 4.0}};
  map.intervals[1] = {{0.25, 2.0}, {2.0, 4.0}};
  const MilpModel base = build_relaxation(lifted, lifts, map);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> unit(0.25, 4.0);
  int tested = 0;
  for (int s = 0; s < 2000 && tested < 200; ++s) {
    const std::vector<double> x = {unit(rng), unit(rng)};
    if (p.max_violation(x) > 0.0) continue;
    ++tested;
    MilpModel model = base;
    const std::vector<double> full = lifts.lifted_values(x);
    for (size_t i = 0; i < full.size(); ++i) fix(model, (int)i, full[i]);
    for (const auto& [key, col] : base.indicators) {
      const auto& ivs = map.of(key.first);
      int active = 0;
      for (int k = 0; k < (int)ivs.size(); ++k)
        if (x[key.first] >= ivs[k].lower && x[key.first] <= ivs[k].upper) {
          active = k;
          break;
        }
      fix(model, col, key.second == active ? 1.0 : 0.0);
    }
    CHECK(lp_feasible(model));
  }
  CHECK(tested == 200);
}
