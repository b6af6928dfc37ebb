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

LinearRow row(std::vector<std::pair<int, double>> coeffs, double rhs,
              RowSense sense = RowSense::le) {
  LinearRow r;
  r.coeffs = std::move(coeffs);
  r.sense = sense;
  r.rhs = rhs;
  return r;
}

/// Exhaustive indicator enumeration: fix one indicator per block to 1 (rest
/// to 0), solve the LP, take the best objective over feasible patterns.
std::optional<double> enumerate_optimum(const MilpModel& model) {
  std::vector<std::pair<VarId, std::vector<int>>> blocks;
  for (const auto& [key, col] : model.indicators) {
    if (blocks.empty() || blocks.back().first != key.first)
      blocks.push_back({key.first, {}});
    blocks.back().second.push_back(col);
  }
  long patterns = 1;
  for (const auto& [pid, cols] : blocks) patterns *= (long)cols.size();
  std::optional<double> best;
  for (long p = 0; p < patterns; ++p) {
    MilpModel fixed = model;
    long rem = p;
    for (const auto& [pid, cols] : blocks) {
      const long pick = rem % (long)cols.size();
      rem /= (long)cols.size();
      for (size_t k = 0; k < cols.size(); ++k) {
        fixed.vars[cols[k]].lower = (long)k == pick ? 1.0 : 0.0;
        fixed.vars[cols[k]].upper = (long)k == pick ? 1.0 : 0.0;
      }
    }
    const SolveResult r = solve_lp(fixed);
    if (r.status != MilpStatus::optimal) continue;
    if (!best || *r.objective < *best) best = *r.objective;
  }
  return best;
}

}  // namespace

TEST_CASE("solve_lp: bound and constraint interplay") {
  MilpModel m;
  m.add_var("x", 0.0, 10.0);
  m.objective = {{0, 1.0}};
  m.add_row(row({{0, -1.0}}, -3.0));  // x >= 3
  const SolveResult r = solve_lp(m);
  REQUIRE(r.status == MilpStatus::optimal);
  CHECK(*r.objective == doctest::Approx(3.0));
}

TEST_CASE("solve_lp: infeasible rows are certified") {
  MilpModel m;
  m.add_var("x", 0.0, 10.0);
  m.add_row(row({{0, 1.0}}, 1.0));    // x <= 1
  m.add_row(row({{0, -1.0}}, -2.0));  // x >= 2
  CHECK(solve_lp(m).status == MilpStatus::infeasible);
}

TEST_CASE("solve_lp: unpartitioned benchmark relaxation stays below optimum") {
  const Problem p = builtin_nlp1();
  auto [lifted, lifts] = lift_monomials(p);
  PartitionMap empty;
  const MilpModel model = build_relaxation(lifted, lifts, empty);
  const SolveResult r = solve_lp(model);
  REQUIRE(r.status == MilpStatus::optimal);
  CHECK(*r.objective <= 7049.2479);
  CHECK(r.dual_bound == doctest::Approx(*r.objective));
}

TEST_CASE("solve_milp: forced indicator solves in one node") {
  MilpModel m;
  m.add_var("y0", 0.0, 1.0, true);
  m.add_var("y1", 0.0, 1.0, true);
  m.objective = {{0, 1.0}, {1, 2.0}};
  m.add_row(row({{0, 1.0}, {1, 1.0}}, 1.0, RowSense::eq));
  m.add_row(row({{1, 1.0}}, 0.0));  // y1 <= 0 forces y0 = 1
  const SolveResult r = solve_milp(m);
  REQUIRE(r.status == MilpStatus::optimal);
  CHECK(*r.objective == doctest::Approx(1.0));
  CHECK((*r.point)[0] == doctest::Approx(1.0));
  CHECK(r.nodes == 1);
}

TEST_CASE("solve_milp: outer approximation finds the parabola vertex") {
  MilpModel m;
  m.add_var("x", 0.0, 1.0);
  m.add_var("xh", 0.0, 1.0);
  m.quad_rows.push_back({1, 0});  // xh >= x^2
  m.objective = {{1, 1.0}, {0, -1.0}};
  const SolveResult r = solve_milp(m);
  REQUIRE(r.status == MilpStatus::optimal);
  CHECK(*r.objective == doctest::Approx(-0.25).epsilon(1e-5));
  CHECK((*r.point)[0] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("solve_milp: 2x2 piecewise toy matches indicator enumeration") {
  // min x1+x2 s.t. x1*x2 >= 1 over [0.25,4]^2 with 2 pieces per variable.
  Problem p;
  p.add_variable("x1", 0.25, 4.0);
  p.add_variable("x2", 0.25, 4.0);
  Term o1, o2, t;
  o1.coefficient = o2.coefficient = t.coefficient = 1.0;
  o1.powers = {{0, 1}};
  o2.powers = {{1, 1}};
  p.objective.terms = {o1, o2};
  t.powers = {{0, 1}, {1, 1}};
  Constraint c;
  c.expr.terms = {t};
  c.sense = Sense::ge;
  c.rhs = 1.0;
  p.constraints.push_back(c);
  auto [lifted, lifts] = lift_monomials(p);
  PartitionMap map;
  map.intervals[0] = {{0.25, 1.5}, {1.5, 4.0}};
  map.intervals[1] = {{0.25, 2.0}, {2.0, 4.0}};
  const MilpModel model = build_relaxation(lifted, lifts, map);
  const SolveResult r = solve_milp(model);
  REQUIRE(r.status == MilpStatus::optimal);
  const auto oracle = enumerate_optimum(model);
  REQUIRE(oracle.has_value());
  CHECK(*r.objective ==
        doctest::Approx(*oracle).epsilon(1e-6));
}

TEST_CASE("solve_milp: random piecewise models match the enumeration oracle") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Problem p;
    const int n = 2 + (int)(unit(rng) * 2);  // 2..3 variables
    for (int i = 0; i < n; ++i) {
      const double lo = -1.0 + 2.0 * unit(rng);
      p.add_variable("x" + std::to_string(i), lo, lo + 0.5 + 2.0 * unit(rng));
    }
    for (int i = 0; i < n; ++i) {
      Term t;
      t.coefficient = -1.0 + 2.0 * unit(rng);
      t.powers = {{i, 1}};
      p.objective.terms.push_back(t);
    }
    for (int k = 0; k < 2; ++k) {
      Constraint c;
      Term t;
      t.coefficient = unit(rng) < 0.5 ? 1.0 : -1.0;
      const int a = (int)(unit(rng) * n), b = (int)(unit(rng) * n);
      if (a == b)
        t.powers = {{a, 2}};
      else
        t.powers = {{a, 1}, {b, 1}};
      c.expr.terms = {t};
      Term lin;
      lin.coefficient = -1.0 + 2.0 * unit(rng);
      lin.powers = {{(int)(unit(rng) * n), 1}};
      c.expr.terms.push_back(lin);
      c.sense = unit(rng) < 0.5 ? Sense::le : Sense::ge;
      c.rhs = -0.5 + 3.0 * unit(rng);
      p.constraints.push_back(c);
    }
    auto [lifted, lifts] = lift_monomials(p);
    PartitionMap map;
    for (int i = 0; i < n; ++i) {
      const Variable& v = p.variables[i];
      const int pieces = 2 + (int)(unit(rng) * 2);  // 2..3 pieces
      std::vector<Interval> ivs;
      for (int k = 0; k < pieces; ++k)
        ivs.push_back({v.lower + (v.upper - v.lower) * k / pieces,
                       v.lower + (v.upper - v.lower) * (k + 1) / pieces});
      map.intervals[i] = ivs;
    }
    const MilpModel model = build_relaxation(lifted, lifts, map);
    REQUIRE(model.num_binaries() <= 12);
    const SolveResult r = solve_milp(model);
    const auto oracle = enumerate_optimum(model);
    if (!oracle) {
      CHECK(r.status == MilpStatus::infeasible);
      continue;
    }
    REQUIRE(r.status == MilpStatus::optimal);
    CHECK(*r.objective == doctest::Approx(*oracle).epsilon(1e-6));
    // Dual bound is a valid lower bound on the enumerated optimum.
    CHECK(r.dual_bound <= *oracle + 1e-6 * std::max(1.0, std::abs(*oracle)));
  }
}

TEST_CASE("solve_milp: cutoff prunes but keeps the dual bound valid") {
  MilpModel m;
  m.add_var("x", 0.0, 10.0);
  m.add_var("y", 0.0, 1.0, true);
  m.objective = {{0, 1.0}};
  m.add_row(row({{0, -1.0}, {1, -1.0}}, -3.0));  // x + y >= 3
  SolveOptions generous;
  generous.cutoff = 5.0;
  const SolveResult r1 = solve_milp(m, generous);
  REQUIRE(r1.status == MilpStatus::optimal);
  CHECK(*r1.objective == doctest::Approx(2.0));  // y = 1, x = 2
  SolveOptions tight;
  tight.cutoff = 1.5;  // below the true optimum: everything is pruned
  const SolveResult r2 = solve_milp(m, tight);
  CHECK(!r2.has_point());
  CHECK(r2.dual_bound <= 2.0 + 1e-9);
  CHECK(r2.dual_bound >= 1.5 - 1e-9);
}

TEST_CASE("reproducibility: identical model gives identical results") {
  const Problem p = builtin_nlp1();
  auto [lifted, lifts] = lift_monomials(p);
  PartitionMap map;
  for (int i = 0; i < 8; ++i) {
    const Variable& v = p.variables[i];
    const double mid = 0.5 * (v.lower + v.upper);
    map.intervals[i] = {{v.lower, mid}, {mid, v.upper}};
  }
  const MilpModel model = build_relaxation(lifted, lifts, map);
  const SolveResult a = solve_milp(model);
  const SolveResult b = solve_milp(model);
  REQUIRE(a.status == b.status);
  CHECK(*a.objective == *b.objective);
  CHECK(a.nodes == b.nodes);
  CHECK(a.dual_bound == b.dual_bound);
}

TEST_CASE("tangent cuts are globally valid") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> unit(-5.0, 5.0);
  for (int s = 0; s < 200; ++s) {
    const double x0 = unit(rng);
    const double x = unit(rng);
    const double xh = x * x + std::abs(unit(rng));
    // Tangent xh >= 2*x0*x - x0^2 is implied by xh >= x^2.
    CHECK(xh >= 2 * x0 * x - x0 * x0 - 1e-12);
  }
}

TEST_CASE("bundled backend announces full capabilities") {
  auto backend = make_bundled_backend();
  const BackendCapabilities caps = backend->capabilities();
  CHECK(caps.milp);
  CHECK(caps.time_limit);
  CHECK(caps.dual_bound);
  CHECK_NOTHROW(check_backend(*backend, true, true, true));
}

TEST_CASE("capability mismatch is a configuration error") {
  auto backend = make_external_backend("/bin/false", {true, false, false});
  CHECK_THROWS(check_backend(*backend, true, true, false));
  CHECK_THROWS(check_backend(*backend, true, false, true));
  CHECK_NOTHROW(check_backend(*backend, true, false, false));
}
