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

#include "ampopt/driver.hpp"
#include "ampopt/io.hpp"

using namespace ampopt;

namespace {

Problem reciprocal_toy(double lo = 0.25, double hi = 4.0) {
  Problem p;
  p.name = "reciprocal";
  p.add_variable("x1", lo, hi);
  p.add_variable("x2", lo, hi);
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
  return p;
}

AmpConfig quick_config() {
  AmpConfig cfg;
  cfg.obbt.variant = ObbtVariant::none;
  cfg.refine.delta = 4.0;
  cfg.timeout = 120.0;
  return cfg;
}

}  // namespace

TEST_CASE("compute_gap arithmetic and guards") {
  CHECK(compute_gap(7049.25, 7049.2479) ==
        doctest::Approx(2.979e-7).epsilon(1e-3));
  CHECK(compute_gap(kInf, 100.0) == kInf);
  CHECK(compute_gap(1.0, -kInf) == kInf);
  // lb = 0 falls back to the 1e-8 guard denominator.
  CHECK(compute_gap(1.0, 0.0) == doctest::Approx(1e8));
}

TEST_CASE("linear problems converge immediately") {
  Problem p;
  p.add_variable("x", 2.0, 5.0);
  Term t;
  t.coefficient = 1.0;
  t.powers = {{0, 1}};
  p.objective.terms = {t};
  auto backend = make_bundled_backend();
  const AmpResult res = amp_solve(p, quick_config(), *backend);
  CHECK(res.reason == TerminationReason::converged);
  CHECK(res.iterations == 0);
  CHECK(res.incumbent.objective == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(res.gap <= 1e-4);
}

TEST_CASE("bilinear toy converges with a monotone lower bound") {
  const Problem p = reciprocal_toy();
  auto backend = make_bundled_backend();
  const AmpResult res = amp_solve(p, quick_config(), *backend);
  CHECK(res.reason == TerminationReason::converged);
  CHECK(res.gap <= 1e-4);
  // Sandwich around the known optimum 2.
  CHECK(res.lower_bound <= 2.0 + 1e-6);
  CHECK(res.incumbent.objective >= 2.0 - 1e-6);
  double prev = -kInf;
  for (const IterationRecord& rec : res.trace) {
    CHECK(rec.lower_bound >=
          prev - 1e-7 * std::max(1.0, std::abs(prev)));
    prev = rec.lower_bound;
  }
}

TEST_CASE("infeasible relaxation proves infeasibility") {
  const Problem p = reciprocal_toy(0.0, 0.1);  // x1*x2 >= 1 unreachable
  auto backend = make_bundled_backend();
  const AmpResult res = amp_solve(p, quick_config(), *backend);
  CHECK(res.reason == TerminationReason::infeasible);
}

TEST_CASE("fixed seeds reproduce the trace exactly") {
  const Problem p = reciprocal_toy();
  auto backend = make_bundled_backend();
  const AmpResult a = amp_solve(p, quick_config(), *backend);
  const AmpResult b = amp_solve(p, quick_config(), *backend);
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].lower_bound == b.trace[i].lower_bound);
    CHECK(a.trace[i].upper_bound == b.trace[i].upper_bound);
    CHECK(a.trace[i].partition_counts == b.trace[i].partition_counts);
  }
}

TEST_CASE("iteration cap is a distinct termination reason") {
  const Problem p = reciprocal_toy();
  AmpConfig cfg = quick_config();
  cfg.epsilon = 1e-12;  // unreachable gap
  cfg.max_iterations = 2;
  auto backend = make_bundled_backend();
  const AmpResult res = amp_solve(p, cfg, *backend);
  CHECK(res.reason == TerminationReason::iteration_limit);
  CHECK(res.iterations == 2);
}

TEST_CASE("benchmark run with bound tightening closes the gap") {
  const Problem p = builtin_nlp1();
  AmpConfig cfg;
  cfg.refine.delta = 4.0;
  cfg.timeout = 900.0;
  auto backend = make_bundled_backend();
  const AmpResult res = amp_solve(p, cfg, *backend);
  CHECK(res.reason == TerminationReason::converged);
  CHECK(res.gap <= 1e-4);
  CHECK(res.incumbent.objective ==
        doctest::Approx(7049.2479).epsilon(1e-4));
  // Lower bounds are non-decreasing across the trace.
  double prev = -kInf;
  for (const IterationRecord& rec : res.trace) {
    CHECK(rec.lower_bound >=
          prev - 1e-7 * std::max(1.0, std::abs(prev)));
    prev = rec.lower_bound;
  }
}
