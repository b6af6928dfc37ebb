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

#ifndef AMPOPT_SIMPLEX_HPP
#define AMPOPT_SIMPLEX_HPP

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ampopt/milp.hpp"

namespace ampopt {

enum class LpStatus {
  optimal,
  infeasible,
  unbounded,
  iteration_limit,
  time_limit,
  numerical_error,
};

/// Nonbasic variables sit at a bound (or at zero when free).
enum class ColState : std::uint8_t { basic, at_lower, at_upper, free_zero };

struct Basis {
  std::vector<int> basic;        // row -> column
  std::vector<ColState> state;   // per column
  bool empty() const { return basic.empty(); }
};

struct LpResult {
  LpStatus status = LpStatus::numerical_error;
  double objective = 0.0;
  std::vector<double> x;  // structural columns only
  Basis basis;
  long iterations = 0;
};

/// Bounded-variable revised primal simplex over the rows of a MilpModel plus
/// any number of appended cut rows.  Every row gets a logical slack column;
/// the basis is factorized sparsely and updated in product form between
/// refactorizations.  Geometric scaling (powers of two) is applied up front.
///
/// A solver instance is single-use state over one model snapshot; bounds of
/// structural columns can be overridden per solve (branching fixes).
class SimplexSolver {
 public:
  SimplexSolver(const MilpModel& model, const std::vector<LinearRow>& cuts);

  /// `lower`/`upper` override structural bounds when non-null.  `warm` seeds
  /// the basis; columns beyond its size (new cut slacks) start basic.
  LpResult solve(const std::vector<double>* lower,
                 const std::vector<double>* upper, const Basis* warm,
                 std::optional<std::chrono::steady_clock::time_point> deadline);

  int num_rows() const { return m_; }
  int num_structurals() const { return n_struct_; }

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
  int m_ = 0;
  int n_struct_ = 0;
};

}  // namespace ampopt

#endif  // AMPOPT_SIMPLEX_HPP
