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

#ifndef AMPOPT_MILP_HPP
#define AMPOPT_MILP_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ampopt/types.hpp"

namespace ampopt {

enum class RowSense { le, eq };

struct LinearRow {
  std::vector<std::pair<int, double>> coeffs;  // column -> coefficient
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

/// x_hat >= x_base^2, kept nonlinear and satisfied through tangent cuts at
/// solve time.
struct ConvexQuadRow {
  int lifted = -1;
  int base = -1;
};

struct MilpVar {
  std::string name;
  double lower = -kInf;
  double upper = kInf;
  bool is_binary = false;
};

struct MilpModel {
  std::vector<MilpVar> vars;
  std::vector<LinearRow> rows;
  std::vector<ConvexQuadRow> quad_rows;
  std::vector<std::pair<int, double>> objective;
  double objective_offset = 0.0;
  // (problem variable id, partition index) -> indicator column.
  std::map<std::pair<VarId, int>, int> indicators;
  int num_problem_vars = 0;  // leading columns mirror the lifted problem

  int add_var(std::string name, double lower, double upper,
              bool is_binary = false);
  void add_row(LinearRow row);
  int num_binaries() const;
};

struct SolveOptions {
  std::optional<double> time_limit;  // seconds
  double rel_gap = 1e-9;
  double integer_tol = 1e-6;
  double oa_tol = 1e-7;
  long node_limit = -1;  // < 0: unlimited
  // Objective value known to be achievable elsewhere: subtrees bounded at or
  // above it are pruned.  The reported dual bound stays a valid lower bound
  // on min(true optimum, cutoff).
  std::optional<double> cutoff;
};

enum class MilpStatus {
  optimal,
  feasible,    // incumbent found, not proven optimal (limits hit)
  infeasible,
  unbounded,
  time_limit,  // no incumbent when the limit hit
  error,
};

struct SolveResult {
  MilpStatus status = MilpStatus::error;
  std::optional<std::vector<double>> point;
  std::optional<double> objective;
  double dual_bound = -kInf;
  long nodes = 0;
  std::string diagnostic;

  bool has_point() const { return point.has_value(); }
};

/// Solve the continuous relaxation (integrality dropped; quadratic rows
/// enforced through tangent cuts up to oa_tol).
SolveResult solve_lp(const MilpModel& model, const SolveOptions& options = {});

/// Branch and bound with best-bound node selection, lowest-index fractional
/// branching, and lazy tangent cuts for the quadratic rows.
SolveResult solve_milp(const MilpModel& model,
                       const SolveOptions& options = {});

struct BackendCapabilities {
  bool milp = false;
  bool time_limit = false;
  bool dual_bound = false;
};

class MilpBackend {
 public:
  virtual ~MilpBackend() = default;
  virtual std::string name() const = 0;
  virtual BackendCapabilities capabilities() const = 0;
  virtual SolveResult solve(const MilpModel& model,
                            const SolveOptions& options) = 0;
};

/// The built-in simplex + branch-and-bound solver.
std::unique_ptr<MilpBackend> make_bundled_backend();

/// Adapter that ships the model to an external command as an LP-format file
/// and reads the result back as a key-value document.  The command receives
/// the model path and the result path as its two arguments.
std::unique_ptr<MilpBackend> make_external_backend(std::string command,
                                                   BackendCapabilities caps);

/// Throws std::runtime_error when the requested features exceed the backend's
/// capabilities (checked once at configuration time).
void check_backend(const MilpBackend& backend, bool need_milp,
                   bool need_time_limit, bool need_dual_bound);

}  // namespace ampopt

#endif  // AMPOPT_MILP_HPP
