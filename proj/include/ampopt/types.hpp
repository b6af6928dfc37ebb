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

#ifndef AMPOPT_TYPES_HPP
#define AMPOPT_TYPES_HPP

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace ampopt {

using VarId = int;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SolStatus {
  optimal,
  feasible,
  infeasible,
  bound_only,
};

/// A point in variable space together with the value it achieves.
struct Solution {
  SolStatus status = SolStatus::infeasible;
  std::vector<double> point;   // indexed by variable id
  double objective = kInf;
  double dual_bound = -kInf;
  // Active partition index per partitioned variable, when the solution came
  // from a piecewise relaxation.
  std::map<VarId, int> active_partition;
  // Values of the original binary variables (subset of `point`, kept for the
  // upper-bounding restriction).
  std::map<VarId, double> binary_values;

  bool has_point() const { return !point.empty(); }
};

}  // namespace ampopt

#endif  // AMPOPT_TYPES_HPP
