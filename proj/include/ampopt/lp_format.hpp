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

#ifndef AMPOPT_LP_FORMAT_HPP
#define AMPOPT_LP_FORMAT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ampopt/milp.hpp"

namespace ampopt {

/// Write `model` plus `extra_rows` in the CPLEX LP dialect.  Columns are
/// named x<j>; coefficients carry 17 significant digits.  Quadratic rows are
/// not representable here and must be enforced by the caller through cuts.
void write_lp(const MilpModel& model, const std::vector<LinearRow>& extra_rows,
              std::ostream& out);

/// Result document of an external solve: one `key value` pair per line.
/// Recognized keys: status (optimal|feasible|infeasible|unbounded|
/// time_limit|error), objective, dual_bound, and one `var x<j> <value>` line
/// per column.  Unknown keys are ignored.
SolveResult read_result(std::istream& in, int num_vars);

}  // namespace ampopt

#endif  // AMPOPT_LP_FORMAT_HPP
