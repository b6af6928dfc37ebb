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

#ifndef AMPOPT_LOCAL_HPP
#define AMPOPT_LOCAL_HPP

#include <vector>

#include "ampopt/model.hpp"
#include "ampopt/partition.hpp"
#include "ampopt/types.hpp"

namespace ampopt {

struct LocalConfig {
  int multistart_count = 5;
  double penalty_initial = 10.0;
  double penalty_growth = 10.0;
  double feas_tol = 1e-6;
  int max_inner_iters = 200;
  unsigned seed = 1;
};

/// The partition-restricted upper-bounding problem: continuous partitioned
/// variables re-boxed to their interval active in `relax_solution`, original
/// binaries fixed to their relaxation values.  Throws
/// std::runtime_error("lower-bound solution incomplete") when the relaxation
/// solution carries no point.
Problem build_upper_problem(const Problem& problem,
                            const Solution& relax_solution,
                            const PartitionMap& partitions);

/// Quadratic-penalty projected descent with multistart.  Returns the best
/// point with max constraint violation <= feas_tol, or an infeasible-status
/// solution when no start reaches feasibility.
Solution local_solve(const Problem& problem, const std::vector<double>& start,
                     const LocalConfig& config);

/// Keep the lower objective; the candidate must pass a fresh feasibility
/// check on `problem` before it can displace the incumbent.
Solution update_incumbent(const Solution& current, const Solution& candidate,
                          const Problem& problem, double feas_tol);

}  // namespace ampopt

#endif  // AMPOPT_LOCAL_HPP
