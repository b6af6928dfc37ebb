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

#ifndef AMPOPT_OBBT_HPP
#define AMPOPT_OBBT_HPP

#include <optional>
#include <vector>

#include "ampopt/milp.hpp"
#include "ampopt/model.hpp"
#include "ampopt/partition.hpp"

namespace ampopt {

struct ObbtConfig {
  ObbtVariant variant = ObbtVariant::pbt;
  double eps_lower = 1e-3;  // relative to the original box width
  double eps_upper = 1e-3;
  std::optional<double> per_milp_time_limit;  // seconds
  int max_sweeps = 25;
  int workers = 1;
  // Each tightened bound retreats by this fraction of the original box width,
  // guarding against tolerance-level over-tightening when the cutoff sits at
  // the optimum.
  double safety = 1e-3;
  // Seeding geometry for the per-sweep PBT partitions around the incumbent.
  RefineConfig refine;
};

struct BoundsVector {
  std::vector<double> lower, upper;  // per original variable id
};

struct ObbtEvent {
  int sweep = 0;
  VarId variable = -1;
  double old_lower = 0.0, old_upper = 0.0;
  double new_lower = 0.0, new_upper = 0.0;
  double seconds = 0.0;
};

struct ObbtResult {
  BoundsVector bounds;
  int sweeps = 0;
  std::vector<ObbtEvent> events;
  double seconds = 0.0;
};

/// The min/max-x_i subproblem over the piecewise relaxation of `problem`
/// (whose variable bounds are the current box).  With `cutoff` present, the
/// original objective is constrained to f(x) <= cutoff.  `maximize` flips
/// the objective to -x_i, so the caller reads the upper bound as the negated
/// optimum (and the negated dual bound on early termination).
MilpModel build_obbt_subproblem(const Problem& problem,
                                const PartitionMap& partitions, VarId var,
                                bool maximize, std::optional<double> cutoff);

/// Sequential bound tightening: sweeps of min/max subproblems over every
/// partitioned variable until the sup-norm change of both bound vectors
/// drops below the tolerances or max_sweeps is reached.  Timed-out
/// subproblems contribute their dual bound only.  With workers > 1, each
/// sweep solves against a snapshot of the sweep-start bounds and merges at
/// the sweep barrier; with 1 worker, updates apply between variables.
ObbtResult tighten_bounds(const Problem& problem, const PartitionMap& partitions,
                          const std::optional<Solution>& incumbent,
                          const ObbtConfig& config, MilpBackend& backend);

}  // namespace ampopt

#endif  // AMPOPT_OBBT_HPP
