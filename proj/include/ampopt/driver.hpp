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

#ifndef AMPOPT_DRIVER_HPP
#define AMPOPT_DRIVER_HPP

#include <map>
#include <string>
#include <vector>

#include "ampopt/local.hpp"
#include "ampopt/milp.hpp"
#include "ampopt/obbt.hpp"
#include "ampopt/partition.hpp"

namespace ampopt {

struct AmpConfig {
  double epsilon = 1e-4;   // relative gap tolerance
  double timeout = 3600.0; // seconds
  RefineConfig refine;
  ObbtConfig obbt;
  PartitionStrategy strategy = PartitionStrategy::all;
  SolveOptions solver;  // per-MILP options for the lower-bound solves
  LocalConfig local;
  unsigned seed = 1;
  int max_iterations = 200;
};

struct IterationRecord {
  int iteration = 0;
  double lower_bound = -kInf;
  double upper_bound = kInf;
  double gap = kInf;
  std::map<VarId, int> partition_counts;
  double milp_seconds = 0.0;
  double local_seconds = 0.0;
};

enum class TerminationReason { converged, timeout, iteration_limit, infeasible };

struct AmpResult {
  Solution incumbent;            // best feasible point found
  Solution relaxation_solution;  // last lower-bound MILP point
  double lower_bound = -kInf;
  double gap = kInf;
  int iterations = 0;
  std::vector<IterationRecord> trace;
  TerminationReason reason = TerminationReason::iteration_limit;
  PartitionMap final_partitions;
  ObbtResult obbt;
  double seconds = 0.0;
  std::vector<std::string> events;
};

const char* to_string(TerminationReason reason);

/// (ub - lb) / max(|lb|, 1e-8); infinite when either bound is missing.
double compute_gap(double ub, double lb);

/// The main loop: presolve (local solve, partition initialization, optional
/// bound tightening, initial lower bound), then refine / lower-bound /
/// upper-bound iterations until the gap closes or a limit is hit.
AmpResult amp_solve(const Problem& problem, const AmpConfig& config,
                    MilpBackend& backend);

}  // namespace ampopt

#endif  // AMPOPT_DRIVER_HPP
