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

#ifndef AMPOPT_PARTITION_HPP
#define AMPOPT_PARTITION_HPP

#include <map>
#include <set>
#include <vector>

#include "ampopt/model.hpp"
#include "ampopt/types.hpp"

namespace ampopt {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
};

/// Ordered, contiguous partition intervals per partitioned variable, tiling
/// the variable's current box.  Zero-width intervals are never stored.
struct PartitionMap {
  std::map<VarId, std::vector<Interval>> intervals;

  bool contains(VarId id) const { return intervals.count(id) > 0; }
  const std::vector<Interval>& of(VarId id) const { return intervals.at(id); }
  int count(VarId id) const { return static_cast<int>(of(id).size()); }
};

struct RefineConfig {
  double delta = 8.0;      // > 1
  double width_tol = 1e-4; // relative to the original box width
};

enum class PartitionStrategy { all, vertex_cover };
enum class ObbtVariant { none, bt, pbt };

/// Continuous variables to partition.  `all` selects every continuous
/// variable occurring in a term of total degree >= 2; `vertex_cover` takes a
/// greedy max-degree vertex cover of the bilinear-pair graph (ties to the
/// smaller id; squared variables are always covered).
std::set<VarId> select_partition_variables(const Problem& problem,
                                           PartitionStrategy strategy);

/// Presolve partition map.  BT mode: one interval per variable.  PBT mode:
/// the three-way split around `point`, i.e. one refinement applied to the
/// single-interval map.
PartitionMap initialize_partitions(const Problem& problem,
                                   const std::set<VarId>& vars,
                                   const std::vector<double>& point,
                                   ObbtVariant mode, const RefineConfig& cfg);

/// Adaptive refinement.  The active interval of width w is split around the
/// relaxation point into pieces of width ~2w/delta; if it is already below
/// the width tolerance, the widest inactive interval splits at its midpoint.
PartitionMap refine_partitions(const Problem& problem, const PartitionMap& map,
                               const Solution& relax_solution,
                               const RefineConfig& cfg);

/// Index of the interval active in `sol` (indicator first, membership as
/// fallback; boundary values belong to the lower-indexed interval).
/// Throws std::runtime_error("stale partition map") if the value lies
/// outside every interval.
int active_partition(const PartitionMap& map, VarId id, const Solution& sol);

/// Intersect every interval with [lower, upper], dropping empty pieces.
/// Used after bound tightening shrinks the variable box.
PartitionMap clip_to_bounds(const PartitionMap& map, const Problem& problem);

}  // namespace ampopt

#endif  // AMPOPT_PARTITION_HPP
