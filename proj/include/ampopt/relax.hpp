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

#ifndef AMPOPT_RELAX_HPP
#define AMPOPT_RELAX_HPP

#include <map>
#include <set>
#include <vector>

#include "ampopt/milp.hpp"
#include "ampopt/model.hpp"
#include "ampopt/partition.hpp"

namespace ampopt {

/// The four McCormick envelope rows for x_hat = x_i * x_j over a box (for a
/// square, pass xi == xj).  Throws std::runtime_error("unbounded operand")
/// on infinite bounds.
std::vector<LinearRow> mccormick_bilinear(const Interval& bi,
                                          const Interval& bj, int xhat, int xi,
                                          int xj);

/// Plain McCormick block for every link of the lift chain, using the
/// interval-derived bounds stored on the lifted problem.
std::vector<LinearRow> recursive_mccormick(const Problem& lifted,
                                           const LiftMap& lifts);

/// Incrementally adds piecewise envelopes to a MilpModel whose leading
/// columns mirror the (lifted) problem variables.  Auxiliary product columns
/// are shared: one z per (variable, indicator) pair, one w per indicator
/// pair, one indicator family per partitioned variable.
class RelaxBuilder {
 public:
  explicit RelaxBuilder(MilpModel* model) : model_(model) {}

  /// Indicator columns for problem variable `pid` (mirrored at column `x`)
  /// over `pieces`, creating the sum-to-one and partition-selection rows on
  /// first use.  A single piece yields no indicators (empty result).
  /// Throws std::runtime_error("invalid partition map") when the pieces do
  /// not tile the column's bounds.
  const std::vector<int>& indicators(VarId pid, int x,
                                     const std::vector<Interval>& pieces);

  /// Piecewise McCormick rows for x_hat = x_i * x_j; single-piece sides fall
  /// back to the plain envelope bounds.
  void piecewise_mccormick(int xhat, VarId pid_i, int xi,
                           const std::vector<Interval>& pieces_i, VarId pid_j,
                           int xj, const std::vector<Interval>& pieces_j);

  /// x_hat >= x^2 as a ConvexQuadRow plus the piecewise secant rows.
  void piecewise_quadratic(int xhat, VarId pid, int x,
                           const std::vector<Interval>& pieces);

 private:
  int z_column(int x, int y);
  int w_column(int y1, int y2);
  struct Side {
    VarId pid = -1;
    int x = -1;
    std::vector<double> lo, hi;
    std::vector<int> y;  // -1 entries mean the constant-one indicator
  };
  Side make_side(VarId pid, int x, const std::vector<Interval>& pieces);
  void envelope_row(int xhat, const Side& a, const Side& b, bool lower_bound,
                    const std::vector<double>& pa,
                    const std::vector<double>& pb);
  void aggregate(const Side& a, const Side& b);

  MilpModel* model_;
  std::map<VarId, std::vector<int>> indicator_cols_;
  std::map<std::pair<int, int>, int> z_cols_;
  std::map<std::pair<int, int>, int> w_cols_;
  std::set<std::pair<int, VarId>> zsum_done_;
  std::set<std::pair<VarId, VarId>> wsum_done_;
};

/// Assemble the full piecewise relaxation: problem columns (originals +
/// lifts) with their interval bounds, linear rows copied verbatim, and one
/// piecewise envelope per lift entry.  Variables absent from `parts` (or
/// carrying a single interval) use the plain envelopes.
MilpModel build_relaxation(const Problem& lifted, const LiftMap& lifts,
                           const PartitionMap& parts);

}  // namespace ampopt

#endif  // AMPOPT_RELAX_HPP
