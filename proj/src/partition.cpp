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

#include "ampopt/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ampopt {

namespace {

double clamp(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

}  // namespace

std::set<VarId> select_partition_variables(const Problem& problem,
                                           PartitionStrategy strategy) {
  std::set<VarId> nonlinear_vars;
  std::set<std::pair<VarId, VarId>> edges;
  std::set<VarId> forced;  // squares

  auto scan = [&](const PolynomialExpr& expr) {
    for (const Term& t : normalize(expr).terms) {
      if (t.total_degree() < 2) continue;
      std::vector<VarId> vars;
      for (const auto& [v, e] : t.powers) {
        if (problem.var(v).is_binary) continue;
        nonlinear_vars.insert(v);
        if (e >= 2) forced.insert(v);
        vars.push_back(v);
      }
      for (size_t i = 0; i + 1 < vars.size(); ++i)
        for (size_t j = i + 1; j < vars.size(); ++j)
          edges.insert({vars[i], vars[j]});
    }
  };
  scan(problem.objective);
  for (const Constraint& c : problem.constraints) scan(c.expr);

  if (strategy == PartitionStrategy::all) return nonlinear_vars;

  // Greedy max-degree vertex cover, smaller id on ties.
  std::set<VarId> cover = forced;
  std::set<std::pair<VarId, VarId>> open;
  for (const auto& e : edges)
    if (!cover.count(e.first) && !cover.count(e.second)) open.insert(e);
  while (!open.empty()) {
    std::map<VarId, int> degree;
    for (const auto& e : open) {
      ++degree[e.first];
      ++degree[e.second];
    }
    VarId best = -1;
    int best_deg = -1;
    for (const auto& [v, d] : degree) {
      if (d > best_deg) {
        best = v;
        best_deg = d;
      }
    }
    cover.insert(best);
    for (auto it = open.begin(); it != open.end();) {
      if (it->first == best || it->second == best)
        it = open.erase(it);
      else
        ++it;
    }
  }
  return cover;
}

PartitionMap initialize_partitions(const Problem& problem,
                                   const std::set<VarId>& vars,
                                   const std::vector<double>& point,
                                   ObbtVariant mode, const RefineConfig& cfg) {
  PartitionMap map;
  for (VarId v : vars) {
    const Variable& var = problem.var(v);
    map.intervals[v] = {Interval{var.lower, var.upper}};
  }
  if (mode == ObbtVariant::bt) return map;

  Solution seed;
  seed.status = SolStatus::feasible;
  seed.point = point;
  for (VarId v : vars) {
    const Variable& var = problem.var(v);
    seed.point.at(v) = clamp(point.at(v), var.lower, var.upper);
  }
  return refine_partitions(problem, map, seed, cfg);
}

int active_partition(const PartitionMap& map, VarId id, const Solution& sol) {
  auto it = sol.active_partition.find(id);
  if (it != sol.active_partition.end()) return it->second;
  const auto& ivs = map.of(id);
  const double x = sol.point.at(id);
  for (int k = 0; k < static_cast<int>(ivs.size()); ++k)
    if (x <= ivs[k].upper && x >= ivs[k].lower) return k;
  throw std::runtime_error("stale partition map");
}

PartitionMap refine_partitions(const Problem& problem, const PartitionMap& map,
                               const Solution& relax_solution,
                               const RefineConfig& cfg) {
  PartitionMap out;
  for (const auto& [id, ivs] : map.intervals) {
    const Variable& var = problem.var(id);
    const int active = active_partition(map, id, relax_solution);
    const Interval act = ivs.at(active);
    const double eps = cfg.width_tol * (var.upper - var.lower);
    const double xi = act.width() / cfg.delta;
    std::vector<Interval> next;
    if (xi > eps) {
      const double x = clamp(relax_solution.point.at(id), act.lower, act.upper);
      // The gamma clamps keep the three pieces nested inside the active
      // interval so the refined map still tiles the box.
      const double g1 = act.lower;
      const double g2 = std::max(act.lower, x - xi);
      const double g3 = std::min(act.upper, x + xi);
      const double g4 = act.upper;
      for (int k = 0; k < static_cast<int>(ivs.size()); ++k) {
        if (k != active) {
          next.push_back(ivs[k]);
          continue;
        }
        for (const Interval piece :
             {Interval{g1, g2}, Interval{g2, g3}, Interval{g3, g4}})
          if (piece.width() > 0.0) next.push_back(piece);
      }
    } else {
      // Exhaustiveness fallback: split the widest inactive interval (lowest
      // index on ties) at its midpoint.
      int widest = -1;
      double wmax = -1.0;
      for (int k = 0; k < static_cast<int>(ivs.size()); ++k) {
        if (k == active) continue;
        if (ivs[k].width() > wmax) {
          wmax = ivs[k].width();
          widest = k;
        }
      }
      if (widest < 0) {
        next = ivs;  // single interval already below tolerance
      } else {
        for (int k = 0; k < static_cast<int>(ivs.size()); ++k) {
          if (k != widest) {
            next.push_back(ivs[k]);
            continue;
          }
          const double mid = ivs[k].lower + ivs[k].width() / 2.0;
          next.push_back({ivs[k].lower, mid});
          next.push_back({mid, ivs[k].upper});
        }
      }
    }
    out.intervals[id] = std::move(next);
  }
  return out;
}

PartitionMap clip_to_bounds(const PartitionMap& map, const Problem& problem) {
  PartitionMap out;
  for (const auto& [id, ivs] : map.intervals) {
    const Variable& var = problem.var(id);
    std::vector<Interval> next;
    for (const Interval& iv : ivs) {
      Interval c{std::max(iv.lower, var.lower), std::min(iv.upper, var.upper)};
      if (c.width() > 0.0) next.push_back(c);
    }
    if (next.empty()) next.push_back({var.lower, var.upper});
    // Re-anchor the ends to the current box.
    next.front().lower = var.lower;
    next.back().upper = var.upper;
    out.intervals[id] = std::move(next);
  }
  return out;
}

}  // namespace ampopt
