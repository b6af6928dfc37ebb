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

#include "ampopt/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ampopt/relax.hpp"

namespace ampopt {

const char* to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::converged:
      return "converged";
    case TerminationReason::timeout:
      return "time-limit";
    case TerminationReason::iteration_limit:
      return "iteration-limit";
    case TerminationReason::infeasible:
      return "infeasible";
  }
  return "unknown";
}

double compute_gap(double ub, double lb) {
  if (!std::isfinite(lb) || !std::isfinite(ub)) return kInf;
  return (ub - lb) / std::max(std::abs(lb), 1e-8);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Solution view of a MILP result over a relaxation model: original-variable
/// point, active indicators, binary values.
Solution to_solution(const SolveResult& r, const MilpModel& model,
                     const Problem& problem) {
  Solution sol;
  if (!r.has_point()) {
    sol.status = SolStatus::bound_only;
    sol.dual_bound = r.dual_bound;
    return sol;
  }
  sol.status = r.status == MilpStatus::optimal ? SolStatus::optimal
                                               : SolStatus::feasible;
  sol.point.assign(r.point->begin(),
                   r.point->begin() + problem.variables.size());
  sol.objective = r.objective.value_or(kInf);
  sol.dual_bound = r.dual_bound;
  for (const auto& [key, col] : model.indicators)
    if ((*r.point)[col] > 0.5) sol.active_partition[key.first] = key.second;
  for (const Variable& v : problem.variables)
    if (v.is_binary) sol.binary_values[v.id] = std::round(sol.point[v.id]);
  return sol;
}

std::vector<double> box_midpoint(const Problem& problem) {
  std::vector<double> x(problem.variables.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const Variable& v = problem.variables[i];
    x[i] = 0.5 * (v.lower + v.upper);
  }
  return x;
}

std::map<VarId, int> partition_counts(const PartitionMap& map) {
  std::map<VarId, int> counts;
  for (const auto& [id, ivs] : map.intervals)
    counts[id] = static_cast<int>(ivs.size());
  return counts;
}

}  // namespace

AmpResult amp_solve(const Problem& problem, const AmpConfig& config,
                    MilpBackend& backend) {
  const Clock::time_point t0 = Clock::now();
  AmpResult res;
  auto remaining = [&]() { return config.timeout - seconds_since(t0); };
  auto milp_options = [&]() {
    SolveOptions opts = config.solver;
    const double left = std::max(remaining(), 0.01);
    opts.time_limit = opts.time_limit ? std::min(*opts.time_limit, left) : left;
    // The incumbent objective prunes relaxation subtrees that cannot improve
    // the gap; the dual bound stays valid for the gap computation.
    if (res.incumbent.has_point()) opts.cutoff = res.incumbent.objective;
    return opts;
  };
  auto finish = [&](TerminationReason reason) {
    res.reason = reason;
    res.gap = compute_gap(res.incumbent.has_point() ? res.incumbent.objective
                                                    : kInf,
                          res.lower_bound);
    res.seconds = seconds_since(t0);
    return res;
  };

  const std::set<VarId> part_vars =
      select_partition_variables(problem, config.strategy);

  // Presolve: local solve of the full problem.
  LocalConfig local_cfg = config.local;
  local_cfg.seed = config.seed;
  res.incumbent = local_solve(problem, box_midpoint(problem), local_cfg);
  std::vector<double> seed_point;
  if (res.incumbent.has_point()) {
    seed_point = res.incumbent.point;
    res.events.push_back("presolve: local solve feasible");
  } else {
    // Seed partition placement from the unpartitioned relaxation instead.
    res.events.push_back("presolve: local solve infeasible");
    PartitionMap empty;
    auto [lifted, lifts] = lift_monomials(problem);
    const MilpModel root = build_relaxation(lifted, lifts, empty);
    const SolveResult r = backend.solve(root, milp_options());
    if (r.status == MilpStatus::infeasible)
      return finish(TerminationReason::infeasible);
    if (r.has_point())
      seed_point.assign(r.point->begin(),
                        r.point->begin() + problem.variables.size());
    else
      seed_point = box_midpoint(problem);
  }

  PartitionMap partitions = initialize_partitions(
      problem, part_vars, seed_point, config.obbt.variant, config.refine);

  // Optional bound tightening; the working box carries the result.
  Problem boxed = problem;
  if (config.obbt.variant != ObbtVariant::none) {
    std::optional<Solution> cutoff_sol;
    if (res.incumbent.has_point()) cutoff_sol = res.incumbent;
    ObbtConfig obbt_cfg = config.obbt;
    obbt_cfg.refine = config.refine;
    res.obbt =
        tighten_bounds(problem, partitions, cutoff_sol, obbt_cfg, backend);
    for (Variable& v : boxed.variables) {
      v.lower = res.obbt.bounds.lower[v.id];
      v.upper = res.obbt.bounds.upper[v.id];
    }
    res.events.push_back("obbt: " + std::to_string(res.obbt.sweeps) +
                         " sweeps");
    // Re-seed the adaptive partitions on the contracted box.
    partitions = initialize_partitions(boxed, part_vars, seed_point,
                                       ObbtVariant::pbt, config.refine);
  } else {
    res.obbt.bounds.lower.resize(problem.variables.size());
    res.obbt.bounds.upper.resize(problem.variables.size());
    for (const Variable& v : problem.variables) {
      res.obbt.bounds.lower[v.id] = v.lower;
      res.obbt.bounds.upper[v.id] = v.upper;
    }
  }

  auto [lifted, lifts] = lift_monomials(boxed);

  // Initial lower bound over the presolve partitions.
  {
    const Clock::time_point tm = Clock::now();
    const MilpModel model = build_relaxation(lifted, lifts, partitions);
    const SolveResult r = backend.solve(model, milp_options());
    if (r.status == MilpStatus::infeasible && !res.incumbent.has_point())
      return finish(TerminationReason::infeasible);
    if (std::isfinite(r.dual_bound))
      res.lower_bound = std::max(res.lower_bound, r.dual_bound);
    if (r.has_point()) res.relaxation_solution = to_solution(r, model, boxed);

    IterationRecord rec;
    rec.iteration = 0;
    rec.lower_bound = res.lower_bound;
    rec.upper_bound =
        res.incumbent.has_point() ? res.incumbent.objective : kInf;
    rec.gap = compute_gap(rec.upper_bound, rec.lower_bound);
    rec.partition_counts = partition_counts(partitions);
    rec.milp_seconds = seconds_since(tm);
    res.trace.push_back(rec);
    res.gap = rec.gap;
    if (rec.gap <= config.epsilon) {
      res.final_partitions = partitions;
      return finish(TerminationReason::converged);
    }
  }

  while (res.iterations < config.max_iterations) {
    if (remaining() <= 0.0) {
      res.final_partitions = partitions;
      return finish(TerminationReason::timeout);
    }
    ++res.iterations;
    IterationRecord rec;
    rec.iteration = res.iterations;

    if (res.relaxation_solution.has_point())
      partitions = refine_partitions(boxed, partitions,
                                     res.relaxation_solution, config.refine);
    rec.partition_counts = partition_counts(partitions);

    // Lower bound.
    const Clock::time_point tm = Clock::now();
    const MilpModel model = build_relaxation(lifted, lifts, partitions);
    const SolveResult r = backend.solve(model, milp_options());
    rec.milp_seconds = seconds_since(tm);
    if (r.status == MilpStatus::infeasible) {
      res.final_partitions = partitions;
      if (!res.incumbent.has_point())
        return finish(TerminationReason::infeasible);
      // A feasible incumbent contradicts an infeasible relaxation; close the
      // gap on the incumbent rather than report a wrong proof.
      res.lower_bound = res.incumbent.objective;
      return finish(TerminationReason::converged);
    }
    if (std::isfinite(r.dual_bound))
      res.lower_bound = std::max(res.lower_bound, r.dual_bound);
    if (r.has_point()) res.relaxation_solution = to_solution(r, model, boxed);

    // Upper bound from the partition-restricted problem.
    const Clock::time_point tl = Clock::now();
    if (res.relaxation_solution.has_point() && remaining() > 0.0) {
      const Problem restricted =
          build_upper_problem(boxed, res.relaxation_solution, partitions);
      LocalConfig iter_cfg = local_cfg;
      iter_cfg.seed = config.seed + static_cast<unsigned>(res.iterations);
      const Solution candidate = local_solve(
          restricted, res.relaxation_solution.point, iter_cfg);
      res.incumbent = update_incumbent(res.incumbent, candidate, problem,
                                       config.local.feas_tol);
    }
    rec.local_seconds = seconds_since(tl);

    rec.lower_bound = res.lower_bound;
    rec.upper_bound =
        res.incumbent.has_point() ? res.incumbent.objective : kInf;
    rec.gap = compute_gap(rec.upper_bound, rec.lower_bound);
    res.trace.push_back(rec);
    res.gap = rec.gap;

    if (rec.gap <= config.epsilon) {
      res.final_partitions = partitions;
      return finish(TerminationReason::converged);
    }
    if (r.status == MilpStatus::time_limit ||
        (r.status == MilpStatus::feasible && remaining() <= 0.0)) {
      res.final_partitions = partitions;
      return finish(TerminationReason::timeout);
    }
  }
  res.final_partitions = partitions;
  return finish(res.iterations >= config.max_iterations
                    ? TerminationReason::iteration_limit
                    : TerminationReason::timeout);
}

}  // namespace ampopt
