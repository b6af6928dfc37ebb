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

#include "ampopt/obbt.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <thread>

#include "ampopt/relax.hpp"

namespace ampopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

MilpModel build_obbt_subproblem(const Problem& problem,
                                const PartitionMap& partitions, VarId var,
                                bool maximize, std::optional<double> cutoff) {
  auto [lifted, lifts] = lift_monomials(problem);
  MilpModel model = build_relaxation(lifted, lifts, partitions);
  if (cutoff) {
    LinearRow row;
    row.coeffs = model.objective;
    row.sense = RowSense::le;
    row.rhs = *cutoff - model.objective_offset;
    model.add_row(std::move(row));
  }
  model.objective = {{var, maximize ? -1.0 : 1.0}};
  model.objective_offset = 0.0;
  return model;
}

namespace {

struct VarOutcome {
  double new_lower, new_upper;
  double seconds = 0.0;
};

/// Min and max subproblems for one variable against the given box snapshot.
VarOutcome tighten_one(const Problem& problem, const PartitionMap& partitions,
                       VarId v, const BoundsVector& box,
                       std::optional<double> cutoff, const ObbtConfig& config,
                       MilpBackend& backend) {
  const Clock::time_point t0 = Clock::now();
  Problem boxed = problem;
  for (Variable& pv : boxed.variables) {
    pv.lower = box.lower[pv.id];
    pv.upper = box.upper[pv.id];
  }
  const PartitionMap clipped = clip_to_bounds(partitions, boxed);

  VarOutcome out{box.lower[v], box.upper[v]};
  SolveOptions opts;
  opts.time_limit = config.per_milp_time_limit;

  const double orig_width = problem.var(v).upper - problem.var(v).lower;
  const double margin =
      std::isfinite(orig_width) ? config.safety * orig_width : 0.0;

  for (const bool maximize : {false, true}) {
    MilpModel sub = build_obbt_subproblem(boxed, clipped, v, maximize, cutoff);
    const SolveResult r = backend.solve(sub, opts);
    if (r.status == MilpStatus::optimal || r.status == MilpStatus::feasible ||
        r.status == MilpStatus::time_limit) {
      // The dual bound is valid even on early termination; at optimality it
      // equals the objective.
      const double cand = maximize ? -r.dual_bound : r.dual_bound;
      if (!std::isfinite(cand)) continue;
      if (maximize)
        out.new_upper = std::clamp(cand + margin, box.lower[v], out.new_upper);
      else
        out.new_lower = std::clamp(cand - margin, out.new_lower, box.upper[v]);
    }
    // Infeasible under the cutoff proves no improvement over the incumbent
    // reaches this variable's box edge; the prior bound stands.
  }
  if (out.new_lower > out.new_upper)
    out.new_lower = out.new_upper = 0.5 * (out.new_lower + out.new_upper);
  out.seconds = seconds_since(t0);
  return out;
}

}  // namespace

ObbtResult tighten_bounds(const Problem& problem, const PartitionMap& partitions,
                          const std::optional<Solution>& incumbent,
                          const ObbtConfig& config, MilpBackend& backend) {
  const Clock::time_point t0 = Clock::now();
  ObbtResult res;
  const int n = static_cast<int>(problem.variables.size());
  res.bounds.lower.resize(n);
  res.bounds.upper.resize(n);
  for (int i = 0; i < n; ++i) {
    res.bounds.lower[i] = problem.variables[i].lower;
    res.bounds.upper[i] = problem.variables[i].upper;
  }
  if (config.variant == ObbtVariant::none) return res;

  std::vector<VarId> vars;
  for (const auto& [id, ivs] : partitions.intervals) vars.push_back(id);
  if (vars.empty()) return res;

  std::optional<double> cutoff;
  if (incumbent && incumbent->has_point() && std::isfinite(incumbent->objective))
    cutoff = incumbent->objective;

  std::vector<double> tol_l(vars.size()), tol_u(vars.size());
  for (size_t k = 0; k < vars.size(); ++k) {
    const Variable& pv = problem.var(vars[k]);
    tol_l[k] = config.eps_lower * (pv.upper - pv.lower);
    tol_u[k] = config.eps_upper * (pv.upper - pv.lower);
  }

  // PBT re-seeds the partitions around the incumbent on the current box at
  // the start of every sweep; the relaxation then tightens as the box
  // contracts instead of keeping the original absolute interval widths.
  const bool reseed = config.variant == ObbtVariant::pbt && incumbent &&
                      incumbent->has_point();
  const std::set<VarId> var_set(vars.begin(), vars.end());

  for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    const BoundsVector snapshot = res.bounds;
    std::vector<VarOutcome> outcomes(vars.size());

    PartitionMap sweep_parts = partitions;
    if (reseed) {
      Problem boxed = problem;
      for (Variable& pv : boxed.variables) {
        pv.lower = res.bounds.lower[pv.id];
        pv.upper = res.bounds.upper[pv.id];
      }
      sweep_parts = initialize_partitions(boxed, var_set, incumbent->point,
                                          ObbtVariant::pbt, config.refine);
    }

    if (config.workers > 1) {
      std::atomic<size_t> next{0};
      auto worker = [&]() {
        for (size_t k = next.fetch_add(1); k < vars.size();
             k = next.fetch_add(1))
          outcomes[k] = tighten_one(problem, sweep_parts, vars[k], snapshot,
                                    cutoff, config, backend);
      };
      std::vector<std::thread> pool;
      const int nthreads =
          std::min<int>(config.workers, static_cast<int>(vars.size()));
      pool.reserve(nthreads);
      for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
      for (std::thread& t : pool) t.join();
    } else {
      // Strictly sequential: each subproblem sees earlier updates.
      for (size_t k = 0; k < vars.size(); ++k) {
        outcomes[k] = tighten_one(problem, sweep_parts, vars[k], res.bounds,
                                  cutoff, config, backend);
        res.bounds.lower[vars[k]] = outcomes[k].new_lower;
        res.bounds.upper[vars[k]] = outcomes[k].new_upper;
      }
    }

    bool converged = true;
    for (size_t k = 0; k < vars.size(); ++k) {
      const VarId v = vars[k];
      ObbtEvent ev;
      ev.sweep = sweep;
      ev.variable = v;
      ev.old_lower = snapshot.lower[v];
      ev.old_upper = snapshot.upper[v];
      if (config.workers > 1) {
        res.bounds.lower[v] = std::max(snapshot.lower[v], outcomes[k].new_lower);
        res.bounds.upper[v] = std::min(snapshot.upper[v], outcomes[k].new_upper);
        if (res.bounds.lower[v] > res.bounds.upper[v])
          res.bounds.lower[v] = res.bounds.upper[v] =
              0.5 * (res.bounds.lower[v] + res.bounds.upper[v]);
      }
      ev.new_lower = res.bounds.lower[v];
      ev.new_upper = res.bounds.upper[v];
      ev.seconds = outcomes[k].seconds;
      res.events.push_back(ev);
      if (ev.new_lower - ev.old_lower > tol_l[k]) converged = false;
      if (ev.old_upper - ev.new_upper > tol_u[k]) converged = false;
    }
    res.sweeps = sweep;
    if (converged) break;
  }
  res.seconds = seconds_since(t0);
  return res;
}

}  // namespace ampopt
