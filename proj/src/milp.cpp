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

#include "ampopt/milp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>

#include "ampopt/simplex.hpp"

namespace ampopt {

int MilpModel::add_var(std::string name, double lower, double upper,
                       bool is_binary) {
  vars.push_back({std::move(name), lower, upper, is_binary});
  return static_cast<int>(vars.size()) - 1;
}

void MilpModel::add_row(LinearRow row) { rows.push_back(std::move(row)); }

int MilpModel::num_binaries() const {
  int k = 0;
  for (const MilpVar& v : vars) k += v.is_binary ? 1 : 0;
  return k;
}

namespace {

using Clock = std::chrono::steady_clock;

std::optional<Clock::time_point> make_deadline(const SolveOptions& options) {
  if (!options.time_limit) return std::nullopt;
  return Clock::now() +
         std::chrono::duration_cast<Clock::duration>(
             std::chrono::duration<double>(*options.time_limit));
}

/// Max violation of x_hat >= x_base^2 over the quadratic rows.
double quad_violation(const MilpModel& model, const std::vector<double>& x) {
  double worst = 0.0;
  for (const ConvexQuadRow& q : model.quad_rows)
    worst = std::max(worst, x[q.base] * x[q.base] - x[q.lifted]);
  return worst;
}

/// Tangent cut x_hat >= 2 x0 x - x0^2 for each violated quadratic row.
int add_tangent_cuts(const MilpModel& model, const std::vector<double>& x,
                     double tol, std::vector<LinearRow>& cuts) {
  int added = 0;
  for (const ConvexQuadRow& q : model.quad_rows) {
    const double x0 = x[q.base];
    if (x0 * x0 - x[q.lifted] <= tol) continue;
    LinearRow row;
    row.coeffs = {{q.base, 2.0 * x0}, {q.lifted, -1.0}};
    row.sense = RowSense::le;
    row.rhs = x0 * x0;
    cuts.push_back(std::move(row));
    ++added;
  }
  return added;
}

/// Caches one SimplexSolver per cut-pool size so branch-and-bound nodes reuse
/// the scaled problem instead of rebuilding it.
struct LpEngine {
  const MilpModel* model;
  std::vector<LinearRow> cuts;  // global tangent-cut pool
  std::optional<SimplexSolver> solver;
  size_t built_cuts = static_cast<size_t>(-1);

  explicit LpEngine(const MilpModel* m) : model(m) {}

  SimplexSolver& current() {
    if (!solver || built_cuts != cuts.size()) {
      solver.emplace(*model, cuts);
      built_cuts = cuts.size();
    }
    return *solver;
  }

  /// LP solve with lazy tangent cuts until the quadratic rows hold.
  LpResult solve(const std::vector<double>* lower,
                 const std::vector<double>* upper, const Basis* warm,
                 std::optional<Clock::time_point> deadline, double oa_tol) {
    Basis warm_local;
    if (warm != nullptr) warm_local = *warm;
    LpResult res;
    for (int round = 0; round < 500; ++round) {
      res = current().solve(lower, upper,
                            warm_local.empty() ? nullptr : &warm_local,
                            deadline);
      if (res.status != LpStatus::optimal) return res;
      if (add_tangent_cuts(*model, res.x, oa_tol, cuts) == 0) return res;
      warm_local = res.basis;
    }
    res.status = LpStatus::iteration_limit;
    return res;
  }
};

MilpStatus from_lp_status(LpStatus st) {
  switch (st) {
    case LpStatus::optimal:
      return MilpStatus::optimal;
    case LpStatus::infeasible:
      return MilpStatus::infeasible;
    case LpStatus::unbounded:
      return MilpStatus::unbounded;
    case LpStatus::time_limit:
      return MilpStatus::time_limit;
    default:
      return MilpStatus::error;
  }
}

struct Node {
  long id = 0;
  double bound = -kInf;
  std::vector<std::pair<int, double>> fixings;  // binary column -> value
  Basis basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // best bound first
    return a.id > b.id;                                // then oldest
  }
};

}  // namespace

SolveResult solve_lp(const MilpModel& model, const SolveOptions& options) {
  const auto deadline = make_deadline(options);
  LpEngine engine(&model);
  LpResult lp = engine.solve(nullptr, nullptr, nullptr, deadline,
                             options.oa_tol);
  SolveResult res;
  res.status = from_lp_status(lp.status);
  if (lp.status == LpStatus::optimal) {
    res.point = lp.x;
    res.objective = lp.objective + model.objective_offset;
    res.dual_bound = lp.objective + model.objective_offset;
  } else if (lp.status == LpStatus::unbounded) {
    res.dual_bound = -kInf;
  } else if (lp.status == LpStatus::iteration_limit ||
             lp.status == LpStatus::numerical_error) {
    res.status = MilpStatus::error;
    res.diagnostic = "relaxation solve did not converge";
  }
  return res;
}

SolveResult solve_milp(const MilpModel& model, const SolveOptions& options) {
  const auto deadline = make_deadline(options);
  const int n = static_cast<int>(model.vars.size());

  std::vector<int> binaries;
  for (int j = 0; j < n; ++j)
    if (model.vars[j].is_binary) binaries.push_back(j);

  // Indicator one-hot blocks: fixing one member to 1 fixes its siblings to 0.
  std::map<int, std::vector<int>> siblings;
  {
    std::map<VarId, std::vector<int>> blocks;
    for (const auto& [key, col] : model.indicators)
      blocks[key.first].push_back(col);
    for (const auto& [pid, cols] : blocks)
      for (int c : cols) siblings[c] = cols;
  }

  LpEngine engine(&model);
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  long nodes_done = 0;

  SolveResult res;
  double incumbent = kInf;
  std::vector<double> incumbent_x;
  const double cap =
      options.cutoff ? *options.cutoff - model.objective_offset : kInf;
  bool cap_pruned = false;

  std::vector<double> lower(n), upper(n);
  for (int j = 0; j < n; ++j) {
    lower[j] = model.vars[j].lower;
    upper[j] = model.vars[j].upper;
  }

  Node root;
  root.id = next_id++;
  open.push(std::move(root));

  auto best_open_bound = [&]() {
    return open.empty() ? kInf : open.top().bound;
  };
  auto gap_closed = [&]() {
    if (incumbent == kInf) return false;
    const double lbb = best_open_bound();
    if (lbb == kInf) return true;
    return incumbent - lbb <=
           options.rel_gap * std::max(std::abs(incumbent), 1e-8);
  };
  auto finish = [&](MilpStatus st) {
    if (st == MilpStatus::infeasible && cap_pruned)
      st = MilpStatus::optimal;  // optimum proven >= cutoff, not infeasible
    res.status = st;
    res.nodes = nodes_done;
    res.dual_bound = std::min(best_open_bound(), incumbent);
    if (cap_pruned) res.dual_bound = std::min(res.dual_bound, cap);
    if (incumbent < kInf) {
      res.point = incumbent_x;
      res.objective = incumbent + model.objective_offset;
    }
    if (res.dual_bound == kInf) res.dual_bound = -kInf;  // infeasible tree
    if (std::isfinite(res.dual_bound)) res.dual_bound += model.objective_offset;
    if (st == MilpStatus::optimal && res.objective &&
        (!cap_pruned || incumbent < cap))
      res.dual_bound = *res.objective;
    return res;
  };

  // Unique one-hot blocks and the binaries outside any block.
  std::vector<std::vector<int>> blocks;
  std::vector<int> loose_binaries;
  {
    std::set<int> in_block;
    for (const auto& [c, blk] : siblings) in_block.insert(c);
    std::set<const std::vector<int>*> seen;
    for (int j : binaries) {
      if (!in_block.count(j)) {
        loose_binaries.push_back(j);
      } else if (seen.insert(&siblings[j]).second) {
        blocks.push_back(siblings[j]);
      }
    }
  }

  // Rounding heuristic: snap every indicator block to its heaviest piece,
  // round loose binaries, and re-solve the LP with all binaries fixed.  Any
  // optimum is integral, giving an incumbent that lets best-bound prune.
  auto try_rounding = [&](const LpResult& lp, const std::vector<double>& lo,
                          const std::vector<double>& hi,
                          std::optional<Clock::time_point> dl) {
    std::vector<double> l2 = lo, h2 = hi;
    for (const std::vector<int>& blk : blocks) {
      int pick = -1;
      double weight = -1.0;
      for (int c : blk) {
        if (lo[c] > 0.5) {  // already fixed to one
          pick = c;
          break;
        }
        if (hi[c] < 0.5) continue;  // fixed to zero
        if (lp.x[c] > weight + 1e-12) {
          weight = lp.x[c];
          pick = c;
        }
      }
      if (pick < 0) return;
      for (int c : blk) l2[c] = h2[c] = (c == pick) ? 1.0 : 0.0;
    }
    for (int j : loose_binaries) {
      const double v = std::clamp(std::round(lp.x[j]), lo[j], hi[j]);
      l2[j] = h2[j] = v;
    }
    LpResult sub = engine.solve(&l2, &h2, &lp.basis, dl, options.oa_tol);
    if (sub.status == LpStatus::optimal && sub.objective < incumbent) {
      incumbent = sub.objective;
      incumbent_x = sub.x;
    }
  };

  while (!open.empty()) {
    if (gap_closed()) return finish(MilpStatus::optimal);
    if (deadline && Clock::now() > *deadline)
      return finish(incumbent < kInf ? MilpStatus::feasible
                                     : MilpStatus::time_limit);
    if (options.node_limit >= 0 && nodes_done >= options.node_limit)
      return finish(incumbent < kInf ? MilpStatus::feasible
                                     : MilpStatus::time_limit);

    Node node = open.top();
    open.pop();
    if (node.bound >= cap) {
      cap_pruned = true;
      continue;
    }
    if (node.bound >=
        incumbent - options.rel_gap * std::max(std::abs(incumbent), 1e-8))
      continue;  // pruned by a newer incumbent

    std::vector<double> lo = lower, hi = upper;
    for (const auto& [col, v] : node.fixings) {
      lo[col] = v;
      hi[col] = v;
    }

    LpResult lp = engine.solve(&lo, &hi,
                               node.basis.empty() ? nullptr : &node.basis,
                               deadline, options.oa_tol);
    ++nodes_done;

    if (lp.status == LpStatus::time_limit)
      return finish(incumbent < kInf ? MilpStatus::feasible
                                     : MilpStatus::time_limit);
    if (lp.status == LpStatus::infeasible) continue;
    if (lp.status == LpStatus::unbounded) {
      if (node.fixings.empty()) return finish(MilpStatus::unbounded);
      continue;  // cannot happen with bounded binaries, defensive
    }
    if (lp.status != LpStatus::optimal) {
      res.diagnostic = "node relaxation failed";
      return finish(MilpStatus::error);
    }
    if (lp.objective >= cap) {
      cap_pruned = true;
      continue;
    }
    if (lp.objective >=
        incumbent - options.rel_gap * std::max(std::abs(incumbent), 1e-8))
      continue;

    int branch_col = -1;
    for (int j : binaries) {
      const double v = lp.x[j];
      if (std::min(v - std::floor(v), std::ceil(v) - v) > options.integer_tol &&
          hi[j] > lo[j]) {
        branch_col = j;
        break;
      }
    }
    if (branch_col < 0) {
      if (lp.objective < incumbent) {
        incumbent = lp.objective;
        incumbent_x = lp.x;
      }
      continue;
    }
    try_rounding(lp, lo, hi, deadline);

    for (double v : {std::floor(lp.x[branch_col]), std::ceil(lp.x[branch_col])}) {
      Node child;
      child.id = next_id++;
      child.bound = lp.objective;
      child.fixings = node.fixings;
      child.fixings.push_back({branch_col, v});
      if (v == 1.0) {
        auto it = siblings.find(branch_col);
        if (it != siblings.end())
          for (int c : it->second)
            if (c != branch_col) child.fixings.push_back({c, 0.0});
      }
      child.basis = lp.basis;
      open.push(std::move(child));
    }
  }

  return finish(incumbent < kInf ? MilpStatus::optimal
                                 : MilpStatus::infeasible);
}

namespace {

class BundledBackend final : public MilpBackend {
 public:
  std::string name() const override { return "bundled"; }
  BackendCapabilities capabilities() const override {
    return {true, true, true};
  }
  SolveResult solve(const MilpModel& model,
                    const SolveOptions& options) override {
    return solve_milp(model, options);
  }
};

}  // namespace

std::unique_ptr<MilpBackend> make_bundled_backend() {
  return std::make_unique<BundledBackend>();
}

void check_backend(const MilpBackend& backend, bool need_milp,
                   bool need_time_limit, bool need_dual_bound) {
  const BackendCapabilities caps = backend.capabilities();
  std::string missing;
  if (need_milp && !caps.milp) missing += " milp";
  if (need_time_limit && !caps.time_limit) missing += " time_limit";
  if (need_dual_bound && !caps.dual_bound) missing += " dual_bound";
  if (!missing.empty())
    throw std::runtime_error("backend '" + backend.name() +
                             "' lacks required capabilities:" + missing);
}

}  // namespace ampopt
