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

#include "ampopt/simplex.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

namespace ampopt {

namespace {

constexpr double kFeasTol = 1e-8;
constexpr double kDualTol = 1e-7;
constexpr double kPivotTol = 1e-9;
constexpr double kDegenTol = 1e-10;
constexpr int kRefactorEvery = 80;
constexpr int kBlandTrigger = 400;

using SpMat = Eigen::SparseMatrix<double>;

double pow2_near(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) return 1.0;
  const int e = static_cast<int>(std::lround(std::log2(v)));
  return std::ldexp(1.0, std::clamp(e, -20, 20));
}

struct Eta {
  int row = -1;
  double pivot = 0.0;
  std::vector<std::pair<int, double>> d;  // entries of B^-1 a_q, row-indexed
};

}  // namespace

struct SimplexSolver::Impl {
  int m = 0;        // rows
  int n_struct = 0; // structural columns
  int n = 0;        // total columns incl. slacks
  std::vector<std::vector<std::pair<int, double>>> cols;  // scaled
  std::vector<double> lb0, ub0;  // scaled bounds (before overrides)
  std::vector<double> cost;      // scaled
  std::vector<double> rhs;       // scaled
  std::vector<double> rowscale, colscale;

  // Solve-time state.
  std::vector<double> lb, ub;
  Basis basis;
  std::vector<double> xval;
  Eigen::SparseLU<SpMat> lu, luT;
  std::vector<Eta> etas;
  bool factor_ok = false;

  void build(const MilpModel& model, const std::vector<LinearRow>& cuts);
  void ftran(std::vector<double>& v) const;
  void btran(std::vector<double>& v) const;
  bool refactorize();
  void reset_to_slack_basis();
  void sanitize_basis(const Basis* warm);
  void compute_basics();
  bool dual_feasible() const;
  int dual_step(long& iter);  // 0 pivoted, 1 infeasible, 2 stalled
  LpResult run(std::optional<std::chrono::steady_clock::time_point> deadline,
               bool try_dual);
};

void SimplexSolver::Impl::build(const MilpModel& model,
                                const std::vector<LinearRow>& cuts) {
  n_struct = static_cast<int>(model.vars.size());
  m = static_cast<int>(model.rows.size() + cuts.size());
  n = n_struct + m;

  std::vector<const LinearRow*> all_rows;
  all_rows.reserve(m);
  for (const LinearRow& r : model.rows) all_rows.push_back(&r);
  for (const LinearRow& r : cuts) all_rows.push_back(&r);

  // Geometric equilibration, powers of two.
  rowscale.assign(m, 1.0);
  colscale.assign(n, 1.0);
  for (int i = 0; i < m; ++i) {
    double amin = kInf, amax = 0.0;
    for (const auto& [j, a] : all_rows[i]->coeffs) {
      const double v = std::abs(a);
      if (v == 0.0) continue;
      amin = std::min(amin, v);
      amax = std::max(amax, v);
    }
    if (amax > 0.0) rowscale[i] = 1.0 / pow2_near(std::sqrt(amin * amax));
  }
  std::vector<double> cmin(n_struct, kInf), cmax(n_struct, 0.0);
  for (int i = 0; i < m; ++i) {
    for (const auto& [j, a] : all_rows[i]->coeffs) {
      const double v = std::abs(a) * rowscale[i];
      if (v == 0.0) continue;
      cmin[j] = std::min(cmin[j], v);
      cmax[j] = std::max(cmax[j], v);
    }
  }
  for (int j = 0; j < n_struct; ++j)
    if (cmax[j] > 0.0) colscale[j] = 1.0 / pow2_near(std::sqrt(cmin[j] * cmax[j]));
  for (int i = 0; i < m; ++i) colscale[n_struct + i] = 1.0 / rowscale[i];

  cols.assign(n, {});
  for (int i = 0; i < m; ++i) {
    for (const auto& [j, a] : all_rows[i]->coeffs)
      if (a != 0.0) cols[j].push_back({i, a * rowscale[i] * colscale[j]});
    cols[n_struct + i].push_back({i, 1.0});
  }

  lb0.assign(n, 0.0);
  ub0.assign(n, kInf);
  for (int j = 0; j < n_struct; ++j) {
    lb0[j] = model.vars[j].lower / colscale[j];
    ub0[j] = model.vars[j].upper / colscale[j];
  }
  for (int i = 0; i < m; ++i) {
    const int s = n_struct + i;
    lb0[s] = 0.0;
    ub0[s] = (all_rows[i]->sense == RowSense::eq) ? 0.0 : kInf;
  }

  cost.assign(n, 0.0);
  for (const auto& [j, c] : model.objective) cost[j] += c * colscale[j];

  rhs.assign(m, 0.0);
  for (int i = 0; i < m; ++i) rhs[i] = all_rows[i]->rhs * rowscale[i];
}

void SimplexSolver::Impl::ftran(std::vector<double>& v) const {
  Eigen::Map<Eigen::VectorXd> mv(v.data(), m);
  Eigen::VectorXd sol = lu.solve(mv);
  std::copy(sol.data(), sol.data() + m, v.begin());
  for (const Eta& e : etas) {
    const double xr = v[e.row] / e.pivot;
    for (const auto& [i, d] : e.d)
      if (i != e.row) v[i] -= d * xr;
    v[e.row] = xr;
  }
}

void SimplexSolver::Impl::btran(std::vector<double>& v) const {
  for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
    const Eta& e = *it;
    double acc = v[e.row];
    for (const auto& [i, d] : e.d)
      if (i != e.row) acc -= d * v[i];
    v[e.row] = acc / e.pivot;
  }
  Eigen::Map<Eigen::VectorXd> mv(v.data(), m);
  Eigen::VectorXd sol = luT.solve(mv);
  std::copy(sol.data(), sol.data() + m, v.begin());
}

bool SimplexSolver::Impl::refactorize() {
  etas.clear();
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < m; ++i)
    for (const auto& [r, a] : cols[basis.basic[i]]) trip.push_back({r, i, a});
  SpMat B(m, m);
  B.setFromTriplets(trip.begin(), trip.end());
  lu.compute(B);
  if (lu.info() != Eigen::Success) {
    factor_ok = false;
    return false;
  }
  SpMat Bt = B.transpose();
  luT.compute(Bt);
  factor_ok = luT.info() == Eigen::Success;
  return factor_ok;
}

void SimplexSolver::Impl::reset_to_slack_basis() {
  basis.basic.resize(m);
  basis.state.assign(n, ColState::at_lower);
  for (int i = 0; i < m; ++i) {
    basis.basic[i] = n_struct + i;
    basis.state[n_struct + i] = ColState::basic;
  }
  for (int j = 0; j < n_struct; ++j) {
    if (std::isfinite(lb[j]))
      basis.state[j] = ColState::at_lower;
    else if (std::isfinite(ub[j]))
      basis.state[j] = ColState::at_upper;
    else
      basis.state[j] = ColState::free_zero;
  }
}

void SimplexSolver::Impl::sanitize_basis(const Basis* warm) {
  if (warm == nullptr || warm->empty()) {
    reset_to_slack_basis();
    return;
  }
  basis.basic.assign(m, -1);
  basis.state.assign(n, ColState::at_lower);
  const int ncopy = std::min<int>(static_cast<int>(warm->state.size()), n);
  std::copy(warm->state.begin(), warm->state.begin() + ncopy,
            basis.state.begin());
  std::vector<char> used(n, 0);
  for (int i = 0; i < m && i < static_cast<int>(warm->basic.size()); ++i) {
    const int c = warm->basic[i];
    if (c >= 0 && c < n && !used[c]) {
      basis.basic[i] = c;
      used[c] = 1;
    }
  }
  for (int i = 0; i < m; ++i) {
    if (basis.basic[i] < 0) {
      basis.basic[i] = n_struct + i;  // new cut rows start with slack basic
      used[n_struct + i] = 1;
    }
  }
  for (int j = 0; j < n; ++j) {
    if (used[j]) {
      basis.state[j] = ColState::basic;
    } else if (basis.state[j] == ColState::basic) {
      basis.state[j] = std::isfinite(lb[j]) ? ColState::at_lower
                       : std::isfinite(ub[j]) ? ColState::at_upper
                                              : ColState::free_zero;
    }
    // A nonbasic column whose recorded bound no longer exists gets moved.
    if (basis.state[j] == ColState::at_lower && !std::isfinite(lb[j]))
      basis.state[j] = std::isfinite(ub[j]) ? ColState::at_upper
                                            : ColState::free_zero;
    if (basis.state[j] == ColState::at_upper && !std::isfinite(ub[j]))
      basis.state[j] = std::isfinite(lb[j]) ? ColState::at_lower
                                            : ColState::free_zero;
  }
}

void SimplexSolver::Impl::compute_basics() {
  xval.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    switch (basis.state[j]) {
      case ColState::at_lower:
        xval[j] = lb[j];
        break;
      case ColState::at_upper:
        xval[j] = ub[j];
        break;
      default:
        xval[j] = 0.0;
    }
  }
  std::vector<double> r = rhs;
  for (int j = 0; j < n; ++j) {
    if (basis.state[j] == ColState::basic || xval[j] == 0.0) continue;
    for (const auto& [i, a] : cols[j]) r[i] -= a * xval[j];
  }
  ftran(r);
  for (int i = 0; i < m; ++i) xval[basis.basic[i]] = r[i];
}

bool SimplexSolver::Impl::dual_feasible() const {
  std::vector<double> y(m);
  for (int i = 0; i < m; ++i) y[i] = cost[basis.basic[i]];
  const_cast<Impl*>(this)->btran(y);
  for (int j = 0; j < n; ++j) {
    const ColState st = basis.state[j];
    if (st == ColState::basic) continue;
    if (ub[j] - lb[j] < 1e-14 && st != ColState::free_zero) continue;
    double d = cost[j];
    for (const auto& [i, a] : cols[j]) d -= y[i] * a;
    if (st == ColState::at_lower && d < -kDualTol) return false;
    if (st == ColState::at_upper && d > kDualTol) return false;
    if (st == ColState::free_zero && std::abs(d) > kDualTol) return false;
  }
  return true;
}

/// One bounded-variable dual simplex pivot from a dual-feasible basis.
/// Drives the most primal-infeasible basic variable to its violated bound;
/// no eligible entering column proves primal infeasibility.
int SimplexSolver::Impl::dual_step(long& iter) {
  int row = -1;
  double worst = kFeasTol;
  for (int i = 0; i < m; ++i) {
    const int c = basis.basic[i];
    const double v = std::max(lb[c] - xval[c], xval[c] - ub[c]);
    if (v > worst) {
      worst = v;
      row = i;
    }
  }
  if (row < 0) return 2;  // primal feasible, nothing to do

  const int leave = basis.basic[row];
  const bool below = xval[leave] < lb[leave];
  const double delta = (below ? lb[leave] : ub[leave]) - xval[leave];

  // rho = row `row` of B^-1; alpha_j = rho . a_j.
  std::vector<double> rho(m, 0.0);
  rho[row] = 1.0;
  btran(rho);

  std::vector<double> y(m);
  for (int i = 0; i < m; ++i) y[i] = cost[basis.basic[i]];
  btran(y);

  int q = -1;
  double best_ratio = kInf, best_alpha = 0.0;
  double alpha_q = 0.0;
  for (int j = 0; j < n; ++j) {
    const ColState st = basis.state[j];
    if (st == ColState::basic) continue;
    if (ub[j] - lb[j] < 1e-14 && st != ColState::free_zero) continue;
    double alpha = 0.0, d = cost[j];
    for (const auto& [i, a] : cols[j]) {
      alpha += rho[i] * a;
      d -= y[i] * a;
    }
    if (std::abs(alpha) < kPivotTol) continue;
    // Entering movement: dx_j = -delta / alpha_j.
    const double move = -delta / alpha;
    if (st == ColState::at_lower && move < 0.0) continue;
    if (st == ColState::at_upper && move > 0.0) continue;
    const double ratio = std::abs(d) / std::abs(alpha);
    if (ratio < best_ratio - 1e-10 ||
        (ratio < best_ratio + 1e-10 && std::abs(alpha) > std::abs(best_alpha))) {
      best_ratio = ratio;
      best_alpha = alpha;
      q = j;
      alpha_q = alpha;
    }
  }
  if (q < 0) return 1;  // dual unbounded: primal infeasible

  std::vector<double> w(m, 0.0);
  for (const auto& [i, a] : cols[q]) w[i] = a;
  ftran(w);
  const double move = -delta / alpha_q;
  for (int i = 0; i < m; ++i)
    if (w[i] != 0.0) xval[basis.basic[i]] -= w[i] * move;
  xval[q] += move;

  basis.state[leave] = below ? ColState::at_lower : ColState::at_upper;
  xval[leave] = below ? lb[leave] : ub[leave];
  basis.basic[row] = q;
  basis.state[q] = ColState::basic;
  Eta e;
  e.row = row;
  e.pivot = w[row];
  for (int i = 0; i < m; ++i)
    if (std::abs(w[i]) > 1e-12) e.d.push_back({i, w[i]});
  etas.push_back(std::move(e));
  ++iter;
  if (static_cast<int>(etas.size()) >= kRefactorEvery) {
    if (!refactorize()) return 3;
    compute_basics();
  }
  return 0;
}

LpResult SimplexSolver::Impl::run(
    std::optional<std::chrono::steady_clock::time_point> deadline,
    bool try_dual) {
  LpResult res;
  if (m == 0) {
    // Pure box problem: every column sits at its cost-preferred bound.
    res.x.assign(n_struct, 0.0);
    res.objective = 0.0;
    res.status = LpStatus::optimal;
    for (int j = 0; j < n_struct; ++j) {
      if (lb[j] > ub[j] + kFeasTol) return res.status = LpStatus::infeasible, res;
      double v = cost[j] >= 0.0 ? lb[j] : ub[j];
      if (!std::isfinite(v)) {
        if (cost[j] != 0.0) return res.status = LpStatus::unbounded, res;
        v = std::isfinite(lb[j]) ? lb[j] : std::min(0.0, ub[j]);
        if (!std::isfinite(v)) v = 0.0;
      }
      res.x[j] = v * colscale[j];
      res.objective += cost[j] * v;
    }
    return res;
  }
  if (!refactorize()) {
    reset_to_slack_basis();
    if (!refactorize()) {
      res.status = LpStatus::numerical_error;
      return res;
    }
  }
  compute_basics();

  const long iter_limit = 20000L + 200L * static_cast<long>(m);
  long iter = 0;
  int degenerate_run = 0;
  bool bland = false;
  std::vector<double> y(m), w(m);

  auto finish = [&](LpStatus st) {
    res.status = st;
    res.iterations = iter;
    res.basis = basis;
    res.x.resize(n_struct);
    double obj = 0.0;
    for (int j = 0; j < n_struct; ++j) {
      res.x[j] = xval[j] * colscale[j];
    }
    for (int j = 0; j < n; ++j) obj += cost[j] * xval[j];
    res.objective = obj;
    return res;
  };

  // Dual simplex pass: a warm basis whose bounds just changed is still dual
  // feasible, so dual pivots restore primal feasibility in few steps and
  // detect infeasible subproblems as dual unboundedness.
  if (try_dual) {
    bool primal_infeas = false;
    for (int i = 0; i < m && !primal_infeas; ++i) {
      const int c = basis.basic[i];
      primal_infeas = xval[c] < lb[c] - kFeasTol || xval[c] > ub[c] + kFeasTol;
    }
    const long dual_cap = iter + 2L * m + 500;
    if (primal_infeas && dual_feasible()) {
      while (iter < dual_cap) {
        if (deadline && std::chrono::steady_clock::now() > *deadline)
          return finish(LpStatus::time_limit);
        const int rc = dual_step(iter);
        if (rc == 0) continue;
        if (rc == 1) return finish(LpStatus::infeasible);
        if (rc == 3) {
          reset_to_slack_basis();
          if (!refactorize()) return finish(LpStatus::numerical_error);
          compute_basics();
        }
        break;  // primal feasible (or restarted): continue with primal
      }
    }
  }

  while (true) {
    if (deadline && std::chrono::steady_clock::now() > *deadline)
      return finish(LpStatus::time_limit);
    if (iter > iter_limit) return finish(LpStatus::iteration_limit);

    // Phase from current basic feasibility: phase 1 while any single basic
    // sits outside its bounds by more than the tolerance.
    bool phase1 = false;
    for (int i = 0; i < m; ++i) {
      const int c = basis.basic[i];
      if (xval[c] < lb[c] - kFeasTol || xval[c] > ub[c] + kFeasTol) {
        phase1 = true;
        break;
      }
    }

    std::fill(y.begin(), y.end(), 0.0);
    bool any_cost = false;
    for (int i = 0; i < m; ++i) {
      const int c = basis.basic[i];
      double ci = 0.0;
      if (phase1) {
        if (xval[c] < lb[c] - kFeasTol)
          ci = -1.0;
        else if (xval[c] > ub[c] + kFeasTol)
          ci = 1.0;
      } else {
        ci = cost[c];
      }
      y[i] = ci;
      any_cost = any_cost || ci != 0.0;
    }
    if (any_cost) btran(y);

    // Pricing.
    int q = -1;
    double best = 0.0;
    int t = +1;
    for (int j = 0; j < n; ++j) {
      const ColState st = basis.state[j];
      if (st == ColState::basic) continue;
      if (ub[j] - lb[j] < 1e-14 && st != ColState::free_zero) continue;
      double d = phase1 ? 0.0 : cost[j];
      if (any_cost)
        for (const auto& [i, a] : cols[j]) d -= y[i] * a;
      int dir = 0;
      if (st == ColState::at_lower && d < -kDualTol)
        dir = +1;
      else if (st == ColState::at_upper && d > kDualTol)
        dir = -1;
      else if (st == ColState::free_zero && std::abs(d) > kDualTol)
        dir = d < 0 ? +1 : -1;
      if (dir == 0) continue;
      if (bland) {
        q = j;
        t = dir;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        t = dir;
      }
    }
    if (q < 0) {
      if (phase1) return finish(LpStatus::infeasible);
      return finish(LpStatus::optimal);
    }

    // FTRAN of the entering column.
    std::fill(w.begin(), w.end(), 0.0);
    for (const auto& [i, a] : cols[q]) w[i] = a;
    ftran(w);

    // Ratio test.
    double theta = kInf;
    int leaving = -1;             // -1: bound flip
    ColState leave_to = ColState::at_lower;
    if (std::isfinite(lb[q]) && std::isfinite(ub[q]))
      theta = ub[q] - lb[q];
    for (int i = 0; i < m; ++i) {
      if (std::abs(w[i]) < kPivotTol) continue;
      const int c = basis.basic[i];
      const double rate = -t * w[i];  // d x_c / d theta
      double step = kInf;
      ColState to = ColState::at_lower;
      if (phase1 && xval[c] < lb[c] - kFeasTol) {
        if (rate > 0.0) {
          step = (lb[c] - xval[c]) / rate;
          to = ColState::at_lower;
        }
      } else if (phase1 && xval[c] > ub[c] + kFeasTol) {
        if (rate < 0.0) {
          step = (ub[c] - xval[c]) / rate;
          to = ColState::at_upper;
        }
      } else if (rate > 0.0) {
        if (std::isfinite(ub[c])) {
          step = (ub[c] - xval[c]) / rate;
          to = ColState::at_upper;
        }
      } else {
        if (std::isfinite(lb[c])) {
          step = (lb[c] - xval[c]) / rate;
          to = ColState::at_lower;
        }
      }
      if (step == kInf) continue;
      step = std::max(step, 0.0);
      if (step < theta - 1e-12 ||
          (leaving >= 0 && step < theta + 1e-12 &&
           std::abs(w[i]) > std::abs(w[leaving]))) {
        theta = step;
        leaving = i;
        leave_to = to;
      }
    }

    if (theta == kInf) {
      if (phase1) return finish(LpStatus::numerical_error);
      return finish(LpStatus::unbounded);
    }

    // Apply the step.
    if (theta > 0.0) {
      for (int i = 0; i < m; ++i)
        if (w[i] != 0.0) xval[basis.basic[i]] -= t * theta * w[i];
      xval[q] += t * theta;
    }
    if (leaving < 0) {
      basis.state[q] =
          (t > 0) ? ColState::at_upper : ColState::at_lower;
      xval[q] = (t > 0) ? ub[q] : lb[q];
    } else {
      const int out = basis.basic[leaving];
      basis.state[out] = leave_to;
      xval[out] = (leave_to == ColState::at_lower) ? lb[out] : ub[out];
      basis.basic[leaving] = q;
      basis.state[q] = ColState::basic;
      Eta e;
      e.row = leaving;
      e.pivot = w[leaving];
      for (int i = 0; i < m; ++i)
        if (std::abs(w[i]) > 1e-12) e.d.push_back({i, w[i]});
      etas.push_back(std::move(e));
      if (static_cast<int>(etas.size()) >= kRefactorEvery) {
        if (!refactorize()) {
          reset_to_slack_basis();
          if (!refactorize()) return finish(LpStatus::numerical_error);
        }
        compute_basics();
      }
    }

    ++iter;
    if (theta <= kDegenTol) {
      if (++degenerate_run > kBlandTrigger) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
}

SimplexSolver::SimplexSolver(const MilpModel& model,
                             const std::vector<LinearRow>& cuts)
    : impl_(std::make_shared<Impl>()) {
  impl_->build(model, cuts);
  m_ = impl_->m;
  n_struct_ = impl_->n_struct;
}

LpResult SimplexSolver::solve(
    const std::vector<double>* lower, const std::vector<double>* upper,
    const Basis* warm,
    std::optional<std::chrono::steady_clock::time_point> deadline) {
  Impl& s = *impl_;
  s.lb = s.lb0;
  s.ub = s.ub0;
  if (lower != nullptr)
    for (int j = 0; j < s.n_struct; ++j) s.lb[j] = (*lower)[j] / s.colscale[j];
  if (upper != nullptr)
    for (int j = 0; j < s.n_struct; ++j) s.ub[j] = (*upper)[j] / s.colscale[j];
  s.sanitize_basis(warm);
  const bool warm_started = warm != nullptr && !warm->empty();
  LpResult res = s.run(deadline, warm_started);
  if (res.status == LpStatus::numerical_error) {
    // One retry from scratch.
    s.reset_to_slack_basis();
    res = s.run(deadline, false);
  }
  return res;
}

}  // namespace ampopt
