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

#include "ampopt/local.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ampopt/milp.hpp"

namespace ampopt {

Problem build_upper_problem(const Problem& problem,
                            const Solution& relax_solution,
                            const PartitionMap& partitions) {
  if (!relax_solution.has_point())
    throw std::runtime_error("lower-bound solution incomplete");
  Problem restricted = problem;
  for (const auto& [id, ivs] : partitions.intervals) {
    const int k = active_partition(partitions, id, relax_solution);
    Variable& v = restricted.variables.at(id);
    v.lower = ivs.at(k).lower;
    v.upper = ivs.at(k).upper;
  }
  for (Variable& v : restricted.variables) {
    if (!v.is_binary) continue;
    auto it = relax_solution.binary_values.find(v.id);
    const double raw = it != relax_solution.binary_values.end()
                           ? it->second
                           : relax_solution.point.at(v.id);
    v.lower = v.upper = std::round(raw);
  }
  return restricted;
}

namespace {

void add_gradient(const PolynomialExpr& expr, const std::vector<double>& x,
                  double scale, std::vector<double>& grad) {
  for (const Term& t : expr.terms) {
    for (const auto& [v, e] : t.powers) {
      double g = t.coefficient * e;
      for (const auto& [w, f] : t.powers) {
        const int exp = (w == v) ? f - 1 : f;
        for (int i = 0; i < exp; ++i) g *= x[w];
      }
      grad[v] += scale * g;
    }
  }
}

struct Penalty {
  const Problem* problem;
  double rho = 1.0;

  double value(const std::vector<double>& x) const {
    double phi = problem->objective.evaluate(x);
    for (const Constraint& c : problem->constraints) {
      const double g = c.expr.evaluate(x) - c.rhs;
      double viol = 0.0;
      if (c.sense == Sense::le)
        viol = std::max(0.0, g);
      else if (c.sense == Sense::ge)
        viol = std::max(0.0, -g);
      else
        viol = g;
      phi += rho * viol * viol;
    }
    return phi;
  }

  std::vector<double> gradient(const std::vector<double>& x) const {
    std::vector<double> grad(x.size(), 0.0);
    add_gradient(problem->objective, x, 1.0, grad);
    for (const Constraint& c : problem->constraints) {
      const double g = c.expr.evaluate(x) - c.rhs;
      double scale = 0.0;
      if (c.sense == Sense::le)
        scale = g > 0.0 ? 2.0 * rho * g : 0.0;
      else if (c.sense == Sense::ge)
        scale = g < 0.0 ? 2.0 * rho * g : 0.0;
      else
        scale = 2.0 * rho * g;
      if (scale != 0.0) add_gradient(c.expr, x, scale, grad);
    }
    return grad;
  }
};

/// Projected descent on the box, working in coordinates scaled by the box
/// width so that very unequal widths do not distort the steps.
void descend(const Problem& problem, Penalty& pen, std::vector<double>& x,
             int max_iters) {
  const size_t n = x.size();
  std::vector<double> width(n);
  for (size_t i = 0; i < n; ++i) {
    const Variable& v = problem.variables[i];
    width[i] = v.upper - v.lower;
    x[i] = std::clamp(x[i], v.lower, v.upper);
  }
  double step = 1.0;
  double phi = pen.value(x);
  for (int it = 0; it < max_iters; ++it) {
    std::vector<double> grad = pen.gradient(x);
    double gnorm = 0.0;
    for (size_t i = 0; i < n; ++i) {
      grad[i] *= width[i];  // gradient in scaled coordinates
      gnorm = std::max(gnorm, std::abs(grad[i]));
    }
    if (gnorm < 1e-14) break;
    bool moved = false;
    for (int half = 0; half < 40; ++half) {
      std::vector<double> trial(n);
      double decrease_ref = 0.0;
      for (size_t i = 0; i < n; ++i) {
        const Variable& v = problem.variables[i];
        trial[i] = std::clamp(x[i] - step * grad[i] * width[i] /
                                          std::max(gnorm, 1.0),
                              v.lower, v.upper);
        decrease_ref += grad[i] * (x[i] - trial[i]) /
                        std::max(width[i], 1e-300);
      }
      const double phi_trial = pen.value(trial);
      if (phi_trial <= phi - 1e-4 * std::max(decrease_ref, 0.0) &&
          phi_trial < phi) {
        x = std::move(trial);
        phi = phi_trial;
        moved = true;
        step = std::min(step * 2.0, 1.0);
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
}

/// Gauss-Newton feasibility restoration: least-norm Newton steps (in
/// box-scaled coordinates) onto the violated constraints.  Cleans up the
/// small residual violations the penalty descent leaves behind.
void restore_feasibility(const Problem& problem, std::vector<double>& x,
                         double target) {
  const int n = static_cast<int>(x.size());
  std::vector<double> width(n);
  for (int i = 0; i < n; ++i)
    width[i] = problem.variables[i].upper - problem.variables[i].lower;

  for (int pass = 0; pass < 30; ++pass) {
    std::vector<double> viol(problem.constraints.size()),
        gval(problem.constraints.size());
    double worst = 0.0;
    for (size_t c = 0; c < problem.constraints.size(); ++c) {
      const Constraint& con = problem.constraints[c];
      const double g = con.expr.evaluate(x) - con.rhs;
      gval[c] = g;
      if (con.sense == Sense::le)
        viol[c] = g;
      else if (con.sense == Sense::ge)
        viol[c] = -g;
      else
        viol[c] = std::abs(g);
      worst = std::max(worst, viol[c]);
    }
    if (worst <= target) return;

    // Rows within `margin` of their boundary join the system: violated rows
    // get pushed back inside, near-active feasible rows are held tangent so
    // the step cannot flip them across (active-set chattering).
    const double margin = std::max(worst, 10.0 * target);
    std::vector<int> active;
    for (size_t c = 0; c < problem.constraints.size(); ++c)
      if (viol[c] > -margin) active.push_back(static_cast<int>(c));
    if (active.empty()) return;

    const int m = static_cast<int>(active.size());
    Eigen::MatrixXd J(m, n);
    Eigen::VectorXd r(m);
    for (int k = 0; k < m; ++k) {
      const int c = active[k];
      const Constraint& con = problem.constraints[c];
      std::vector<double> grad(n, 0.0);
      add_gradient(con.expr, x, 1.0, grad);
      for (int i = 0; i < n; ++i) J(k, i) = grad[i] * width[i];
      double want = gval[c];
      if (con.sense == Sense::le && viol[c] > 0.0)
        want = -0.1 * target;
      else if (con.sense == Sense::ge && viol[c] > 0.0)
        want = 0.1 * target;
      else if (con.sense == Sense::eq)
        want = 0.0;
      r(k) = want - gval[c];
    }
    const Eigen::VectorXd dz =
        J.completeOrthogonalDecomposition().solve(r);
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm = std::max(norm, std::abs(dz(i)));
    if (norm < 1e-16) return;
    const double damp = norm > 0.5 ? 0.5 / norm : 1.0;
    for (int i = 0; i < n; ++i) {
      const Variable& v = problem.variables[i];
      x[i] = std::clamp(x[i] + damp * dz(i) * width[i], v.lower, v.upper);
    }
  }
}

/// Trust-region successive linearization: from a feasible point, minimize the
/// linearized objective over the linearized constraints within a shrinking
/// step box, restoring feasibility after each step.  Drives the roughly
/// converged penalty solution onto the local optimum.
void slp_polish(const Problem& problem, std::vector<double>& x,
                double feas_tol) {
  const int n = static_cast<int>(x.size());
  std::vector<double> width(n);
  for (int i = 0; i < n; ++i)
    width[i] = std::max(
        problem.variables[i].upper - problem.variables[i].lower, 1e-8);
  double tr = 0.05;  // trust region as a fraction of the box width
  double fbest = problem.objective.evaluate(x);
  for (int it = 0; it < 80 && tr > 1e-10; ++it) {
    MilpModel lp;
    for (int i = 0; i < n; ++i) {
      const Variable& v = problem.variables[i];
      lp.add_var(v.name, std::max(v.lower - x[i], -tr * width[i]),
                 std::min(v.upper - x[i], tr * width[i]));
    }
    {
      std::vector<double> grad(n, 0.0);
      add_gradient(problem.objective, x, 1.0, grad);
      for (int i = 0; i < n; ++i)
        if (grad[i] != 0.0) lp.objective.push_back({i, grad[i]});
    }
    for (const Constraint& con : problem.constraints) {
      const double g = con.expr.evaluate(x) - con.rhs;
      std::vector<double> grad(n, 0.0);
      add_gradient(con.expr, x, 1.0, grad);
      LinearRow row;
      const double sign = con.sense == Sense::ge ? -1.0 : 1.0;
      for (int i = 0; i < n; ++i)
        if (grad[i] != 0.0) row.coeffs.push_back({i, sign * grad[i]});
      row.sense = con.sense == Sense::eq ? RowSense::eq : RowSense::le;
      row.rhs = -sign * g;
      lp.add_row(std::move(row));
    }
    const SolveResult r = solve_lp(lp);
    if (!r.has_point()) {
      tr *= 0.5;
      continue;
    }
    std::vector<double> trial(n);
    double dnorm = 0.0;
    for (int i = 0; i < n; ++i) {
      trial[i] = x[i] + (*r.point)[i];
      dnorm = std::max(dnorm, std::abs((*r.point)[i]) / width[i]);
    }
    restore_feasibility(problem, trial, feas_tol * 0.1);
    const double ftrial = problem.objective.evaluate(trial);
    if (problem.max_violation(trial) <= feas_tol &&
        ftrial < fbest - 1e-10 * std::max(1.0, std::abs(fbest))) {
      x = std::move(trial);
      fbest = ftrial;
      if (dnorm > 0.9 * tr) tr = std::min(tr * 2.0, 0.25);
    } else {
      tr *= 0.5;
    }
  }
}

}  // namespace

Solution local_solve(const Problem& problem, const std::vector<double>& start,
                     const LocalConfig& config) {
  const size_t n = problem.variables.size();
  std::mt19937 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::vector<double>> starts;
  {
    std::vector<double> s0(n);
    for (size_t i = 0; i < n; ++i) {
      const Variable& v = problem.variables[i];
      s0[i] = std::clamp(i < start.size() ? start[i] : v.lower, v.lower,
                         v.upper);
    }
    starts.push_back(s0);
  }
  for (int k = 1; k < config.multistart_count; ++k) {
    std::vector<double> s(n);
    for (size_t i = 0; i < n; ++i) {
      const Variable& v = problem.variables[i];
      s[i] = v.lower + unit(rng) * (v.upper - v.lower);
    }
    starts.push_back(std::move(s));
  }

  Solution best;
  best.status = SolStatus::infeasible;
  for (const std::vector<double>& s : starts) {
    std::vector<double> x = s;
    Penalty pen{&problem, config.penalty_initial};
    for (int round = 0; round < 12; ++round) {
      descend(problem, pen, x, config.max_inner_iters);
      restore_feasibility(problem, x, config.feas_tol * 0.1);
      if (problem.max_violation(x) <= config.feas_tol * 0.1) {
        // Feasible: keep the best point seen, then push the penalty up so
        // the next descent trades less feasibility for objective.
        const double obj = problem.objective.evaluate(x);
        if (best.status == SolStatus::infeasible || obj < best.objective) {
          best.status = SolStatus::feasible;
          best.point = x;
          best.objective = obj;
        }
      }
      pen.rho *= config.penalty_growth;
    }
    if (problem.max_violation(x) > config.feas_tol) continue;
    slp_polish(problem, x, config.feas_tol);
    const double obj = problem.objective.evaluate(x);
    if (best.status == SolStatus::infeasible || obj < best.objective) {
      best.status = SolStatus::feasible;
      best.point = x;
      best.objective = obj;
    }
  }
  if (best.status == SolStatus::feasible) {
    slp_polish(problem, best.point, config.feas_tol);
    best.objective = problem.objective.evaluate(best.point);
    for (const Variable& v : problem.variables)
      if (v.is_binary) best.binary_values[v.id] = best.point[v.id];
  }
  return best;
}

Solution update_incumbent(const Solution& current, const Solution& candidate,
                          const Problem& problem, double feas_tol) {
  if (!candidate.has_point()) return current;
  if (problem.max_violation(candidate.point) > feas_tol) return current;
  const double obj = problem.objective.evaluate(candidate.point);
  if (!current.has_point() || obj < current.objective) {
    Solution next = candidate;
    next.status = SolStatus::feasible;
    next.objective = obj;
    return next;
  }
  return current;
}

}  // namespace ampopt
