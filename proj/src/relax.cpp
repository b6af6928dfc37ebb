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

#include "ampopt/relax.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ampopt {

namespace {

void require_finite(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw std::runtime_error("unbounded operand");
}

LinearRow make_row(const std::map<int, double>& coeffs, double rhs,
                   RowSense sense = RowSense::le) {
  LinearRow row;
  for (const auto& [j, c] : coeffs)
    if (c != 0.0) row.coeffs.push_back({j, c});
  row.sense = sense;
  row.rhs = rhs;
  return row;
}

}  // namespace

std::vector<LinearRow> mccormick_bilinear(const Interval& bi,
                                          const Interval& bj, int xhat, int xi,
                                          int xj) {
  require_finite(bi.lower, bi.upper);
  require_finite(bj.lower, bj.upper);
  std::vector<LinearRow> rows;
  // (ci, cj, bound product, is_lower): x_hat >=/<= ci x_j + cj x_i - ci*cj.
  const struct {
    double ci, cj;
    bool lower;
  } spec[4] = {{bi.lower, bj.lower, true},
               {bi.upper, bj.upper, true},
               {bi.lower, bj.upper, false},
               {bi.upper, bj.lower, false}};
  for (const auto& s : spec) {
    std::map<int, double> c;
    const double sign = s.lower ? 1.0 : -1.0;
    c[xj] += sign * s.ci;
    c[xi] += sign * s.cj;
    c[xhat] += -sign;
    rows.push_back(make_row(c, sign * s.ci * s.cj));
  }
  return rows;
}

std::vector<LinearRow> recursive_mccormick(const Problem& lifted,
                                           const LiftMap& lifts) {
  std::vector<LinearRow> rows;
  for (const LiftEntry& e : lifts.entries) {
    const VarId a = e.def.a;
    const VarId b = e.def.kind == LiftDef::Kind::square ? e.def.a : e.def.b;
    const Variable& va = lifted.var(a);
    const Variable& vb = lifted.var(b);
    auto block = mccormick_bilinear({va.lower, va.upper}, {vb.lower, vb.upper},
                                    e.lifted_id, a, b);
    rows.insert(rows.end(), block.begin(), block.end());
  }
  return rows;
}

const std::vector<int>& RelaxBuilder::indicators(
    VarId pid, int x, const std::vector<Interval>& pieces) {
  auto it = indicator_cols_.find(pid);
  if (it != indicator_cols_.end()) return it->second;

  const MilpVar& var = model_->vars.at(x);
  const double span = std::max(1.0, std::abs(var.upper - var.lower));
  const double tol = 1e-9 * span;
  bool ok = !pieces.empty() &&
            std::abs(pieces.front().lower - var.lower) <= tol &&
            std::abs(pieces.back().upper - var.upper) <= tol;
  for (size_t k = 0; ok && k + 1 < pieces.size(); ++k)
    ok = std::abs(pieces[k].upper - pieces[k + 1].lower) <= tol;
  for (size_t k = 0; ok && k < pieces.size(); ++k)
    ok = pieces[k].upper > pieces[k].lower;
  if (!ok) throw std::runtime_error("invalid partition map");

  std::vector<int>& cols = indicator_cols_[pid];
  if (pieces.size() < 2) return cols;  // no indicators needed

  std::map<int, double> sum, sel_lo, sel_hi;
  for (int k = 0; k < static_cast<int>(pieces.size()); ++k) {
    const int y = model_->add_var(
        "y" + std::to_string(pid) + "_" + std::to_string(k), 0.0, 1.0, true);
    cols.push_back(y);
    model_->indicators[{pid, k}] = y;
    sum[y] = 1.0;
    sel_lo[y] = pieces[k].lower;
    sel_hi[y] = -pieces[k].upper;
  }
  model_->add_row(make_row(sum, 1.0, RowSense::eq));
  sel_lo[x] += -1.0;  // sum_k l_k y_k <= x
  model_->add_row(make_row(sel_lo, 0.0));
  sel_hi[x] += 1.0;  // x <= sum_k u_k y_k
  model_->add_row(make_row(sel_hi, 0.0));
  return cols;
}

int RelaxBuilder::z_column(int x, int y) {
  const auto key = std::make_pair(x, y);
  auto it = z_cols_.find(key);
  if (it != z_cols_.end()) return it->second;
  // Copy the bounds: add_var below may reallocate the variable vector.
  const double xl = model_->vars.at(x).lower;
  const double xu = model_->vars.at(x).upper;
  require_finite(xl, xu);
  const int z = model_->add_var("z" + std::to_string(x) + "_" + std::to_string(y),
                                std::min(0.0, xl), std::max(0.0, xu));
  // z = y*x exactly at binary y.
  model_->add_row(make_row({{z, 1.0}, {y, -xu}}, 0.0));
  model_->add_row(make_row({{z, -1.0}, {y, xl}}, 0.0));
  model_->add_row(make_row({{z, 1.0}, {x, -1.0}, {y, -xl}}, -xl));
  model_->add_row(make_row({{z, -1.0}, {x, 1.0}, {y, xu}}, xu));
  z_cols_[key] = z;
  return z;
}

int RelaxBuilder::w_column(int y1, int y2) {
  if (y1 == y2) return y1;
  const auto key = std::minmax(y1, y2);
  auto it = w_cols_.find(key);
  if (it != w_cols_.end()) return it->second;
  // Continuous AND variable; integral indicators force it to y1*y2.
  const int w = model_->add_var(
      "w" + std::to_string(key.first) + "_" + std::to_string(key.second), 0.0,
      1.0);
  model_->add_row(make_row({{w, 1.0}, {y1, -1.0}}, 0.0));
  model_->add_row(make_row({{w, 1.0}, {y2, -1.0}}, 0.0));
  model_->add_row(make_row({{w, -1.0}, {y1, 1.0}, {y2, 1.0}}, 1.0));
  w_cols_[key] = w;
  return w;
}

RelaxBuilder::Side RelaxBuilder::make_side(VarId pid, int x,
                                           const std::vector<Interval>& pieces) {
  Side side;
  side.pid = pid;
  side.x = x;
  const std::vector<int>& y = indicators(pid, x, pieces);
  if (y.empty()) {
    const MilpVar& var = model_->vars.at(x);
    require_finite(var.lower, var.upper);
    side.lo = {var.lower};
    side.hi = {var.upper};
    side.y = {-1};
  } else {
    for (const Interval& p : pieces) {
      side.lo.push_back(p.lower);
      side.hi.push_back(p.upper);
    }
    side.y.assign(y.begin(), y.end());
  }
  return side;
}

void RelaxBuilder::aggregate(const Side& a, const Side& b) {
  // sum_k z(x_b, y_ak) = x_b: valid because the indicators sum to one, and it
  // tightens the LP relaxation considerably.  Likewise sum_km w(y_ak, y_bm) = 1.
  auto z_sum = [&](const Side& ind, const Side& other) {
    if (ind.y[0] < 0) return;
    if (!zsum_done_.insert({other.x, ind.pid}).second) return;
    std::map<int, double> r;
    for (int y : ind.y) r[z_column(other.x, y)] += 1.0;
    r[other.x] -= 1.0;
    model_->add_row(make_row(r, 0.0, RowSense::eq));
  };
  z_sum(a, b);
  z_sum(b, a);
  if (a.y[0] >= 0 && b.y[0] >= 0 && a.pid != b.pid &&
      wsum_done_.insert(std::minmax(a.pid, b.pid)).second) {
    std::map<int, double> r;
    for (int ya : a.y)
      for (int yb : b.y) r[w_column(ya, yb)] += 1.0;
    model_->add_row(make_row(r, 1.0, RowSense::eq));
  }
}

void RelaxBuilder::envelope_row(int xhat, const Side& a, const Side& b,
                                bool lower_bound,
                                const std::vector<double>& pa,
                                const std::vector<double>& pb) {
  // x_hat >=/<= (pa.y_a) x_b + (pb.y_b) x_a - (pa.y_a)(pb.y_b).
  std::map<int, double> expr;
  double expr_const = 0.0;
  for (size_t k = 0; k < pa.size(); ++k) {
    if (a.y[k] < 0)
      expr[b.x] += pa[k];
    else
      expr[z_column(b.x, a.y[k])] += pa[k];
  }
  for (size_t m = 0; m < pb.size(); ++m) {
    if (b.y[m] < 0)
      expr[a.x] += pb[m];
    else
      expr[z_column(a.x, b.y[m])] += pb[m];
  }
  for (size_t k = 0; k < pa.size(); ++k) {
    for (size_t m = 0; m < pb.size(); ++m) {
      const double c = pa[k] * pb[m];
      if (a.y[k] < 0 && b.y[m] < 0)
        expr_const -= c;
      else if (a.y[k] < 0)
        expr[b.y[m]] -= c;
      else if (b.y[m] < 0)
        expr[a.y[k]] -= c;
      else
        expr[w_column(a.y[k], b.y[m])] -= c;
    }
  }
  // lower: expr + expr_const - x_hat <= 0; upper: x_hat - expr - c <= 0.
  std::map<int, double> coeffs;
  const double sign = lower_bound ? 1.0 : -1.0;
  for (const auto& [j, c] : expr) coeffs[j] += sign * c;
  coeffs[xhat] += -sign;
  model_->add_row(make_row(coeffs, -sign * expr_const));
}

void RelaxBuilder::piecewise_mccormick(int xhat, VarId pid_i, int xi,
                                       const std::vector<Interval>& pieces_i,
                                       VarId pid_j, int xj,
                                       const std::vector<Interval>& pieces_j) {
  const Side a = make_side(pid_i, xi, pieces_i);
  const Side b = (xi == xj) ? a : make_side(pid_j, xj, pieces_j);
  envelope_row(xhat, a, b, true, a.lo, b.lo);
  envelope_row(xhat, a, b, true, a.hi, b.hi);
  envelope_row(xhat, a, b, false, a.lo, b.hi);
  envelope_row(xhat, a, b, false, a.hi, b.lo);
  aggregate(a, b);
}

void RelaxBuilder::piecewise_quadratic(int xhat, VarId pid, int x,
                                       const std::vector<Interval>& pieces) {
  model_->quad_rows.push_back({xhat, x});
  const Side s = make_side(pid, x, pieces);
  // Secant: x_hat <= sum_k (l_k + u_k) y_k x - sum_k l_k u_k y_k.
  std::map<int, double> coeffs;
  double rhs = 0.0;
  coeffs[xhat] = 1.0;
  for (size_t k = 0; k < s.y.size(); ++k) {
    if (s.y[k] < 0) {
      coeffs[x] -= s.lo[k] + s.hi[k];
      rhs += -s.lo[k] * s.hi[k];
    } else {
      const int zk = z_column(x, s.y[k]);
      coeffs[zk] -= s.lo[k] + s.hi[k];
      coeffs[s.y[k]] += s.lo[k] * s.hi[k];
      // Own-block z: the selection rows pin x to piece k when y_k = 1, so the
      // piece bounds apply to z directly.
      model_->add_row(make_row({{zk, 1.0}, {s.y[k], -s.hi[k]}}, 0.0));
      model_->add_row(make_row({{zk, -1.0}, {s.y[k], s.lo[k]}}, 0.0));
    }
  }
  model_->add_row(make_row(coeffs, rhs));
  aggregate(s, s);
}

namespace {

/// Split a linear polynomial into sparse coefficients plus a constant.
std::pair<std::map<int, double>, double> linear_parts(
    const PolynomialExpr& expr) {
  std::map<int, double> coeffs;
  double constant = 0.0;
  for (const Term& t : expr.terms) {
    if (t.powers.empty()) {
      constant += t.coefficient;
    } else if (t.total_degree() == 1) {
      coeffs[t.powers.begin()->first] += t.coefficient;
    } else {
      throw std::runtime_error("nonlinear term survived lifting");
    }
  }
  return {std::move(coeffs), constant};
}

}  // namespace

MilpModel build_relaxation(const Problem& lifted, const LiftMap& lifts,
                           const PartitionMap& parts) {
  MilpModel model;
  model.num_problem_vars = static_cast<int>(lifted.variables.size());
  for (const Variable& v : lifted.variables)
    model.add_var(v.name, v.lower, v.upper, v.is_binary);

  {
    auto [coeffs, constant] = linear_parts(lifted.objective);
    for (const auto& [j, c] : coeffs) model.objective.push_back({j, c});
    model.objective_offset = constant;
  }
  for (const Constraint& con : lifted.constraints) {
    auto [coeffs, constant] = linear_parts(con.expr);
    const double sign = con.sense == Sense::ge ? -1.0 : 1.0;
    LinearRow row;
    for (auto& [j, c] : coeffs)
      if (c != 0.0) row.coeffs.push_back({j, sign * c});
    row.sense = con.sense == Sense::eq ? RowSense::eq : RowSense::le;
    row.rhs = sign * (con.rhs - constant);
    model.add_row(std::move(row));
  }

  RelaxBuilder builder(&model);
  auto pieces_for = [&](VarId v) -> std::vector<Interval> {
    if (parts.contains(v)) return parts.of(v);
    const Variable& var = lifted.var(v);
    return {Interval{var.lower, var.upper}};
  };
  for (const LiftEntry& e : lifts.entries) {
    if (e.def.kind == LiftDef::Kind::square) {
      builder.piecewise_quadratic(e.lifted_id, e.def.a, e.def.a,
                                  pieces_for(e.def.a));
    } else {
      builder.piecewise_mccormick(e.lifted_id, e.def.a, e.def.a,
                                  pieces_for(e.def.a), e.def.b, e.def.b,
                                  pieces_for(e.def.b));
    }
  }
  return model;
}

}  // namespace ampopt
