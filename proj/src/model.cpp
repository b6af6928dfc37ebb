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

#include "ampopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ampopt {

double PolynomialExpr::evaluate(const std::vector<double>& x) const {
  double value = 0.0;
  for (const Term& t : terms) {
    double m = t.coefficient;
    for (const auto& [v, e] : t.powers) m *= std::pow(x.at(v), e);
    value += m;
  }
  return value;
}

double Constraint::violation(const std::vector<double>& x) const {
  const double v = expr.evaluate(x) - rhs;
  switch (sense) {
    case Sense::le:
      return v;
    case Sense::eq:
      return std::abs(v);
    case Sense::ge:
      return -v;
  }
  return 0.0;
}

VarId Problem::add_variable(std::string name, double lower, double upper,
                            bool is_binary) {
  Variable v;
  v.id = static_cast<VarId>(variables.size());
  v.name = std::move(name);
  v.lower = lower;
  v.upper = upper;
  v.is_binary = is_binary;
  variables.push_back(std::move(v));
  return variables.back().id;
}

double Problem::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (const Constraint& c : constraints)
    worst = std::max(worst, c.violation(x));
  for (const Variable& v : variables) {
    worst = std::max(worst, v.lower - x.at(v.id));
    worst = std::max(worst, x.at(v.id) - v.upper);
  }
  return worst;
}

PolynomialExpr normalize(const PolynomialExpr& expr) {
  std::map<std::map<VarId, int>, double> merged;
  for (const Term& t : expr.terms) merged[t.powers] += t.coefficient;
  PolynomialExpr out;
  for (const auto& [powers, coeff] : merged) {
    if (coeff == 0.0) continue;
    out.terms.push_back(Term{coeff, powers});
  }
  return out;
}

std::vector<Diagnostic> validate(const Problem& problem) {
  std::vector<Diagnostic> diags;
  const int n = static_cast<int>(problem.variables.size());
  for (int i = 0; i < n; ++i) {
    const Variable& v = problem.variables[i];
    if (v.id != i)
      diags.push_back({"variable id not dense at position " +
                           std::to_string(i),
                       i, -1});
    if (!(v.lower <= v.upper))
      diags.push_back({"inverted bounds at var " + std::to_string(i), i, -1});
    if (v.is_binary && (v.lower != 0.0 || v.upper != 1.0))
      diags.push_back(
          {"binary variable without [0,1] bounds at var " + std::to_string(i),
           i, -1});
  }
  auto check_expr = [&](const PolynomialExpr& e, int constraint_index) {
    for (const Term& t : e.terms) {
      for (const auto& [v, exp] : t.powers) {
        if (v < 0 || v >= n)
          diags.push_back({"unknown variable id " + std::to_string(v), v,
                           constraint_index});
        if (exp < 1)
          diags.push_back({"non-positive exponent on var " + std::to_string(v),
                           v, constraint_index});
      }
    }
  };
  check_expr(problem.objective, -1);
  for (int c = 0; c < static_cast<int>(problem.constraints.size()); ++c)
    check_expr(problem.constraints[c].expr, c);
  return diags;
}

std::pair<double, double> interval_product(double al, double au, double bl,
                                           double bu) {
  const double c[4] = {al * bl, al * bu, au * bl, au * bu};
  return {std::min({c[0], c[1], c[2], c[3]}),
          std::max({c[0], c[1], c[2], c[3]})};
}

std::pair<double, double> interval_square(double l, double u) {
  const double lo = (l <= 0.0 && u >= 0.0) ? 0.0 : std::min(l * l, u * u);
  return {lo, std::max(l * l, u * u)};
}

namespace {

class Lifter {
 public:
  Lifter(Problem& lifted, LiftMap& map) : lifted_(lifted), map_(map) {}

  VarId bilinear(VarId a, VarId b) {
    if (a > b) std::swap(a, b);
    return lookup(LiftDef{LiftDef::Kind::bilinear, a, b});
  }

  VarId square(VarId a) { return lookup(LiftDef{LiftDef::Kind::square, a, -1}); }

  /// Root lifted variable for x^e (e >= 1).
  VarId power(VarId x, int e) {
    if (e == 1) return x;
    if (e % 2 == 0) return square(power(x, e / 2));
    return bilinear(power(x, e - 1), x);
  }

 private:
  VarId lookup(const LiftDef& def) {
    auto it = cache_.find(def);
    if (it != cache_.end()) return it->second;
    std::pair<double, double> bounds;
    std::string name;
    if (def.kind == LiftDef::Kind::square) {
      const Variable& a = lifted_.var(def.a);
      bounds = interval_square(a.lower, a.upper);
      name = "sq(" + a.name + ")";
    } else {
      const Variable& a = lifted_.var(def.a);
      const Variable& b = lifted_.var(def.b);
      bounds = interval_product(a.lower, a.upper, b.lower, b.upper);
      name = "prod(" + a.name + "," + b.name + ")";
    }
    const VarId id = lifted_.add_variable(name, bounds.first, bounds.second);
    cache_.emplace(def, id);
    map_.entries.push_back({id, def});
    return id;
  }

  Problem& lifted_;
  LiftMap& map_;
  std::map<LiftDef, VarId> cache_;
};

}  // namespace

std::pair<Problem, LiftMap> lift_monomials(const Problem& problem) {
  Problem lifted = problem;
  LiftMap map;
  map.first_lifted_id = static_cast<VarId>(problem.variables.size());
  Lifter lifter(lifted, map);

  auto lift_expr = [&](const PolynomialExpr& expr, int constraint_index) {
    PolynomialExpr out;
    const PolynomialExpr norm = normalize(expr);
    for (int ti = 0; ti < static_cast<int>(norm.terms.size()); ++ti) {
      const Term& t = norm.terms[ti];
      if (t.total_degree() < 2) {
        out.terms.push_back(t);
        continue;
      }
      VarId root = -1;
      for (const auto& [v, e] : t.powers) {
        if (e < 1) throw std::invalid_argument("non-integer exponent");
        const VarId factor = lifter.power(v, e);
        root = (root < 0) ? factor : lifter.bilinear(root, factor);
      }
      map.term_root[{constraint_index, ti}] = root;
      Term linear;
      linear.coefficient = t.coefficient;
      linear.powers[root] = 1;
      out.terms.push_back(linear);
    }
    return out;
  };

  lifted.objective = lift_expr(problem.objective, -1);
  for (int c = 0; c < static_cast<int>(problem.constraints.size()); ++c) {
    Constraint& con = lifted.constraints[c];
    con.expr = lift_expr(problem.constraints[c].expr, c);
    if (con.sense == Sense::ge) {
      for (Term& t : con.expr.terms) t.coefficient = -t.coefficient;
      con.rhs = -con.rhs;
      con.sense = Sense::le;
    }
  }
  return {std::move(lifted), std::move(map)};
}

std::vector<double> LiftMap::lifted_values(const std::vector<double>& x) const {
  std::vector<double> values(x.begin(), x.begin() + first_lifted_id);
  values.resize(first_lifted_id + entries.size());
  for (const LiftEntry& e : entries) {
    const double a = values.at(e.def.a);
    values.at(e.lifted_id) = (e.def.kind == LiftDef::Kind::square)
                                 ? a * a
                                 : a * values.at(e.def.b);
  }
  return values;
}

}  // namespace ampopt
