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

#ifndef AMPOPT_MODEL_HPP
#define AMPOPT_MODEL_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ampopt/types.hpp"

namespace ampopt {

struct Variable {
  VarId id = -1;
  std::string name;
  double lower = -kInf;
  double upper = kInf;
  bool is_binary = false;
};

/// One monomial: coefficient * prod_k x_k^e_k.  An empty powers map is a
/// constant term.
struct Term {
  double coefficient = 0.0;
  std::map<VarId, int> powers;  // exponent >= 1

  int total_degree() const {
    int d = 0;
    for (const auto& [v, e] : powers) d += e;
    return d;
  }
};

struct PolynomialExpr {
  std::vector<Term> terms;

  double evaluate(const std::vector<double>& x) const;
};

enum class Sense { le, eq, ge };

struct Constraint {
  PolynomialExpr expr;
  Sense sense = Sense::le;
  double rhs = 0.0;

  /// Signed violation at a point: positive means infeasible.
  double violation(const std::vector<double>& x) const;
};

struct Problem {
  std::string name;
  std::vector<Variable> variables;
  PolynomialExpr objective;  // minimized
  std::vector<Constraint> constraints;
  std::optional<double> known_optimum;

  const Variable& var(VarId id) const { return variables.at(id); }
  VarId add_variable(std::string name, double lower, double upper,
                     bool is_binary = false);
  double max_violation(const std::vector<double>& x) const;
};

/// Definition of one lifted variable: either a product of two operands or the
/// square of one.  Operands may themselves be lifted variables.
struct LiftDef {
  enum class Kind { bilinear, square };
  Kind kind = Kind::bilinear;
  VarId a = -1;
  VarId b = -1;  // unused for squares

  friend bool operator<(const LiftDef& x, const LiftDef& y) {
    return std::tie(x.kind, x.a, x.b) < std::tie(y.kind, y.a, y.b);
  }
};

struct LiftEntry {
  VarId lifted_id = -1;
  LiftDef def;
};

/// Result of the monomial-lifting pass.  `entries` is topologically ordered:
/// operands of an entry are either original variables or earlier entries.
struct LiftMap {
  std::vector<LiftEntry> entries;
  // For each (constraint index, term index) of the original problem with a
  // degree >= 2 monomial, the root lifted variable.  Objective uses index -1.
  std::map<std::pair<int, int>, VarId> term_root;
  VarId first_lifted_id = 0;  // ids >= this are lifted

  bool is_lifted(VarId id) const { return id >= first_lifted_id; }
  const LiftEntry& entry_for(VarId id) const {
    return entries.at(id - first_lifted_id);
  }
  /// Value of every lifted variable given values for the original ones.
  std::vector<double> lifted_values(const std::vector<double>& x) const;
};

struct Diagnostic {
  std::string message;
  int variable = -1;
  int constraint = -1;
};

/// Merge like terms, drop zero coefficients, order terms by their powers map.
PolynomialExpr normalize(const PolynomialExpr& expr);

std::vector<Diagnostic> validate(const Problem& problem);

/// Replace every monomial of total degree >= 2 with a fresh lifted variable
/// whose bounds come from interval arithmetic.  Square chains are used for
/// powers (x^5 -> (x^2)^2 * x); distinct variables chain left-to-right by id.
/// The returned problem has >= constraints negated to <=.
std::pair<Problem, LiftMap> lift_monomials(const Problem& problem);

/// Interval helpers used by the lifting pass and the relaxation builder.
std::pair<double, double> interval_product(double al, double au, double bl,
                                           double bu);
std::pair<double, double> interval_square(double l, double u);

}  // namespace ampopt

#endif  // AMPOPT_MODEL_HPP
