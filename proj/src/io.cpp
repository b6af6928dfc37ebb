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

#include "ampopt/io.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

namespace ampopt {

namespace {

using nlohmann::json;

std::string num(double v) {
  if (v == kInf) return "\"inf\"";
  if (v == -kInf) return "\"-inf\"";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

void check_fields(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(where, "unknown field '" + key + "'");
  }
}

double number_at(const json& obj, const std::string& where, const char* key) {
  const json& v = obj.at(key);
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    fail(where, std::string("malformed number in '") + key + "'");
  }
  if (!v.is_number())
    fail(where, std::string("malformed number in '") + key + "'");
  return v.get<double>();
}

PolynomialExpr parse_terms(const json& arr, const std::string& where,
                           const std::map<std::string, VarId>& ids) {
  if (!arr.is_array()) fail(where, "expected an array of terms");
  PolynomialExpr expr;
  int idx = 0;
  for (const json& jt : arr) {
    const std::string here = where + "[" + std::to_string(idx++) + "]";
    if (!jt.is_object()) fail(here, "expected a term object");
    check_fields(jt, here, {"coeff", "powers"});
    Term term;
    term.coefficient = number_at(jt, here, "coeff");
    if (jt.contains("powers")) {
      for (const auto& [name, je] : jt.at("powers").items()) {
        auto it = ids.find(name);
        if (it == ids.end()) fail(here, "unknown variable '" + name + "'");
        if (!je.is_number_integer() || je.get<long>() < 1)
          fail(here, "non-integer exponent for '" + name + "'");
        term.powers[it->second] = je.get<int>();
      }
    }
    expr.terms.push_back(std::move(term));
  }
  return expr;
}

}  // namespace

Problem parse_problem(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("document: ") + e.what());
  }
  if (!doc.is_object()) fail("document", "expected a JSON object");
  check_fields(doc, "document", {"meta", "variables", "objective",
                                 "constraints"});

  Problem problem;
  if (doc.contains("meta")) {
    const json& meta = doc.at("meta");
    check_fields(meta, "meta", {"name", "known_optimum"});
    if (meta.contains("name")) problem.name = meta.at("name").get<std::string>();
    if (meta.contains("known_optimum"))
      problem.known_optimum = number_at(meta, "meta", "known_optimum");
  }

  std::map<std::string, VarId> ids;
  if (!doc.contains("variables") || !doc.at("variables").is_array())
    fail("document", "missing 'variables' array");
  int vi = 0;
  for (const json& jv : doc.at("variables")) {
    const std::string here = "variables[" + std::to_string(vi++) + "]";
    check_fields(jv, here, {"name", "lb", "ub", "binary"});
    const std::string name = jv.at("name").get<std::string>();
    if (ids.count(name)) fail(here, "duplicate variable name '" + name + "'");
    const bool binary = jv.value("binary", false);
    const double lb = jv.contains("lb") ? number_at(jv, here, "lb")
                                        : (binary ? 0.0 : -kInf);
    const double ub = jv.contains("ub") ? number_at(jv, here, "ub")
                                        : (binary ? 1.0 : kInf);
    ids[name] = problem.add_variable(name, lb, ub, binary);
  }

  if (doc.contains("objective"))
    problem.objective = parse_terms(doc.at("objective"), "objective", ids);

  if (doc.contains("constraints")) {
    int ci = 0;
    for (const json& jc : doc.at("constraints")) {
      const std::string here = "constraints[" + std::to_string(ci++) + "]";
      check_fields(jc, here, {"terms", "sense", "rhs"});
      Constraint con;
      con.expr = parse_terms(jc.at("terms"), here + ".terms", ids);
      const std::string sense = jc.value("sense", "<=");
      if (sense == "<=")
        con.sense = Sense::le;
      else if (sense == "=")
        con.sense = Sense::eq;
      else if (sense == ">=")
        con.sense = Sense::ge;
      else
        fail(here, "unknown sense '" + sense + "'");
      con.rhs = number_at(jc, here, "rhs");
      problem.constraints.push_back(std::move(con));
    }
  }
  return problem;
}

namespace {

void write_terms(const PolynomialExpr& expr, const Problem& problem,
                 std::ostringstream& out, const std::string& indent) {
  out << "[";
  bool first_term = true;
  for (const Term& t : expr.terms) {
    out << (first_term ? "\n" : ",\n") << indent << "  {\"coeff\": "
        << num(t.coefficient) << ", \"powers\": {";
    first_term = false;
    bool first_pow = true;
    for (const auto& [v, e] : t.powers) {
      if (!first_pow) out << ", ";
      first_pow = false;
      out << "\"" << problem.var(v).name << "\": " << e;
    }
    out << "}}";
  }
  if (!first_term) out << "\n" << indent;
  out << "]";
}

}  // namespace

std::string serialize_problem(const Problem& problem) {
  std::ostringstream out;
  out << "{\n  \"meta\": {\"name\": \"" << problem.name << "\"";
  if (problem.known_optimum)
    out << ", \"known_optimum\": " << num(*problem.known_optimum);
  out << "},\n  \"variables\": [\n";
  for (size_t i = 0; i < problem.variables.size(); ++i) {
    const Variable& v = problem.variables[i];
    out << "    {\"name\": \"" << v.name << "\", \"lb\": " << num(v.lower)
        << ", \"ub\": " << num(v.upper)
        << ", \"binary\": " << (v.is_binary ? "true" : "false") << "}"
        << (i + 1 < problem.variables.size() ? "," : "") << "\n";
  }
  out << "  ],\n  \"objective\": ";
  write_terms(problem.objective, problem, out, "  ");
  out << ",\n  \"constraints\": [";
  for (size_t c = 0; c < problem.constraints.size(); ++c) {
    const Constraint& con = problem.constraints[c];
    out << (c == 0 ? "\n" : ",\n") << "    {\"terms\": ";
    write_terms(con.expr, problem, out, "    ");
    out << ", \"sense\": \""
        << (con.sense == Sense::le ? "<=" : con.sense == Sense::eq ? "=" : ">=")
        << "\", \"rhs\": " << num(con.rhs) << "}";
  }
  if (!problem.constraints.empty()) out << "\n  ";
  out << "]\n}\n";
  return out.str();
}

Problem builtin_nlp1() {
  Problem p;
  p.name = "nlp1";
  p.known_optimum = 7049.2479;
  const VarId x1 = p.add_variable("x1", 100.0, 10000.0);
  const VarId x2 = p.add_variable("x2", 1000.0, 10000.0);
  const VarId x3 = p.add_variable("x3", 1000.0, 10000.0);
  const VarId x4 = p.add_variable("x4", 10.0, 1000.0);
  const VarId x5 = p.add_variable("x5", 10.0, 1000.0);
  const VarId x6 = p.add_variable("x6", 10.0, 1000.0);
  const VarId x7 = p.add_variable("x7", 10.0, 1000.0);
  const VarId x8 = p.add_variable("x8", 10.0, 1000.0);

  auto lin = [](double c, VarId v) { return Term{c, {{v, 1}}}; };
  auto bil = [](double c, VarId v, VarId w) { return Term{c, {{v, 1}, {w, 1}}}; };

  p.objective.terms = {lin(1, x1), lin(1, x2), lin(1, x3)};
  auto le = [&](std::vector<Term> terms, double rhs) {
    p.constraints.push_back({PolynomialExpr{std::move(terms)}, Sense::le, rhs});
  };
  le({lin(0.0025, x4), lin(0.0025, x6)}, 1.0);
  le({lin(-0.0025, x4), lin(0.0025, x5), lin(0.0025, x7)}, 1.0);
  le({lin(-0.01, x5), lin(0.01, x8)}, 1.0);
  le({lin(100.0, x1), bil(-1.0, x1, x6), lin(833.33252, x4)}, 83333.333);
  le({bil(1.0, x2, x4), bil(-1.0, x2, x7), lin(-1250.0, x4), lin(1250.0, x5)},
     0.0);
  le({bil(1.0, x3, x5), bil(-1.0, x3, x8), lin(-2500.0, x5)}, -1250000.0);
  return p;
}

const std::vector<double>& nlp1_solution() {
  static const std::vector<double> x = {579.307, 1359.97, 5109.97, 182.018,
                                        295.601, 217.982, 286.417, 395.601};
  return x;
}

}  // namespace ampopt
