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

#include "ampopt/lp_format.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ampopt {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_linear(const std::vector<std::pair<int, double>>& coeffs,
                  std::ostream& out) {
  bool first = true;
  for (const auto& [j, c] : coeffs) {
    if (c == 0.0) continue;
    if (first) {
      out << (c < 0 ? "- " : "") << num(std::abs(c));
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ") << num(std::abs(c));
    }
    out << " x" << j;
  }
  if (first) out << "0 x0";
}

void write_row(const LinearRow& row, int idx, std::ostream& out) {
  out << " c" << idx << ": ";
  write_linear(row.coeffs, out);
  out << (row.sense == RowSense::eq ? " = " : " <= ") << num(row.rhs) << "\n";
}

}  // namespace

void write_lp(const MilpModel& model, const std::vector<LinearRow>& extra_rows,
              std::ostream& out) {
  out << "Minimize\n obj: ";
  write_linear(model.objective, out);
  out << "\nSubject To\n";
  int idx = 0;
  for (const LinearRow& row : model.rows) write_row(row, idx++, out);
  for (const LinearRow& row : extra_rows) write_row(row, idx++, out);
  out << "Bounds\n";
  for (int j = 0; j < static_cast<int>(model.vars.size()); ++j) {
    const MilpVar& v = model.vars[j];
    if (v.lower == -kInf && v.upper == kInf) {
      out << " x" << j << " free\n";
    } else if (v.lower == v.upper) {
      out << " x" << j << " = " << num(v.lower) << "\n";
    } else {
      if (v.lower == -kInf)
        out << " -inf";
      else
        out << " " << num(v.lower);
      out << " <= x" << j << " <= ";
      if (v.upper == kInf)
        out << "+inf";
      else
        out << num(v.upper);
      out << "\n";
    }
  }
  bool any_bin = false;
  for (int j = 0; j < static_cast<int>(model.vars.size()); ++j) {
    if (!model.vars[j].is_binary) continue;
    if (!any_bin) out << "Binaries\n";
    any_bin = true;
    out << " x" << j << "\n";
  }
  out << "End\n";
}

SolveResult read_result(std::istream& in, int num_vars) {
  SolveResult res;
  std::vector<double> x(num_vars, 0.0);
  bool any_var = false;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "status") {
      std::string st;
      ls >> st;
      if (st == "optimal")
        res.status = MilpStatus::optimal;
      else if (st == "feasible")
        res.status = MilpStatus::feasible;
      else if (st == "infeasible")
        res.status = MilpStatus::infeasible;
      else if (st == "unbounded")
        res.status = MilpStatus::unbounded;
      else if (st == "time_limit")
        res.status = MilpStatus::time_limit;
      else
        res.status = MilpStatus::error;
    } else if (key == "objective") {
      double v;
      if (ls >> v) res.objective = v;
    } else if (key == "dual_bound") {
      double v;
      if (ls >> v) res.dual_bound = v;
    } else if (key == "var") {
      std::string name;
      double v;
      if (ls >> name >> v && name.size() > 1 && name[0] == 'x') {
        const int j = std::atoi(name.c_str() + 1);
        if (j >= 0 && j < num_vars) {
          x[j] = v;
          any_var = true;
        }
      }
    }
  }
  if (any_var) res.point = x;
  if (res.status == MilpStatus::optimal && res.objective &&
      res.dual_bound == -kInf)
    res.dual_bound = *res.objective;
  return res;
}

namespace {

class ExternalBackend final : public MilpBackend {
 public:
  ExternalBackend(std::string command, BackendCapabilities caps)
      : command_(std::move(command)), caps_(caps) {}

  std::string name() const override { return "external:" + command_; }
  BackendCapabilities capabilities() const override { return caps_; }

  SolveResult solve(const MilpModel& model,
                    const SolveOptions& options) override {
    std::vector<LinearRow> cuts;
    SolveResult res;
    // Outer loop keeps the quadratic rows honest across external calls.
    for (int round = 0; round < 200; ++round) {
      res = invoke(model, cuts);
      if (res.status != MilpStatus::optimal &&
          res.status != MilpStatus::feasible)
        return res;
      if (!res.point) return res;
      bool violated = false;
      for (const ConvexQuadRow& q : model.quad_rows) {
        const double x0 = (*res.point)[q.base];
        if (x0 * x0 - (*res.point)[q.lifted] <= options.oa_tol) continue;
        LinearRow row;
        row.coeffs = {{q.base, 2.0 * x0}, {q.lifted, -1.0}};
        row.rhs = x0 * x0;
        cuts.push_back(std::move(row));
        violated = true;
      }
      if (!violated) break;
    }
    if (res.objective) *res.objective += model.objective_offset;
    if (std::isfinite(res.dual_bound))
      res.dual_bound += model.objective_offset;
    return res;
  }

 private:
  SolveResult invoke(const MilpModel& model,
                     const std::vector<LinearRow>& cuts) {
    char model_path[] = "/tmp/ampopt_model_XXXXXX";
    char result_path[] = "/tmp/ampopt_result_XXXXXX";
    const int fd1 = mkstemp(model_path);
    const int fd2 = mkstemp(result_path);
    SolveResult res;
    if (fd1 < 0 || fd2 < 0) {
      res.diagnostic = "cannot create temporary files";
      return res;
    }
    close(fd1);
    close(fd2);
    {
      std::ofstream out(model_path);
      write_lp(model, cuts, out);
    }
    const std::string cmd =
        command_ + " " + model_path + " " + result_path;
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
      res.diagnostic = "external solver exited with status " +
                       std::to_string(rc);
      std::remove(model_path);
      std::remove(result_path);
      return res;
    }
    std::ifstream in(result_path);
    res = read_result(in, static_cast<int>(model.vars.size()));
    std::remove(model_path);
    std::remove(result_path);
    return res;
  }

  std::string command_;
  BackendCapabilities caps_;
};

}  // namespace

std::unique_ptr<MilpBackend> make_external_backend(std::string command,
                                                   BackendCapabilities caps) {
  return std::make_unique<ExternalBackend>(std::move(command), caps);
}

}  // namespace ampopt
