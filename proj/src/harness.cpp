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

#include "ampopt/harness.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>
#include <stdexcept>

#include "ampopt/relax.hpp"

namespace ampopt {

BenchMode parse_mode(const std::string& name) {
  if (name == "amp") return BenchMode::amp;
  if (name == "uniform-compare") return BenchMode::uniform_compare;
  if (name == "delta-sweep") return BenchMode::delta_sweep;
  if (name == "obbt-report") return BenchMode::obbt_report;
  throw std::runtime_error("unknown mode '" + name + "'");
}

const char* to_string(BenchMode mode) {
  switch (mode) {
    case BenchMode::amp:
      return "amp";
    case BenchMode::uniform_compare:
      return "uniform-compare";
    case BenchMode::delta_sweep:
      return "delta-sweep";
    case BenchMode::obbt_report:
      return "obbt-report";
  }
  return "unknown";
}

namespace {

/// Equal-width partitions over the current box with the given counts.
PartitionMap uniform_partitions(const Problem& problem,
                                const std::map<VarId, int>& counts) {
  PartitionMap map;
  for (const auto& [id, n] : counts) {
    const Variable& v = problem.var(id);
    std::vector<Interval> ivs;
    for (int k = 0; k < n; ++k) {
      const double l = v.lower + (v.upper - v.lower) * k / n;
      const double u =
          k + 1 == n ? v.upper : v.lower + (v.upper - v.lower) * (k + 1) / n;
      ivs.push_back({l, u});
    }
    map.intervals[id] = std::move(ivs);
  }
  return map;
}

AmpResult obbt_only(const Problem& problem, const AmpConfig& config,
                    MilpBackend& backend) {
  AmpResult res;
  LocalConfig local_cfg = config.local;
  local_cfg.seed = config.seed;
  std::vector<double> mid(problem.variables.size());
  for (size_t i = 0; i < mid.size(); ++i)
    mid[i] = 0.5 *
             (problem.variables[i].lower + problem.variables[i].upper);
  res.incumbent = local_solve(problem, mid, local_cfg);
  const std::set<VarId> vars =
      select_partition_variables(problem, config.strategy);
  const std::vector<double> seed =
      res.incumbent.has_point() ? res.incumbent.point : mid;
  const PartitionMap partitions = initialize_partitions(
      problem, vars, seed, config.obbt.variant, config.refine);
  std::optional<Solution> cutoff;
  if (res.incumbent.has_point()) cutoff = res.incumbent;
  res.obbt = tighten_bounds(problem, partitions, cutoff, config.obbt, backend);
  res.reason = TerminationReason::converged;
  res.seconds = res.obbt.seconds;
  return res;
}

}  // namespace

RunReport run_benchmark(BenchMode mode, const Problem& problem,
                        const AmpConfig& config, MilpBackend& backend) {
  RunReport report;
  report.instance = problem.name;
  report.mode = mode;
  report.config = config;

  switch (mode) {
    case BenchMode::amp: {
      report.runs.push_back({"amp", amp_solve(problem, config, backend)});
      break;
    }
    case BenchMode::delta_sweep: {
      for (const double delta : {4.0, 8.0, 10.0, 16.0, 32.0}) {
        AmpConfig c = config;
        c.refine.delta = delta;
        char label[32];
        std::snprintf(label, sizeof label, "delta=%g", delta);
        report.runs.push_back({label, amp_solve(problem, c, backend)});
      }
      break;
    }
    case BenchMode::obbt_report: {
      report.runs.push_back({"obbt", obbt_only(problem, config, backend)});
      break;
    }
    case BenchMode::uniform_compare: {
      AmpResult amp = amp_solve(problem, config, backend);
      const double ub =
          amp.incumbent.has_point() ? amp.incumbent.objective : kInf;
      auto [lifted, lifts] = lift_monomials(problem);
      SolveOptions opts = config.solver;
      if (!opts.time_limit) opts.time_limit = 60.0;
      for (const IterationRecord& rec : amp.trace) {
        const PartitionMap uniform =
            uniform_partitions(problem, rec.partition_counts);
        const MilpModel model = build_relaxation(lifted, lifts, uniform);
        const SolveResult r = backend.solve(model, opts);
        IterationRecord u;
        u.iteration = rec.iteration;
        u.lower_bound = r.dual_bound;
        u.upper_bound = ub;
        u.gap = compute_gap(ub, r.dual_bound);
        u.partition_counts = rec.partition_counts;
        report.uniform_trace.push_back(u);
      }
      report.runs.push_back({"amp", std::move(amp)});
      report.note =
          "uniform comparator: equal-width partitions over the original box, "
          "counts matched to the adaptive run per iteration";
      break;
    }
  }
  return report;
}

namespace {

std::string num(double v) {
  if (v == kInf) return "\"inf\"";
  if (v == -kInf) return "\"-inf\"";
  if (std::isnan(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace(std::ostringstream& out, const std::string& indent,
                 const std::vector<IterationRecord>& trace,
                 const Problem& problem) {
  out << "[";
  for (size_t i = 0; i < trace.size(); ++i) {
    const IterationRecord& r = trace[i];
    out << (i == 0 ? "\n" : ",\n") << indent
        << "{\"iteration\": " << r.iteration << ", \"lb\": "
        << num(r.lower_bound) << ", \"ub\": " << num(r.upper_bound)
        << ", \"gap\": " << num(r.gap) << ", \"partitions\": {";
    bool first = true;
    for (const auto& [id, n] : r.partition_counts) {
      if (!first) out << ", ";
      first = false;
      out << "\"" << problem.var(id).name << "\": " << n;
    }
    out << "}, \"milp_seconds\": " << num(r.milp_seconds)
        << ", \"local_seconds\": " << num(r.local_seconds) << "}";
  }
  if (!trace.empty()) out << "\n" << indent;
  out << "]";
}

}  // namespace

std::string serialize_report(const RunReport& report, const Problem& problem) {
  std::ostringstream out;
  char stamp[64];
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);

  const AmpConfig& c = report.config;
  out << "{\n"
      << "  \"instance\": \"" << report.instance << "\",\n"
      << "  \"mode\": \"" << to_string(report.mode) << "\",\n"
      << "  \"timestamp\": \"" << stamp << "\",\n"
      << "  \"config\": {\"epsilon\": " << num(c.epsilon)
      << ", \"timeout\": " << num(c.timeout)
      << ", \"delta\": " << num(c.refine.delta)
      << ", \"width_tol\": " << num(c.refine.width_tol) << ", \"obbt\": \""
      << (c.obbt.variant == ObbtVariant::none
              ? "none"
              : c.obbt.variant == ObbtVariant::bt ? "bt" : "pbt")
      << "\", \"obbt_milp_time_limit\": "
      << (c.obbt.per_milp_time_limit ? num(*c.obbt.per_milp_time_limit)
                                     : "null")
      << ", \"obbt_max_sweeps\": " << c.obbt.max_sweeps
      << ", \"partition_vars\": \""
      << (c.strategy == PartitionStrategy::all ? "all" : "vc")
      << "\", \"workers\": " << c.obbt.workers << ", \"seed\": " << c.seed
      << ", \"max_iterations\": " << c.max_iterations << "},\n"
      << "  \"runs\": [";
  for (size_t k = 0; k < report.runs.size(); ++k) {
    const auto& [label, r] = report.runs[k];
    out << (k == 0 ? "\n" : ",\n") << "    {\"label\": \"" << label
        << "\", \"status\": \"" << to_string(r.reason)
        << "\", \"objective\": "
        << (r.incumbent.has_point() ? num(r.incumbent.objective) : "null")
        << ", \"lower_bound\": " << num(r.lower_bound)
        << ", \"gap\": " << num(r.gap) << ", \"iterations\": " << r.iterations
        << ", \"seconds\": " << num(r.seconds) << ",\n     \"incumbent\": ";
    if (r.incumbent.has_point()) {
      out << "[";
      for (size_t i = 0; i < problem.variables.size(); ++i)
        out << (i ? ", " : "") << num(r.incumbent.point[i]);
      out << "]";
    } else {
      out << "null";
    }
    out << ",\n     \"trace\": ";
    write_trace(out, "       ", r.trace, problem);
    out << ",\n     \"obbt\": {\"sweeps\": " << r.obbt.sweeps
        << ", \"seconds\": " << num(r.obbt.seconds) << ", \"bounds\": [";
    bool first = true;
    if (!r.obbt.bounds.lower.empty()) {
      for (const Variable& v : problem.variables) {
        out << (first ? "\n" : ",\n") << "       {\"name\": \"" << v.name
            << "\", \"original\": [" << num(v.lower) << ", " << num(v.upper)
            << "], \"tightened\": [" << num(r.obbt.bounds.lower[v.id]) << ", "
            << num(r.obbt.bounds.upper[v.id]) << "]}";
        first = false;
      }
      out << "\n     ";
    }
    out << "]},\n     \"events\": [";
    for (size_t e = 0; e < r.events.size(); ++e)
      out << (e ? ", " : "") << "\"" << r.events[e] << "\"";
    out << "]}";
  }
  if (!report.runs.empty()) out << "\n  ";
  out << "],\n  \"uniform_trace\": ";
  write_trace(out, "    ", report.uniform_trace, problem);
  out << ",\n  \"note\": \"" << report.note << "\"\n}\n";
  return out.str();
}

}  // namespace ampopt
