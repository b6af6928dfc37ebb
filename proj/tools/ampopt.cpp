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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ampopt/harness.hpp"
#include "ampopt/io.hpp"

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitTimeout = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInputError = 4;

ampopt::Problem load_instance(const std::string& spec) {
  if (spec == "nlp1") return ampopt::builtin_nlp1();
  std::ifstream in(spec);
  if (!in) throw ampopt::ParseError("cannot open instance file: " + spec);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ampopt::parse_problem(buf.str());
}

void print_run(const std::string& label, const ampopt::AmpResult& r) {
  std::printf("[%s] status=%s iterations=%d lb=%.8g ub=%.8g gap=%.3g "
              "time=%.1fs\n",
              label.c_str(), ampopt::to_string(r.reason), r.iterations,
              r.lower_bound,
              r.incumbent.has_point() ? r.incumbent.objective : ampopt::kInf,
              r.gap, r.seconds);
  for (const ampopt::IterationRecord& rec : r.trace) {
    int total_parts = 0;
    for (const auto& [id, n] : rec.partition_counts) total_parts += n;
    std::printf("  iter %3d  lb %14.6f  ub %14.6f  gap %10.4g  parts %4d  "
                "milp %6.2fs  local %5.2fs\n",
                rec.iteration, rec.lower_bound, rec.upper_bound, rec.gap,
                total_parts, rec.milp_seconds, rec.local_seconds);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ampopt: adaptive multivariate partitioning for polynomial "
               "MINLPs"};

  std::string instance = "nlp1";
  std::string mode_name = "amp";
  std::string obbt_name = "pbt";
  std::string partition_vars = "all";
  std::string report_path;
  ampopt::AmpConfig config;
  double obbt_milp_time_limit = -1.0;

  app.add_option("instance", instance,
                 "Instance: 'nlp1' or a path to an instance file");
  app.add_option("--delta", config.refine.delta, "Refinement ratio (> 1)");
  app.add_option("--eps", config.epsilon, "Relative optimality gap tolerance");
  app.add_option("--timeout", config.timeout, "Wall-clock limit in seconds");
  app.add_option("--obbt", obbt_name, "Bound tightening: none, bt, or pbt");
  app.add_option("--obbt-milp-time-limit", obbt_milp_time_limit,
                 "Per-subproblem time limit in seconds during OBBT");
  app.add_option("--partition-vars", partition_vars,
                 "Partition variable selection: all or vc");
  app.add_option("--workers", config.obbt.workers, "OBBT sweep worker count");
  app.add_option("--seed", config.seed, "Random seed");
  app.add_option("--mode", mode_name,
                 "amp, uniform-compare, delta-sweep, or obbt-report");
  app.add_option("--report", report_path, "Write the run report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitConverged : kExitInputError;
  }

  ampopt::Problem problem;
  ampopt::BenchMode mode;
  try {
    problem = load_instance(instance);
    mode = ampopt::parse_mode(mode_name);
    if (obbt_name == "none")
      config.obbt.variant = ampopt::ObbtVariant::none;
    else if (obbt_name == "bt")
      config.obbt.variant = ampopt::ObbtVariant::bt;
    else if (obbt_name == "pbt")
      config.obbt.variant = ampopt::ObbtVariant::pbt;
    else
      throw std::runtime_error("unknown --obbt value '" + obbt_name + "'");
    if (partition_vars == "all")
      config.strategy = ampopt::PartitionStrategy::all;
    else if (partition_vars == "vc")
      config.strategy = ampopt::PartitionStrategy::vertex_cover;
    else
      throw std::runtime_error("unknown --partition-vars value '" +
                               partition_vars + "'");
    if (config.refine.delta <= 1.0)
      throw std::runtime_error("--delta must be > 1");
    if (obbt_milp_time_limit > 0.0)
      config.obbt.per_milp_time_limit = obbt_milp_time_limit;
    const auto diagnostics = ampopt::validate(problem);
    if (!diagnostics.empty())
      throw std::runtime_error("invalid instance: " + diagnostics[0].message);
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  }

  auto backend = ampopt::make_bundled_backend();
  ampopt::check_backend(*backend, true, true,
                        config.obbt.per_milp_time_limit.has_value());

  const ampopt::RunReport report =
      ampopt::run_benchmark(mode, problem, config, *backend);
  for (const auto& [label, r] : report.runs) print_run(label, r);
  if (!report.uniform_trace.empty()) {
    std::printf("[uniform] matched-count comparator gaps:\n");
    for (const ampopt::IterationRecord& rec : report.uniform_trace)
      std::printf("  iter %3d  lb %14.6f  gap %10.4g\n", rec.iteration,
                  rec.lower_bound, rec.gap);
  }

  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::app);
    if (!out) {
      std::cerr << "input error: cannot open report path " << report_path
                << "\n";
      return kExitInputError;
    }
    out << ampopt::serialize_report(report, problem);
  }

  if (mode != ampopt::BenchMode::amp) return kExitConverged;
  const ampopt::AmpResult& main_run = report.runs.front().second;
  switch (main_run.reason) {
    case ampopt::TerminationReason::converged:
      return kExitConverged;
    case ampopt::TerminationReason::infeasible:
      return kExitInfeasible;
    default:
      return main_run.incumbent.has_point() ? kExitTimeout : kExitInfeasible;
  }
}
