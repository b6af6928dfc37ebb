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

#ifndef AMPOPT_HARNESS_HPP
#define AMPOPT_HARNESS_HPP

#include <string>
#include <utility>
#include <vector>

#include "ampopt/driver.hpp"

namespace ampopt {

enum class BenchMode { amp, uniform_compare, delta_sweep, obbt_report };

BenchMode parse_mode(const std::string& name);  // throws std::runtime_error
const char* to_string(BenchMode mode);

struct RunReport {
  std::string instance;
  BenchMode mode = BenchMode::amp;
  AmpConfig config;
  std::vector<std::pair<std::string, AmpResult>> runs;
  // uniform-compare: lower-bound curve of the uniform comparator with
  // partition counts matched to the AMP trace iteration by iteration.
  std::vector<IterationRecord> uniform_trace;
  std::string note;
};

/// amp: one solve.  uniform-compare: AMP plus the matched uniform curve.
/// delta-sweep: one run per delta in {4, 8, 10, 16, 32}.  obbt-report:
/// presolve + bound tightening only.
RunReport run_benchmark(BenchMode mode, const Problem& problem,
                        const AmpConfig& config, MilpBackend& backend);

/// Stable key order, 17-significant-digit numerals.
std::string serialize_report(const RunReport& report, const Problem& problem);

}  // namespace ampopt

#endif  // AMPOPT_HARNESS_HPP
