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

#ifndef AMPOPT_IO_HPP
#define AMPOPT_IO_HPP

#include <stdexcept>
#include <string>

#include "ampopt/model.hpp"

namespace ampopt {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse the JSON instance format (sections meta / variables / objective /
/// constraints).  Throws ParseError with the offending field's location.
Problem parse_problem(const std::string& document);

/// Inverse of parse_problem; stable key order, 17-significant-digit numbers.
std::string serialize_problem(const Problem& problem);

/// The bundled NLP1 instance (8 continuous variables, 6 constraints, known
/// optimum 7049.2479).
Problem builtin_nlp1();

/// Known optimal point of NLP1.
const std::vector<double>& nlp1_solution();

}  // namespace ampopt

#endif  // AMPOPT_IO_HPP
