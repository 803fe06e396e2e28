// Copyright 2026 The lqglearn Authors
//
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

#ifndef LQGLEARN_ERRORS_HPP_
#define LQGLEARN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace lqg {

// Exit codes used by the CLI: 0 success, 1 validation, 2 numerical, 3 I/O.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
  static constexpr int kExitCode = 1;
};

// Conditioning failures: singular innovation covariance, near-singular
// Gramian, exhausted generation retries.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
  static constexpr int kExitCode = 2;
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
  static constexpr int kExitCode = 3;
};

}  // namespace lqg

#endif  // LQGLEARN_ERRORS_HPP_
