// Copyright 2026 The qwft authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qwft {

// Input that fails validation: malformed matrices, schema violations,
// dimension mismatches. Maps to exit code 2 at the CLI boundary.
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& message)
      : std::runtime_error(message) {}
};

// Value outside a mathematical domain (log/inverse of a non-positive
// operator, and similar).
class MathDomainError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Parameter outside the supported numeric range (overflow guards).
class RangeError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// A documented precondition was broken by the caller, e.g. a decomposition
// whose reference state is not the Gibbs state of the initial Hamiltonian.
class PreconditionError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// A mathematical inequality that is provably true was violated numerically.
// This always signals a bug in the implementation, never bad user input,
// and maps to exit code 1 at the CLI boundary.
class InequalityViolation : public std::runtime_error {
 public:
  explicit InequalityViolation(const std::string& message)
      : std::runtime_error(message) {}
};

}  // namespace qwft
