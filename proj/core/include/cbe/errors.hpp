// Copyright 2026 The Authors.
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

namespace cbe {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value object was constructed from arguments that violate its invariants.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// An exhaustive operation would exceed its enumeration budget.
class ScaleGuardError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A search with a bounded budget found nothing.
class ExhaustionError : public Error {
 public:
  using Error::Error;
};

// An internal guarantee failed. Always a bug or a counterexample worth keeping.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Malformed instance or outcome files.
class InstanceError : public Error {
 public:
  using Error::Error;
};

inline void check_invariant(bool condition, const std::string& what) {
  if (!condition) throw InvariantViolation(what);
}

inline void check_precondition(bool condition, const std::string& what) {
  if (!condition) throw PreconditionError(what);
}

}  // namespace cbe
