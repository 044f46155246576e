// Copyright 2026 The pcid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace pcid {

/// A ProcessSpec or experiment config failed validation. `field()` names the
/// offending entry using dotted paths, e.g. "spec.rule.beta".
class SpecError : public std::invalid_argument {
 public:
  SpecError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A reinforcement step produced an inadmissible weight (non-positive W, or a
/// mixing fraction of exactly one).
class ReinforcementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact algebraic identity between two computed routes was violated.
class IdentityViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A verifier was asked for a check it has no reference form for, or its
/// preconditions (sizes, asymptotic regime) do not hold.
class VerifierError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pcid
