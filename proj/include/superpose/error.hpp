// Copyright 2026 The superpose Authors
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
#include <string_view>

namespace superpose {

enum class ErrorKind {
  NonHermitian,
  NonFinite,
  DimensionMismatch,
  NotNormalized,
  LinearlyDependent,
  InvalidState,
  Singular,
  NotTracePreserving,
  NotSubnormalized,
  NotFree,
  NotUnitary,
  NoConvergence,
  SolverFailure,
  BadData,
  RankMismatch,
  LinearlyDependentEnsemble,
  InvalidArgument,
  SchemaViolation,
  UnknownCommand,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::LinearlyDependent: return "LinearlyDependent";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NotTracePreserving: return "NotTracePreserving";
    case ErrorKind::NotSubnormalized: return "NotSubnormalized";
    case ErrorKind::NotFree: return "NotFree";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::BadData: return "BadData";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::LinearlyDependentEnsemble: return "LinearlyDependentEnsemble";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::UnknownCommand: return "UnknownCommand";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace superpose
