// Copyright 2026 The amdi-rate Authors
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

namespace amdi {

enum class ErrorKind {
  NegativeProbability,
  NormalizationExceeded,
  InvalidParameter,
  CapExceeded,
  UnknownMode,
  DegenerateDenominator,
  DomainError,
  ParseError,
  ConflictingSourceSpec,
  IoError,
};

inline const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::NegativeProbability: return "NegativeProbability";
  case ErrorKind::NormalizationExceeded: return "NormalizationExceeded";
  case ErrorKind::InvalidParameter: return "InvalidParameter";
  case ErrorKind::CapExceeded: return "CapExceeded";
  case ErrorKind::UnknownMode: return "UnknownMode";
  case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
  case ErrorKind::DomainError: return "DomainError";
  case ErrorKind::ParseError: return "ParseError";
  case ErrorKind::ConflictingSourceSpec: return "ConflictingSourceSpec";
  case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace amdi
