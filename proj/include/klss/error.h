// Copyright 2026 The klss Authors
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

#ifndef KLSS_ERROR_H_
#define KLSS_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace klss {

enum class ErrorCode {
  kInvalidTree,
  kImperfectRecall,
  kObservationMoverMismatch,
  kBadDistribution,
  kDimensionMismatch,
  kNonDistribution,
  kBadParameter,
  kUnknownGame,
  kEmptySet,
  kDidNotConverge,
  kUnreachableInfoset,
  kBadOrder,
  kWrongKind,
  kParseError,
  kInvalidArgument,
  kPropertyViolation,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by the solver when the iteration budget runs out; carries the
// certified gap that was reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(double gap, int iterations)
      : Error(ErrorCode::kDidNotConverge,
              "gap " + std::to_string(gap) + " after " +
                  std::to_string(iterations) + " iterations"),
        gap_(gap),
        iterations_(iterations) {}

  double gap() const { return gap_; }
  int iterations() const { return iterations_; }

 private:
  double gap_;
  int iterations_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void Check(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) Fail(code, what);
}

}  // namespace klss

#endif  // KLSS_ERROR_H_
