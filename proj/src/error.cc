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

#include "klss/error.h"

namespace klss {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidTree:
      return "InvalidTree";
    case ErrorCode::kImperfectRecall:
      return "ImperfectRecall";
    case ErrorCode::kObservationMoverMismatch:
      return "ObservationMoverMismatch";
    case ErrorCode::kBadDistribution:
      return "BadDistribution";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kNonDistribution:
      return "NonDistribution";
    case ErrorCode::kBadParameter:
      return "BadParameter";
    case ErrorCode::kUnknownGame:
      return "UnknownGame";
    case ErrorCode::kEmptySet:
      return "EmptySet";
    case ErrorCode::kDidNotConverge:
      return "DidNotConverge";
    case ErrorCode::kUnreachableInfoset:
      return "UnreachableInfoset";
    case ErrorCode::kBadOrder:
      return "BadOrder";
    case ErrorCode::kWrongKind:
      return "WrongKind";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kPropertyViolation:
      return "PropertyViolation";
  }
  return "Error";
}

}  // namespace klss
