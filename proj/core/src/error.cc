// Copyright 2026 The MetaFidelity Authors.
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

#include "metafidelity/error.h"

namespace metafidelity {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kUnknownField: return "UnknownField";
    case ErrorCode::kInvalidField: return "InvalidField";
    case ErrorCode::kBothScoreKinds: return "BothScoreKinds";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kNotASimplex: return "NotASimplex";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kLabelMismatch: return "LabelMismatch";
    case ErrorCode::kClassCountMismatch: return "ClassCountMismatch";
    case ErrorCode::kEmptyIntersection: return "EmptyIntersection";
    case ErrorCode::kNonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kNegativeDelta: return "NegativeDelta";
    case ErrorCode::kInvalidTau: return "InvalidTau";
    case ErrorCode::kEmptyConfidenceSubset: return "EmptyConfidenceSubset";
    case ErrorCode::kZeroBins: return "ZeroBins";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kUnsupportedLanguage: return "UnsupportedLanguage";
    case ErrorCode::kUnterminatedLiteral: return "UnterminatedLiteral";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNoIdentifiers: return "NoIdentifiers";
    case ErrorCode::kNoSubstitutions: return "NoSubstitutions";
    case ErrorCode::kMissingEmbeddings: return "MissingEmbeddings";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyCorrectSet: return "EmptyCorrectSet";
    case ErrorCode::kDegenerateMatrix: return "DegenerateMatrix";
    case ErrorCode::kTooFewRows: return "TooFewRows";
    case ErrorCode::kAllZeroDifferences: return "AllZeroDifferences";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kUnknownKind: return "UnknownKind";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(message), code_(code), line_(line) {}

}  // namespace metafidelity
