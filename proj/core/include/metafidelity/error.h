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

#ifndef METAFIDELITY_ERROR_H_
#define METAFIDELITY_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace metafidelity {

enum class ErrorCode {
  // Ingestion and record validation.
  kParse,
  kMissingField,
  kUnknownField,
  kInvalidField,
  kBothScoreKinds,
  kNonFinite,
  kLabelOutOfRange,
  kNotASimplex,
  kDuplicateId,
  // Pairing.
  kLabelMismatch,
  kClassCountMismatch,
  kEmptyIntersection,
  // Numerics.
  kNonPositiveTemperature,
  kLengthMismatch,
  kInvalidConfig,
  // Metamorphic relations.
  kEmptyDataset,
  kNegativeDelta,
  kInvalidTau,
  kEmptyConfidenceSubset,
  kZeroBins,
  kOutOfRange,
  // Attack quality.
  kUnsupportedLanguage,
  kUnterminatedLiteral,
  kEmptyInput,
  kNoIdentifiers,
  kNoSubstitutions,
  kMissingEmbeddings,
  kZeroVector,
  kDimensionMismatch,
  kEmptyCorrectSet,
  // Statistics.
  kDegenerateMatrix,
  kTooFewRows,
  kAllZeroDifferences,
  // Command line.
  kIo,
  kUnknownKind,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library. `line()` is the 1-based input line
// for ingestion errors and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace metafidelity

#endif  // METAFIDELITY_ERROR_H_
