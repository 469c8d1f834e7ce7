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

// Adversarial robustness and adversarial-example quality.
//
//   ICR  sum(changed identifier names) / sum(distinct identifier names)
//   TCR  sum(modified original tokens) / sum(original tokens)
//   AED  mean character edit distance over substituted token pairs
//   ACS  mean cosine similarity of precomputed embeddings
//   ASR  fraction of correctly classified samples whose prediction flips
//
// ICR, TCR and AED aggregate over the whole corpus, not per pair.

#ifndef METAFIDELITY_ATTACK_QUALITY_H_
#define METAFIDELITY_ATTACK_QUALITY_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metafidelity/core_model.h"
#include "metafidelity/lexer.h"

namespace metafidelity {

struct CodePair {
  std::string id;
  std::string original;
  std::string adversarial;
  Language lang = Language::kC;
  std::optional<std::vector<double>> original_embedding;
  std::optional<std::vector<double>> adversarial_embedding;
};

// Throws kInvalidField for empty sources, kDimensionMismatch or kNonFinite
// for bad embeddings.
void ValidateCodePair(const CodePair& pair);

// NDJSON with "id", "original", "adversarial", "lang" and optional
// "original_embedding" / "adversarial_embedding". Errors carry line numbers.
std::vector<CodePair> ReadCodePairs(std::istream& in, bool lenient = false);

struct PairQuality {
  std::string id;
  std::size_t identifiers = 0;          // k: distinct names in the original
  std::size_t identifiers_changed = 0;  // n: of those, absent afterwards
  std::size_t original_tokens = 0;
  std::size_t modified_tokens = 0;
  std::size_t substitutions = 0;
  std::size_t edit_distance_sum = 0;
  std::optional<double> cosine;
};

// Lexes both sides and aligns them. Cosine is filled when both embeddings
// are present.
PairQuality AnalyzePair(const CodePair& pair);

double Icr(std::span<const CodePair> pairs);
double Tcr(std::span<const CodePair> pairs);
// Throws kNoSubstitutions when no pair has a substituted token.
double Aed(std::span<const CodePair> pairs);
// Throws kMissingEmbeddings or kZeroVector.
double Acs(std::span<const CodePair> pairs);

// Throws kDimensionMismatch or kZeroVector.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

// Records are joined by id. Only samples whose pre-attack prediction equals
// the label enter the denominator. Throws kEmptyIntersection or
// kEmptyCorrectSet.
double Asr(std::span<const PredictionRecord> before,
           std::span<const PredictionRecord> after);

struct QualityReport {
  double icr = 0.0;
  double tcr = 0.0;
  std::optional<double> aed;
  std::optional<double> acs;
  std::optional<double> asr;
  std::vector<PairQuality> per_pair;
  std::vector<std::string> warnings;
};

// Computes ICR, TCR, AED and (when `with_acs`) ACS in one pass. AED is
// left empty with a warning when nothing was substituted.
QualityReport EvaluateQuality(std::span<const CodePair> pairs, bool with_acs);

}  // namespace metafidelity

#endif  // METAFIDELITY_ATTACK_QUALITY_H_
