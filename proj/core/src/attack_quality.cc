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

#include "metafidelity/attack_quality.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>
#include <string>

#include <json.hpp>

#include "metafidelity/divergence.h"
#include "metafidelity/edit_distance.h"
#include "metafidelity/error.h"

namespace metafidelity {
namespace {

using nlohmann::json;

std::vector<std::string> Texts(const TokenStream& stream) {
  std::vector<std::string> texts;
  texts.reserve(stream.size());
  for (const Token& t : stream.tokens) texts.push_back(t.text);
  return texts;
}

std::vector<PairQuality> AnalyzeAll(std::span<const CodePair> pairs) {
  if (pairs.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no code pairs");
  }
  std::vector<PairQuality> out;
  out.reserve(pairs.size());
  for (const CodePair& pair : pairs) out.push_back(AnalyzePair(pair));
  return out;
}

double IcrOf(std::span<const PairQuality> rows) {
  std::size_t changed = 0;
  std::size_t total = 0;
  for (const PairQuality& q : rows) {
    changed += q.identifiers_changed;
    total += q.identifiers;
  }
  if (total == 0) {
    throw Error(ErrorCode::kNoIdentifiers,
                "no identifiers in any original snippet");
  }
  return static_cast<double>(changed) / static_cast<double>(total);
}

double TcrOf(std::span<const PairQuality> rows) {
  std::size_t modified = 0;
  std::size_t total = 0;
  for (const PairQuality& q : rows) {
    modified += q.modified_tokens;
    total += q.original_tokens;
  }
  if (total == 0) {
    throw Error(ErrorCode::kEmptyInput, "original snippets contain no tokens");
  }
  return static_cast<double>(modified) / static_cast<double>(total);
}

double AedOf(std::span<const PairQuality> rows) {
  std::size_t substitutions = 0;
  std::size_t edits = 0;
  for (const PairQuality& q : rows) {
    substitutions += q.substitutions;
    edits += q.edit_distance_sum;
  }
  if (substitutions == 0) {
    throw Error(ErrorCode::kNoSubstitutions, "no substituted tokens");
  }
  return static_cast<double>(edits) / static_cast<double>(substitutions);
}

double AcsOf(std::span<const CodePair> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyInput, "no code pairs");
  double sum = 0.0;
  for (const CodePair& pair : pairs) {
    if (!pair.original_embedding || !pair.adversarial_embedding) {
      throw Error(ErrorCode::kMissingEmbeddings,
                  "pair \"" + pair.id + "\" lacks embeddings");
    }
    sum += CosineSimilarity(*pair.original_embedding,
                            *pair.adversarial_embedding);
  }
  return sum / static_cast<double>(pairs.size());
}

std::optional<std::vector<double>> OptionalVector(const json& doc,
                                                  const char* field) {
  if (!doc.contains(field) || doc[field].is_null()) return std::nullopt;
  const json& value = doc[field];
  if (!value.is_array()) {
    throw Error(ErrorCode::kInvalidField,
                std::string("field \"") + field + "\" must be an array");
  }
  std::vector<double> out;
  for (const json& v : value) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kInvalidField,
                  std::string("field \"") + field + "\" must hold numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::string RequiredString(const json& doc, const char* field) {
  if (!doc.contains(field)) {
    throw Error(ErrorCode::kMissingField,
                std::string("missing field \"") + field + "\"");
  }
  if (!doc[field].is_string()) {
    throw Error(ErrorCode::kInvalidField,
                std::string("field \"") + field + "\" must be a string");
  }
  return doc[field].get<std::string>();
}

}  // namespace

void ValidateCodePair(const CodePair& pair) {
  if (pair.original.empty() || pair.adversarial.empty()) {
    throw Error(ErrorCode::kInvalidField,
                "pair \"" + pair.id + "\" has an empty source");
  }
  for (const auto* embedding : {&pair.original_embedding, &pair.adversarial_embedding}) {
    if (!embedding->has_value()) continue;
    for (double v : **embedding) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFinite,
                    "pair \"" + pair.id + "\" has a non-finite embedding");
      }
    }
  }
  if (pair.original_embedding && pair.adversarial_embedding &&
      pair.original_embedding->size() != pair.adversarial_embedding->size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pair \"" + pair.id + "\" has embeddings of different sizes");
  }
}

std::vector<CodePair> ReadCodePairs(std::istream& in, bool lenient) {
  static const std::set<std::string, std::less<>> kKnown = {
      "id", "original", "adversarial", "lang", "original_embedding",
      "adversarial_embedding"};
  std::vector<CodePair> pairs;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
      if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorCode::kParse, "malformed JSON object");
      }
      if (!lenient) {
        for (const auto& [key, value] : doc.items()) {
          if (!kKnown.contains(key)) {
            throw Error(ErrorCode::kUnknownField, "unknown field \"" + key + "\"");
          }
        }
      }
      CodePair pair;
      pair.id = RequiredString(doc, "id");
      pair.original = RequiredString(doc, "original");
      pair.adversarial = RequiredString(doc, "adversarial");
      pair.lang = ParseLanguage(RequiredString(doc, "lang"));
      pair.original_embedding = OptionalVector(doc, "original_embedding");
      pair.adversarial_embedding = OptionalVector(doc, "adversarial_embedding");
      ValidateCodePair(pair);
      if (!seen.insert(pair.id).second) {
        throw Error(ErrorCode::kDuplicateId, "duplicate id \"" + pair.id + "\"");
      }
      pairs.push_back(std::move(pair));
    } catch (const Error& e) {
      throw Error(e.code(),
                  "line " + std::to_string(line_number) + ": " + e.what(),
                  line_number);
    }
  }
  return pairs;
}

PairQuality AnalyzePair(const CodePair& pair) {
  ValidateCodePair(pair);
  const TokenStream original = Lex(pair.original, pair.lang);
  const TokenStream adversarial = Lex(pair.adversarial, pair.lang);

  PairQuality q;
  q.id = pair.id;
  const std::set<std::string> before = original.Identifiers();
  const std::set<std::string> after = adversarial.Identifiers();
  q.identifiers = before.size();
  q.identifiers_changed = static_cast<std::size_t>(std::count_if(
      before.begin(), before.end(),
      [&after](const std::string& name) { return !after.contains(name); }));

  const std::vector<std::string> a = Texts(original);
  const std::vector<std::string> b = Texts(adversarial);
  const TokenAlignment alignment = AlignTokens(a, b);
  q.original_tokens = a.size();
  q.modified_tokens = alignment.modified();
  q.substitutions = alignment.substitutions.size();
  for (const auto& [i, j] : alignment.substitutions) {
    q.edit_distance_sum += Levenshtein(a[i], b[j]);
  }
  if (pair.original_embedding && pair.adversarial_embedding) {
    q.cosine = CosineSimilarity(*pair.original_embedding,
                                *pair.adversarial_embedding);
  }
  return q;
}

double Icr(std::span<const CodePair> pairs) { return IcrOf(AnalyzeAll(pairs)); }
double Tcr(std::span<const CodePair> pairs) { return TcrOf(AnalyzeAll(pairs)); }
double Aed(std::span<const CodePair> pairs) { return AedOf(AnalyzeAll(pairs)); }
double Acs(std::span<const CodePair> pairs) { return AcsOf(pairs); }

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embeddings have different dimensions");
  }
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    norm_a += a[i] * a[i];
    norm_b += b[i] * b[i];
  }
  if (norm_a == 0.0 || norm_b == 0.0) {
    throw Error(ErrorCode::kZeroVector, "cosine of a zero vector");
  }
  return std::clamp(dot / (std::sqrt(norm_a) * std::sqrt(norm_b)), -1.0, 1.0);
}

double Asr(std::span<const PredictionRecord> before,
           std::span<const PredictionRecord> after) {
  const IdJoin join = JoinById(before, after);
  if (join.matched.empty()) {
    throw Error(ErrorCode::kEmptyIntersection,
                "pre- and post-attack dumps share no ids");
  }
  std::size_t correct = 0;
  std::size_t flipped = 0;
  for (const auto& [i, j] : join.matched) {
    const std::size_t prediction = ArgMax(before[i].scores());
    if (prediction != before[i].label()) continue;
    ++correct;
    if (ArgMax(after[j].scores()) != prediction) ++flipped;
  }
  if (correct == 0) {
    throw Error(ErrorCode::kEmptyCorrectSet,
                "no sample is classified correctly before the attack");
  }
  return static_cast<double>(flipped) / static_cast<double>(correct);
}

QualityReport EvaluateQuality(std::span<const CodePair> pairs, bool with_acs) {
  QualityReport report;
  report.per_pair = AnalyzeAll(pairs);
  report.icr = IcrOf(report.per_pair);
  report.tcr = TcrOf(report.per_pair);
  try {
    report.aed = AedOf(report.per_pair);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoSubstitutions) throw;
    report.warnings.push_back("AED undefined: no substituted tokens");
  }
  if (with_acs) report.acs = AcsOf(pairs);
  return report;
}

}  // namespace metafidelity
