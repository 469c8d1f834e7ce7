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

#ifndef METAFIDELITY_EDIT_DISTANCE_H_
#define METAFIDELITY_EDIT_DISTANCE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace metafidelity {

// Decodes UTF-8 into code points. Invalid bytes decode to themselves.
std::u32string DecodeUtf8(std::string_view text);

// Character-level Levenshtein distance (unit-cost insert, delete,
// substitute) over code points.
std::size_t Levenshtein(std::string_view a, std::string_view b);

// Edit script between two token sequences derived from a longest common
// subsequence. Between consecutive matched tokens, the unmatched original
// and adversarial tokens are paired positionally as substitutions; the
// surplus on either side becomes deletions or insertions.
struct TokenAlignment {
  std::size_t matched = 0;
  std::vector<std::pair<std::size_t, std::size_t>> substitutions;
  std::vector<std::size_t> deletions;
  std::vector<std::size_t> insertions;

  // Original tokens that did not survive: substitutions plus deletions.
  std::size_t modified() const { return substitutions.size() + deletions.size(); }
};

TokenAlignment AlignTokens(std::span<const std::string> original,
                           std::span<const std::string> adversarial);

}  // namespace metafidelity

#endif  // METAFIDELITY_EDIT_DISTANCE_H_
