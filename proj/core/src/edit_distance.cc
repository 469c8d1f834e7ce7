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

#include "metafidelity/edit_distance.h"

#include <algorithm>
#include <cstdint>

namespace metafidelity {

std::u32string DecodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t extra = 0;
    char32_t cp = lead;
    if (lead >= 0xF0 && lead <= 0xF4) {
      extra = 3;
      cp = lead & 0x07;
    } else if (lead >= 0xE0) {
      extra = lead <= 0xEF ? 2 : 0;
      cp = lead & 0x0F;
    } else if (lead >= 0xC2) {
      extra = 1;
      cp = lead & 0x1F;
    }
    // ASCII and stray bytes fall through as themselves.
    bool valid = extra > 0 && i + extra < text.size();
    for (std::size_t k = 1; valid && k <= extra; ++k) {
      const auto cont = static_cast<unsigned char>(text[i + k]);
      if ((cont & 0xC0) != 0x80) valid = false;
      cp = (cp << 6) | (cont & 0x3F);
    }
    if (valid) {
      out.push_back(cp);
      i += extra + 1;
    } else {
      out.push_back(lead);
      ++i;
    }
  }
  return out;
}

std::size_t Levenshtein(std::string_view a, std::string_view b) {
  std::u32string s = DecodeUtf8(a);
  std::u32string t = DecodeUtf8(b);
  if (s.size() < t.size()) std::swap(s, t);
  // Two rows over the shorter string.
  std::vector<std::size_t> prev(t.size() + 1);
  std::vector<std::size_t> cur(t.size() + 1);
  for (std::size_t j = 0; j <= t.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const std::size_t substitute = prev[j - 1] + (s[i - 1] == t[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
    }
    std::swap(prev, cur);
  }
  return prev[t.size()];
}

TokenAlignment AlignTokens(std::span<const std::string> original,
                           std::span<const std::string> adversarial) {
  TokenAlignment out;
  std::size_t prefix = 0;
  while (prefix < original.size() && prefix < adversarial.size() &&
         original[prefix] == adversarial[prefix]) {
    ++prefix;
  }
  std::size_t suffix = 0;
  while (suffix < original.size() - prefix &&
         suffix < adversarial.size() - prefix &&
         original[original.size() - 1 - suffix] ==
             adversarial[adversarial.size() - 1 - suffix]) {
    ++suffix;
  }
  const std::span<const std::string> a =
      original.subspan(prefix, original.size() - prefix - suffix);
  const std::span<const std::string> b =
      adversarial.subspan(prefix, adversarial.size() - prefix - suffix);
  out.matched = prefix + suffix;

  // lcs[i][j] = LCS length of a[i..] and b[j..], row-major.
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t width = m + 1;
  std::vector<std::uint32_t> lcs((n + 1) * width, 0);
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i * width + j] =
          a[i] == b[j] ? lcs[(i + 1) * width + j + 1] + 1
                       : std::max(lcs[(i + 1) * width + j], lcs[i * width + j + 1]);
    }
  }

  std::vector<std::size_t> gap_deleted;
  std::vector<std::size_t> gap_inserted;
  auto flush_gap = [&] {
    const std::size_t paired = std::min(gap_deleted.size(), gap_inserted.size());
    for (std::size_t k = 0; k < paired; ++k) {
      out.substitutions.emplace_back(gap_deleted[k], gap_inserted[k]);
    }
    out.deletions.insert(out.deletions.end(), gap_deleted.begin() + paired,
                         gap_deleted.end());
    out.insertions.insert(out.insertions.end(), gap_inserted.begin() + paired,
                          gap_inserted.end());
    gap_deleted.clear();
    gap_inserted.clear();
  };

  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j]) {
      flush_gap();
      ++out.matched;
      ++i;
      ++j;
    } else if (j == m || (i < n && lcs[(i + 1) * width + j] >= lcs[i * width + j + 1])) {
      gap_deleted.push_back(prefix + i++);
    } else {
      gap_inserted.push_back(prefix + j++);
    }
  }
  flush_gap();
  return out;
}

}  // namespace metafidelity
