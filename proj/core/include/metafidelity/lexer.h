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

// A token-level lexer for C and Java, precise enough to count identifiers and
// align token streams. It does not parse.
//
// Identifiers are maximal [A-Za-z_][A-Za-z0-9_]* runs outside the keyword
// list (C11 for C, the Java SE 17 reserved words for Java). String and
// character literals become single literal tokens. Comments and whitespace
// are dropped. A C preprocessor directive becomes one punctuation token
// spanning the (continued) line, so its names never count as identifiers.

#ifndef METAFIDELITY_LEXER_H_
#define METAFIDELITY_LEXER_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace metafidelity {

enum class Language { kC, kJava };

// "c" or "java". Throws kUnsupportedLanguage otherwise.
Language ParseLanguage(std::string_view name);
std::string_view LanguageName(Language lang);

enum class TokenKind { kIdentifier, kKeyword, kLiteral, kOperator, kPunctuation };

std::string_view TokenKindName(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;

  friend bool operator==(const Token&, const Token&) = default;
};

struct TokenStream {
  std::vector<Token> tokens;

  // Distinct identifier names.
  std::set<std::string> Identifiers() const;
  std::size_t size() const { return tokens.size(); }
};

bool IsKeyword(std::string_view word, Language lang);

// Throws kUnterminatedLiteral for an unclosed string, character literal,
// text block or block comment.
TokenStream Lex(std::string_view source, Language lang);

}  // namespace metafidelity

#endif  // METAFIDELITY_LEXER_H_
