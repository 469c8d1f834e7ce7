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

#include "metafidelity/lexer.h"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "metafidelity/error.h"

namespace metafidelity {
namespace {

const std::unordered_set<std::string_view>& CKeywords() {
  static const std::unordered_set<std::string_view> kWords = {
      "auto",       "break",     "case",           "char",
      "const",      "continue",  "default",        "do",
      "double",     "else",      "enum",           "extern",
      "float",      "for",       "goto",           "if",
      "inline",     "int",       "long",           "register",
      "restrict",   "return",    "short",          "signed",
      "sizeof",     "static",    "struct",         "switch",
      "typedef",    "union",     "unsigned",       "void",
      "volatile",   "while",     "_Alignas",       "_Alignof",
      "_Atomic",    "_Bool",     "_Complex",       "_Generic",
      "_Imaginary", "_Noreturn", "_Static_assert", "_Thread_local",
  };
  return kWords;
}

const std::unordered_set<std::string_view>& JavaKeywords() {
  static const std::unordered_set<std::string_view> kWords = {
      "abstract",   "assert",       "boolean",   "break",      "byte",
      "case",       "catch",        "char",      "class",      "const",
      "continue",   "default",      "do",        "double",     "else",
      "enum",       "extends",      "final",     "finally",    "float",
      "for",        "goto",         "if",        "implements", "import",
      "instanceof", "int",          "interface", "long",       "native",
      "new",        "package",      "private",   "protected",  "public",
      "return",     "short",        "static",    "strictfp",   "super",
      "switch",     "synchronized", "this",      "throw",      "throws",
      "transient",  "try",          "void",      "volatile",   "while",
      "_",
  };
  return kWords;
}

bool IsJavaLiteralWord(std::string_view word) {
  return word == "true" || word == "false" || word == "null";
}

// Longest first so maximal munch works with a linear scan.
constexpr std::string_view kOperators[] = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "++", "--", "<<", ">>",
    "<=",   ">=",  "==",  "!=",  "&&",  "||", "+=", "-=", "*=", "/=",
    "%=",   "&=",  "|=",  "^=",  "::",  "##", "+",  "-",  "*",  "/",
    "%",    "<",   ">",   "=",   "!",   "&",  "|",  "^",  "~",
};

constexpr std::string_view kSingleOperators = "?:.";
constexpr std::string_view kPunctuation = "()[]{};,@#\\$`";

bool IsIdentStart(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool IsIdentChar(char c) {
  return IsIdentStart(c) || (c >= '0' && c <= '9');
}

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

class Lexer {
 public:
  Lexer(std::string_view src, Language lang) : src_(src), lang_(lang) {}

  TokenStream Run() {
    TokenStream out;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (IsSpace(c)) {
        if (c == '\n') at_line_start_ = true;
        ++pos_;
        continue;
      }
      if (StartsWith("//")) {
        SkipLineComment();
        continue;
      }
      if (StartsWith("/*")) {
        SkipBlockComment();
        continue;
      }
      const bool line_start = at_line_start_;
      at_line_start_ = false;
      if (lang_ == Language::kC && c == '#' && line_start) {
        out.tokens.push_back({TokenKind::kPunctuation, Directive()});
      } else if (lang_ == Language::kJava && StartsWith("\"\"\"")) {
        out.tokens.push_back({TokenKind::kLiteral, TextBlock()});
      } else if (c == '"' || c == '\'') {
        out.tokens.push_back({TokenKind::kLiteral, Quoted(pos_)});
      } else if (IsIdentStart(c)) {
        out.tokens.push_back(Word());
      } else if (IsDigit(c) ||
                 (c == '.' && pos_ + 1 < src_.size() && IsDigit(src_[pos_ + 1]))) {
        out.tokens.push_back({TokenKind::kLiteral, Number()});
      } else {
        out.tokens.push_back(Symbol());
      }
    }
    return out;
  }

 private:
  bool StartsWith(std::string_view s) const {
    return src_.substr(pos_, s.size()) == s;
  }

  void SkipLineComment() {
    while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
  }

  void SkipBlockComment() {
    const std::size_t close = src_.find("*/", pos_ + 2);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::kUnterminatedLiteral, "unterminated block comment");
    }
    for (std::size_t i = pos_; i < close; ++i) {
      if (src_[i] == '\n') at_line_start_ = true;
    }
    pos_ = close + 2;
  }

  std::string Directive() {
    const std::size_t begin = pos_;
    while (pos_ < src_.size() && src_[pos_] != '\n') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') {
        pos_ += 2;
        continue;
      }
      ++pos_;
    }
    std::string text(src_.substr(begin, pos_ - begin));
    while (!text.empty() && IsSpace(text.back())) text.pop_back();
    return text;
  }

  // A '...' or "..." literal whose opening quote is at pos_. `begin` may sit
  // earlier to include an encoding prefix.
  std::string Quoted(std::size_t begin) {
    const char quote = src_[pos_];
    ++pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
        continue;
      }
      if (c == '\n') break;
      ++pos_;
      if (c == quote) return std::string(src_.substr(begin, pos_ - begin));
    }
    throw Error(ErrorCode::kUnterminatedLiteral,
                std::string("unterminated ") +
                    (quote == '"' ? "string" : "character") + " literal");
  }

  std::string TextBlock() {
    const std::size_t begin = pos_;
    pos_ += 3;
    while (pos_ < src_.size()) {
      if (src_[pos_] == '\\') {
        pos_ += 2;
        continue;
      }
      if (StartsWith("\"\"\"")) {
        pos_ += 3;
        return std::string(src_.substr(begin, pos_ - begin));
      }
      ++pos_;
    }
    throw Error(ErrorCode::kUnterminatedLiteral, "unterminated text block");
  }

  Token Word() {
    const std::size_t begin = pos_;
    while (pos_ < src_.size() && IsIdentChar(src_[pos_])) ++pos_;
    const std::string_view word = src_.substr(begin, pos_ - begin);
    if (lang_ == Language::kC && pos_ < src_.size() &&
        (src_[pos_] == '"' || src_[pos_] == '\'') &&
        (word == "L" || word == "u" || word == "U" || word == "u8")) {
      return {TokenKind::kLiteral, Quoted(begin)};
    }
    if (lang_ == Language::kJava && IsJavaLiteralWord(word)) {
      return {TokenKind::kLiteral, std::string(word)};
    }
    const TokenKind kind =
        IsKeyword(word, lang_) ? TokenKind::kKeyword : TokenKind::kIdentifier;
    return {kind, std::string(word)};
  }

  // pp-number: digits, letters, '_', '.', and a sign right after an exponent
  // marker.
  std::string Number() {
    const std::size_t begin = pos_;
    ++pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if ((c == '+' || c == '-') &&
          (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E' ||
           src_[pos_ - 1] == 'p' || src_[pos_ - 1] == 'P')) {
        ++pos_;
        continue;
      }
      if (!IsIdentChar(c) && c != '.') break;
      ++pos_;
    }
    return std::string(src_.substr(begin, pos_ - begin));
  }

  Token Symbol() {
    for (std::string_view op : kOperators) {
      if (StartsWith(op)) {
        pos_ += op.size();
        return {TokenKind::kOperator, std::string(op)};
      }
    }
    const char c = src_[pos_];
    if (kSingleOperators.find(c) != std::string_view::npos) {
      ++pos_;
      return {TokenKind::kOperator, std::string(1, c)};
    }
    if (kPunctuation.find(c) != std::string_view::npos) {
      ++pos_;
      return {TokenKind::kPunctuation, std::string(1, c)};
    }
    // Anything else (non-ASCII runs, stray control bytes) is kept whole.
    const std::size_t begin = pos_;
    while (pos_ < src_.size() && static_cast<unsigned char>(src_[pos_]) >= 0x80) {
      ++pos_;
    }
    if (pos_ == begin) ++pos_;
    return {TokenKind::kPunctuation, std::string(src_.substr(begin, pos_ - begin))};
  }

  std::string_view src_;
  Language lang_;
  std::size_t pos_ = 0;
  bool at_line_start_ = true;
};

}  // namespace

Language ParseLanguage(std::string_view name) {
  if (name == "c") return Language::kC;
  if (name == "java") return Language::kJava;
  throw Error(ErrorCode::kUnsupportedLanguage,
              "unsupported language \"" + std::string(name) + "\"");
}

std::string_view LanguageName(Language lang) {
  return lang == Language::kC ? "c" : "java";
}

std::string_view TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kIdentifier: return "identifier";
    case TokenKind::kKeyword: return "keyword";
    case TokenKind::kLiteral: return "literal";
    case TokenKind::kOperator: return "operator";
    case TokenKind::kPunctuation: return "punctuation";
  }
  return "unknown";
}

std::set<std::string> TokenStream::Identifiers() const {
  std::set<std::string> names;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::kIdentifier) names.insert(t.text);
  }
  return names;
}

bool IsKeyword(std::string_view word, Language lang) {
  return lang == Language::kC ? CKeywords().contains(word)
                              : JavaKeywords().contains(word);
}

TokenStream Lex(std::string_view source, Language lang) {
  return Lexer(source, lang).Run();
}

}  // namespace metafidelity
