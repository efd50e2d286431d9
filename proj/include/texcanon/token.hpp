// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef TEXCANON_TOKEN_HPP
#define TEXCANON_TOKEN_HPP

#include <string>
#include <string_view>
#include <vector>

namespace texcanon {

// One lexical unit of LaTeX math.
enum class TokenKind {
  Command,      // backslash-initiated control sequence, e.g. \alpha, \, (one char)
  Letter,       // single ASCII letter
  Digit,        // single ASCII digit
  GroupOpen,    // {
  GroupClose,   // }
  Subscript,    // _
  Superscript,  // ^
  AlignTab,     // &
  RowBreak,     // double backslash
  EnvBegin,     // \begin{name}, name fused into the token
  EnvEnd,       // \end{name}
  Other,        // punctuation, operators, non-ASCII code points
};

struct Token {
  std::string text;
  TokenKind kind = TokenKind::Other;

  bool operator==(const Token&) const = default;
};

// Classify a single token surface string. EnvBegin/EnvEnd and RowBreak are
// recognized by shape; everything else follows the one-character rules.
TokenKind classify_token(std::string_view text);

inline Token make_token(std::string text) {
  TokenKind k = classify_token(text);
  return Token{std::move(text), k};
}

struct TokenSeq {
  std::vector<Token> tokens;
  std::string source;

  bool operator==(const TokenSeq& other) const { return tokens == other.tokens; }

  std::vector<std::string> texts() const {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const Token& t : tokens) out.push_back(t.text);
    return out;
  }
};

// Environment name carried by an EnvBegin/EnvEnd token ("array" for
// "\begin{array}"), or empty if the token is not an environment marker.
std::string env_name(const Token& tok);

}  // namespace texcanon

#endif  // TEXCANON_TOKEN_HPP
