// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#include "texcanon/tokenizer.hpp"

#include <cctype>
#include <sstream>

namespace texcanon {

namespace {

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Length in bytes of the UTF-8 sequence starting at s[i]; 1 for invalid leads.
std::size_t utf8_len(std::string_view s, std::size_t i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  std::size_t n = 1;
  if ((c & 0xE0) == 0xC0) n = 2;
  else if ((c & 0xF0) == 0xE0) n = 3;
  else if ((c & 0xF8) == 0xF0) n = 4;
  if (i + n > s.size()) n = 1;
  for (std::size_t k = 1; k < n; ++k) {
    if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return 1;
  }
  return n;
}

// Drop '%' comments up to end of line. A backslash escapes the next character,
// so '\%' survives as a command.
std::string strip_comments(std::string_view input) {
  std::string out;
  out.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    char c = input[i];
    if (c == '\\') {
      out.push_back(c);
      if (i + 1 < input.size()) {
        out.push_back(input[i + 1]);
        ++i;
      }
      continue;
    }
    if (c == '%') {
      while (i < input.size() && input[i] != '\n') ++i;
      if (i < input.size()) out.push_back('\n');
      continue;
    }
    out.push_back(c);
  }
  return out;
}

[[noreturn]] void fail(TokenizeErrorCode code, std::size_t pos, const std::string& what) {
  std::ostringstream msg;
  msg << what << " at offset " << pos;
  throw TokenizeError(code, pos, msg.str());
}

}  // namespace

TokenKind classify_token(std::string_view text) {
  if (text.size() >= 7 && text.substr(0, 7) == "\\begin{") return TokenKind::EnvBegin;
  if (text.size() >= 5 && text.substr(0, 5) == "\\end{") return TokenKind::EnvEnd;
  if (text == "\\\\") return TokenKind::RowBreak;
  if (!text.empty() && text[0] == '\\') return TokenKind::Command;
  if (text.size() == 1) {
    char c = text[0];
    switch (c) {
      case '{': return TokenKind::GroupOpen;
      case '}': return TokenKind::GroupClose;
      case '_': return TokenKind::Subscript;
      case '^': return TokenKind::Superscript;
      case '&': return TokenKind::AlignTab;
      default: break;
    }
    if (is_ascii_letter(c)) return TokenKind::Letter;
    if (is_ascii_digit(c)) return TokenKind::Digit;
  }
  return TokenKind::Other;
}

std::string env_name(const Token& tok) {
  if (tok.kind == TokenKind::EnvBegin) {
    return std::string(tok.text.substr(7, tok.text.size() - 8));
  }
  if (tok.kind == TokenKind::EnvEnd) {
    return std::string(tok.text.substr(5, tok.text.size() - 6));
  }
  return {};
}

TokenSeq tokenize(std::string_view input, const TokenizerOptions& opts) {
  if (input.size() > opts.max_length) {
    fail(TokenizeErrorCode::InputTooLong, opts.max_length,
         "input exceeds " + std::to_string(opts.max_length) + " characters");
  }
  TokenSeq seq;
  seq.source.assign(input.begin(), input.end());
  const std::string text = strip_comments(input);

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (c == '\\') {
      if (i + 1 >= n) {
        fail(TokenizeErrorCode::UnterminatedCommand, i, "lone '\\' at end of input");
      }
      char next = text[i + 1];
      if (is_ascii_letter(next)) {
        std::size_t j = i + 1;
        while (j < n && is_ascii_letter(text[j])) ++j;
        std::string name = text.substr(i, j - i);
        if (name == "\\begin" || name == "\\end") {
          // Fuse the environment name: \begin {array} -> one token.
          std::size_t k = j;
          while (k < n && is_space(text[k])) ++k;
          if (k >= n || text[k] != '{') {
            fail(TokenizeErrorCode::UnterminatedEnvironmentName, i,
                 name + " without environment name");
          }
          ++k;
          std::string env;
          while (k < n && text[k] != '}') {
            if (!is_space(text[k])) env.push_back(text[k]);
            ++k;
          }
          if (k >= n) {
            fail(TokenizeErrorCode::UnterminatedEnvironmentName, i,
                 name + "{ without closing '}'");
          }
          ++k;  // consume '}'
          seq.tokens.push_back(make_token(name + "{" + env + "}"));
          i = k;
        } else {
          seq.tokens.push_back(make_token(std::move(name)));
          i = j;
        }
      } else {
        // One-character command: \, \! \{ \| \\ \<space> ...
        seq.tokens.push_back(make_token(text.substr(i, 2)));
        i += 2;
      }
      continue;
    }
    std::size_t len = utf8_len(text, i);
    seq.tokens.push_back(make_token(text.substr(i, len)));
    i += len;
  }
  return seq;
}

std::string detokenize(const std::vector<Token>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i].text;
  }
  return out;
}

std::string detokenize(const TokenSeq& seq) { return detokenize(seq.tokens); }

}  // namespace texcanon
