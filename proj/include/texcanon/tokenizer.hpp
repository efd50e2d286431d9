// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef TEXCANON_TOKENIZER_HPP
#define TEXCANON_TOKENIZER_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "texcanon/token.hpp"

namespace texcanon {

enum class TokenizeErrorCode {
  UnterminatedCommand,          // trailing lone backslash
  UnterminatedEnvironmentName,  // \begin{ without closing }
  InputTooLong,                 // input exceeds the configured cap
};

class TokenizeError : public std::runtime_error {
 public:
  TokenizeError(TokenizeErrorCode code, std::size_t position, const std::string& message)
      : std::runtime_error(message), code_(code), position_(position) {}

  TokenizeErrorCode code() const { return code_; }
  std::size_t position() const { return position_; }

 private:
  TokenizeErrorCode code_;
  std::size_t position_;
};

struct TokenizerOptions {
  std::size_t max_length = 20000;
};

// Lex a math-mode LaTeX fragment into tokens. Control sequences are maximal
// alphabetic runs after '\'; a backslash followed by a single non-letter is a
// one-character command. '\begin{name}' and '\end{name}' fuse the environment
// name into one token. Comments ('%' to end of line) are stripped first.
// Whitespace separates tokens and is discarded; whitespace *commands* such as
// '\quad' are kept. Non-ASCII code points become single Other tokens.
TokenSeq tokenize(std::string_view input, const TokenizerOptions& opts = {});

// Join tokens into a string that re-tokenizes to the identical token list.
// Tokens are separated by single spaces.
std::string detokenize(const TokenSeq& seq);
std::string detokenize(const std::vector<Token>& tokens);

}  // namespace texcanon

#endif  // TEXCANON_TOKENIZER_HPP
