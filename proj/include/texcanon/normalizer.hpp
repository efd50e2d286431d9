// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef TEXCANON_NORMALIZER_HPP
#define TEXCANON_NORMALIZER_HPP

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "texcanon/norm_config.hpp"
#include "texcanon/token.hpp"

namespace texcanon {

enum class RejectReason {
  ForbiddenToken,
  SparseArray,
  EmptyAfterNormalization,
  ParseError,
};

std::string to_string(RejectReason reason);

struct Rejection {
  RejectReason reason = RejectReason::ParseError;
  // Offending token for ForbiddenToken, diagnostic message otherwise.
  std::string detail;

  bool operator==(const Rejection&) const = default;
};

struct NormOutcome {
  std::vector<Token> tokens;
  std::optional<Rejection> rejection;

  bool accepted() const { return !rejection.has_value(); }
  std::string canonical() const;
};

// Canonicalize one math-mode fragment. Applies, in order: forbidden-token
// rejection, font unwrapping, whitespace removal, synonym mapping, array
// handling, script merging, then serialization under brace discipline in
// cfg.mode. Accepted outputs are fixed points of this function.
NormOutcome normalize(std::string_view input, const NormConfig& cfg);

// One structural pass serialized both ways. GT carries the canonical token
// sequence; rendering keeps \left/\right and the original column indicators.
// Emptiness is judged on the GT serialization.
struct DualOutcome {
  std::vector<Token> gt;
  std::vector<Token> rendering;
  std::optional<Rejection> rejection;

  bool accepted() const { return !rejection.has_value(); }
};
DualOutcome normalize_dual(std::string_view input, const NormConfig& cfg);

struct VocabStats {
  std::size_t vocab_before = 0;
  std::size_t vocab_after = 0;
  std::set<std::string> removed_tokens;
  std::size_t rejected_count = 0;
};

// Distinct-token census over a corpus: vocabulary of the raw tokenized lines
// vs vocabulary of the accepted canonical outputs. Rejections are counted,
// never raised.
VocabStats vocab_stats(const std::vector<std::string>& corpus, const NormConfig& cfg);

}  // namespace texcanon

#endif  // TEXCANON_NORMALIZER_HPP
