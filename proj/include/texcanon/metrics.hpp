// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef TEXCANON_METRICS_HPP
#define TEXCANON_METRICS_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "texcanon/norm_config.hpp"

namespace texcanon {

class MetricsError : public std::runtime_error {
 public:
  enum class Code { EmptyCorpus };

  MetricsError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Edit operations transform the PREDICTION into the GROUND TRUTH:
// an insert is a token the prediction is missing, a delete is a spurious
// prediction token, a replace pairs (ground-truth token, predicted token).
struct EditOps {
  std::size_t distance = 0;
  std::map<std::string, int> inserts;
  std::map<std::string, int> deletes;
  std::map<std::pair<std::string, std::string>, int> replaces;

  std::size_t op_count() const;
};

// Unit-cost Levenshtein distance with a deterministic backtrace: walking from
// the sequence ends, ties resolve match > replace > delete > insert, so the
// reported operation multisets are reproducible.
EditOps levenshtein(const std::vector<std::string>& gt, const std::vector<std::string>& pre);

// (1 - distance / max(len)) * 100. Both sides empty is scored 100 (trivial
// perfect match); when `both_empty` is non-null it is set so callers can warn.
double edit_score(const std::vector<std::string>& gt, const std::vector<std::string>& pre,
                  bool* both_empty = nullptr);

// Geometric mean of clipped n-gram precisions for n = 1..min(4, len(pre)),
// no smoothing (any zero precision zeroes the score), brevity penalty
// exp(1 - len(gt)/len(pre)) when the prediction is shorter. Empty
// prediction scores 0.
double bleu4(const std::vector<std::string>& gt, const std::vector<std::string>& pre);

bool exact_match(const std::vector<std::string>& gt, const std::vector<std::string>& pre);

struct PairInput {
  std::vector<std::string> gt;
  std::vector<std::string> pre;
  bool multiline = false;  // caller-supplied flag, drives the M/S breakdown
};

struct CorpusScores {
  std::size_t pair_count = 0;
  double edit_score = 0.0;    // unweighted mean of per-pair scores
  double bleu4 = 0.0;         // corpus-level (aggregated n-gram counts)
  double exact_match = 0.0;   // percentage of exactly matching pairs
  std::size_t summed_errors = 0;  // sum of Levenshtein distances
};

struct ScoreReport {
  CorpusScores overall;
  // Sub-reports come in complementary pairs, e.g. "A"/"nA" for pairs whose
  // ground truth does / does not contain an array environment.
  std::map<std::string, CorpusScores> breakdowns;
};

// A corpus filter splits pairs into a matching sub-report and its complement.
struct NamedFilter {
  std::string in_name;
  std::string out_name;
  std::function<bool(const PairInput&)> pred;
};

NamedFilter array_filter();                              // "A" / "nA"
NamedFilter math_font_filter(const NormConfig& cfg);     // "MF" / "nMF"
NamedFilter multiline_filter();                          // "M" / "S"

// Scores a corpus; sub-reports cover only filters whose side is non-empty.
// Throws MetricsError(EmptyCorpus) on an empty pair list.
ScoreReport corpus_score(const std::vector<PairInput>& pairs,
                         const std::vector<NamedFilter>& filters = {});

struct OpAnalysis {
  std::vector<std::pair<std::string, int>> top_inserts;
  std::vector<std::pair<std::string, int>> top_deletes;
  std::vector<std::pair<std::pair<std::string, std::string>, int>> top_replaces;
  std::size_t total_inserts = 0;
  std::size_t total_deletes = 0;
  std::size_t total_replaces = 0;

  std::size_t total_ops() const { return total_inserts + total_deletes + total_replaces; }
};

// Aggregates edit operations over the corpus and ranks the top-k entries of
// each table (count descending, ties lexicographic). Throws
// MetricsError(EmptyCorpus) on an empty pair list.
OpAnalysis op_analysis(const std::vector<PairInput>& pairs, std::size_t k);

}  // namespace texcanon

#endif  // TEXCANON_METRICS_HPP
