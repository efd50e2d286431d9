// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#include "texcanon/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace texcanon {

namespace {

using Seq = std::vector<std::string>;

// Clipped n-gram matches and candidate n-gram total for one pair.
void ngram_counts(const Seq& gt, const Seq& pre, std::size_t n, std::int64_t* clipped,
                  std::int64_t* total) {
  *clipped = 0;
  *total = 0;
  if (pre.size() < n) return;
  std::map<std::vector<std::string>, std::int64_t> gt_grams, pre_grams;
  if (gt.size() >= n) {
    for (std::size_t i = 0; i + n <= gt.size(); ++i) {
      ++gt_grams[std::vector<std::string>(gt.begin() + i, gt.begin() + i + n)];
    }
  }
  for (std::size_t i = 0; i + n <= pre.size(); ++i) {
    ++pre_grams[std::vector<std::string>(pre.begin() + i, pre.begin() + i + n)];
  }
  for (const auto& [gram, count] : pre_grams) {
    *total += count;
    auto it = gt_grams.find(gram);
    if (it != gt_grams.end()) *clipped += std::min(count, it->second);
  }
}

struct PairStats {
  double edit = 0.0;
  bool em = false;
  std::size_t dist = 0;
  std::array<std::int64_t, 4> clipped{};
  std::array<std::int64_t, 4> total{};
  std::size_t gt_len = 0;
  std::size_t pre_len = 0;
};

PairStats eval_pair(const PairInput& p) {
  PairStats s;
  s.dist = levenshtein(p.gt, p.pre).distance;
  s.em = (p.gt == p.pre);
  s.gt_len = p.gt.size();
  s.pre_len = p.pre.size();
  std::size_t max_len = std::max(s.gt_len, s.pre_len);
  s.edit = max_len == 0 ? 100.0 : (1.0 - double(s.dist) / double(max_len)) * 100.0;
  std::size_t max_n = std::min<std::size_t>(4, p.pre.size());
  for (std::size_t n = 1; n <= max_n; ++n) {
    ngram_counts(p.gt, p.pre, n, &s.clipped[n - 1], &s.total[n - 1]);
  }
  return s;
}

CorpusScores aggregate(const std::vector<PairStats>& stats, const std::vector<std::size_t>& idx) {
  CorpusScores out;
  out.pair_count = idx.size();
  double edit_sum = 0.0;
  std::size_t em_count = 0;
  std::array<std::int64_t, 4> clipped{}, total{};
  std::size_t gt_len = 0, pre_len = 0;
  for (std::size_t i : idx) {
    const PairStats& s = stats[i];
    edit_sum += s.edit;
    if (s.em) ++em_count;
    out.summed_errors += s.dist;
    for (int n = 0; n < 4; ++n) {
      clipped[n] += s.clipped[n];
      total[n] += s.total[n];
    }
    gt_len += s.gt_len;
    pre_len += s.pre_len;
  }
  out.edit_score = edit_sum / double(idx.size());
  out.exact_match = 100.0 * double(em_count) / double(idx.size());

  // Corpus Bleu: aggregate counts; n-gram orders with no candidates at all
  // (every prediction shorter than n) are skipped rather than zeroing the
  // geometric mean.
  double log_sum = 0.0;
  int included = 0;
  bool zero_precision = false;
  for (int n = 0; n < 4; ++n) {
    if (total[n] == 0) continue;
    if (clipped[n] == 0) {
      zero_precision = true;
      break;
    }
    log_sum += std::log(double(clipped[n]) / double(total[n]));
    ++included;
  }
  if (zero_precision || included == 0 || pre_len == 0) {
    out.bleu4 = 0.0;
  } else {
    double bp = pre_len < gt_len ? std::exp(1.0 - double(gt_len) / double(pre_len)) : 1.0;
    out.bleu4 = std::exp(log_sum / double(included)) * bp * 100.0;
  }
  return out;
}

template <typename K>
std::vector<std::pair<K, int>> top_k(const std::map<K, int>& counts, std::size_t k) {
  std::vector<std::pair<K, int>> v(counts.begin(), counts.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (v.size() > k) v.resize(k);
  return v;
}

}  // namespace

std::size_t EditOps::op_count() const {
  std::size_t n = 0;
  for (const auto& [t, c] : inserts) n += std::size_t(c);
  for (const auto& [t, c] : deletes) n += std::size_t(c);
  for (const auto& [p, c] : replaces) n += std::size_t(c);
  return n;
}

EditOps levenshtein(const std::vector<std::string>& gt, const std::vector<std::string>& pre) {
  const std::size_t n = gt.size(), m = pre.size();
  // dp[i][j]: distance between gt[0..i) and pre[0..j).
  std::vector<std::vector<std::uint32_t>> dp(n + 1, std::vector<std::uint32_t>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) dp[i][0] = std::uint32_t(i);
  for (std::size_t j = 0; j <= m; ++j) dp[0][j] = std::uint32_t(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::uint32_t diag = dp[i - 1][j - 1] + (gt[i - 1] == pre[j - 1] ? 0 : 1);
      std::uint32_t del = dp[i][j - 1] + 1;   // drop a prediction token
      std::uint32_t ins = dp[i - 1][j] + 1;   // add a missing ground-truth token
      dp[i][j] = std::min({diag, del, ins});
    }
  }

  EditOps ops;
  ops.distance = dp[n][m];
  // Deterministic backtrace: ties resolve match > replace > delete > insert.
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && gt[i - 1] == pre[j - 1] && dp[i][j] == dp[i - 1][j - 1]) {
      --i;
      --j;
    } else if (i > 0 && j > 0 && dp[i][j] == dp[i - 1][j - 1] + 1) {
      ++ops.replaces[{gt[i - 1], pre[j - 1]}];
      --i;
      --j;
    } else if (j > 0 && dp[i][j] == dp[i][j - 1] + 1) {
      ++ops.deletes[pre[j - 1]];
      --j;
    } else {
      ++ops.inserts[gt[i - 1]];
      --i;
    }
  }
  return ops;
}

double edit_score(const std::vector<std::string>& gt, const std::vector<std::string>& pre,
                  bool* both_empty) {
  if (both_empty) *both_empty = gt.empty() && pre.empty();
  if (gt.empty() && pre.empty()) return 100.0;
  std::size_t dist = levenshtein(gt, pre).distance;
  std::size_t max_len = std::max(gt.size(), pre.size());
  return (1.0 - double(dist) / double(max_len)) * 100.0;
}

double bleu4(const std::vector<std::string>& gt, const std::vector<std::string>& pre) {
  if (pre.empty()) return 0.0;
  std::size_t max_n = std::min<std::size_t>(4, pre.size());
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    std::int64_t clipped = 0, total = 0;
    ngram_counts(gt, pre, n, &clipped, &total);
    if (clipped == 0) return 0.0;
    log_sum += std::log(double(clipped) / double(total));
  }
  double bp = pre.size() < gt.size() ? std::exp(1.0 - double(gt.size()) / double(pre.size())) : 1.0;
  return std::exp(log_sum / double(max_n)) * bp * 100.0;
}

bool exact_match(const std::vector<std::string>& gt, const std::vector<std::string>& pre) {
  return gt == pre;
}

NamedFilter array_filter() {
  return {"A", "nA", [](const PairInput& p) {
            return std::find(p.gt.begin(), p.gt.end(), "\\begin{array}") != p.gt.end();
          }};
}

NamedFilter math_font_filter(const NormConfig& cfg) {
  std::set<std::string> fonts = cfg.math_font_commands;
  return {"MF", "nMF", [fonts = std::move(fonts)](const PairInput& p) {
            for (const std::string& t : p.gt) {
              if (fonts.count(t)) return true;
            }
            return false;
          }};
}

NamedFilter multiline_filter() {
  return {"M", "S", [](const PairInput& p) { return p.multiline; }};
}

ScoreReport corpus_score(const std::vector<PairInput>& pairs,
                         const std::vector<NamedFilter>& filters) {
  if (pairs.empty()) {
    throw MetricsError(MetricsError::Code::EmptyCorpus, "corpus scoring needs at least one pair");
  }
  std::vector<PairStats> stats;
  stats.reserve(pairs.size());
  for (const PairInput& p : pairs) stats.push_back(eval_pair(p));

  std::vector<std::size_t> all(pairs.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  ScoreReport report;
  report.overall = aggregate(stats, all);
  for (const NamedFilter& f : filters) {
    std::vector<std::size_t> in, out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      (f.pred(pairs[i]) ? in : out).push_back(i);
    }
    if (!in.empty()) report.breakdowns[f.in_name] = aggregate(stats, in);
    if (!out.empty()) report.breakdowns[f.out_name] = aggregate(stats, out);
  }
  return report;
}

OpAnalysis op_analysis(const std::vector<PairInput>& pairs, std::size_t k) {
  if (pairs.empty()) {
    throw MetricsError(MetricsError::Code::EmptyCorpus, "operation analysis needs at least one pair");
  }
  std::map<std::string, int> inserts, deletes;
  std::map<std::pair<std::string, std::string>, int> replaces;
  OpAnalysis out;
  for (const PairInput& p : pairs) {
    EditOps ops = levenshtein(p.gt, p.pre);
    for (const auto& [t, c] : ops.inserts) {
      inserts[t] += c;
      out.total_inserts += std::size_t(c);
    }
    for (const auto& [t, c] : ops.deletes) {
      deletes[t] += c;
      out.total_deletes += std::size_t(c);
    }
    for (const auto& [pr, c] : ops.replaces) {
      replaces[pr] += c;
      out.total_replaces += std::size_t(c);
    }
  }
  out.top_inserts = top_k(inserts, k);
  out.top_deletes = top_k(deletes, k);
  out.top_replaces = top_k(replaces, k);
  return out;
}

}  // namespace texcanon
