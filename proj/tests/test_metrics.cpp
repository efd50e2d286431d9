// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "texcanon/metrics.hpp"

using namespace texcanon;

using Seq = std::vector<std::string>;

// ---------------------------------------------------------------------------
// Independent oracles, written before the production code and deliberately
// naive: plain recursion over edit scripts, no dynamic programming.
// ---------------------------------------------------------------------------

namespace {

// Can PRE transform into GT within `budget` unit-cost operations?
bool within_budget(const Seq& gt, std::size_t gi, const Seq& pre, std::size_t pi, int budget) {
  while (gi < gt.size() && pi < pre.size() && gt[gi] == pre[pi]) {
    ++gi;
    ++pi;
  }
  std::size_t grem = gt.size() - gi;
  std::size_t prem = pre.size() - pi;
  std::size_t diff = grem > prem ? grem - prem : prem - grem;
  if (static_cast<int>(diff) > budget) return false;  // each op shifts lengths by ≤ 1
  if (grem == 0) return static_cast<int>(prem) <= budget;
  if (prem == 0) return static_cast<int>(grem) <= budget;
  if (budget == 0) return false;
  return within_budget(gt, gi + 1, pre, pi + 1, budget - 1)   // replace
         || within_budget(gt, gi, pre, pi + 1, budget - 1)    // delete from PRE
         || within_budget(gt, gi + 1, pre, pi, budget - 1);   // insert missing GT token
}

// Iterative deepening: the smallest budget that suffices is the distance.
int brute_distance(const Seq& gt, const Seq& pre) {
  for (int d = 0;; ++d) {
    if (within_budget(gt, 0, pre, 0, d)) return d;
  }
}

using OpMultiset = std::vector<std::string>;  // sorted op labels

// Enumerate every edit script of length ≤ budget; record the op multisets of
// those that finish with the budget fully spent (i.e. the optimal scripts
// when budget == distance).
void collect_scripts(const Seq& gt, std::size_t gi, const Seq& pre, std::size_t pi, int budget,
                     OpMultiset& ops, std::set<OpMultiset>& out) {
  if (gi == gt.size() && pi == pre.size()) {
    if (budget == 0) {
      OpMultiset sorted = ops;
      std::sort(sorted.begin(), sorted.end());
      out.insert(std::move(sorted));
    }
    return;
  }
  if (gi < gt.size() && pi < pre.size() && gt[gi] == pre[pi]) {
    collect_scripts(gt, gi + 1, pre, pi + 1, budget, ops, out);
  }
  if (budget == 0) return;
  if (gi < gt.size() && pi < pre.size() && gt[gi] != pre[pi]) {
    ops.push_back("R:" + gt[gi] + "<-" + pre[pi]);
    collect_scripts(gt, gi + 1, pre, pi + 1, budget - 1, ops, out);
    ops.pop_back();
  }
  if (pi < pre.size()) {
    ops.push_back("D:" + pre[pi]);
    collect_scripts(gt, gi, pre, pi + 1, budget - 1, ops, out);
    ops.pop_back();
  }
  if (gi < gt.size()) {
    ops.push_back("I:" + gt[gi]);
    collect_scripts(gt, gi + 1, pre, pi, budget - 1, ops, out);
    ops.pop_back();
  }
}

std::set<OpMultiset> all_optimal_multisets(const Seq& gt, const Seq& pre) {
  std::set<OpMultiset> out;
  OpMultiset ops;
  collect_scripts(gt, 0, pre, 0, brute_distance(gt, pre), ops, out);
  return out;
}

OpMultiset multiset_of(const EditOps& ops) {
  OpMultiset v;
  for (const auto& [t, c] : ops.inserts) {
    for (int i = 0; i < c; ++i) v.push_back("I:" + t);
  }
  for (const auto& [t, c] : ops.deletes) {
    for (int i = 0; i < c; ++i) v.push_back("D:" + t);
  }
  for (const auto& [p, c] : ops.replaces) {
    for (int i = 0; i < c; ++i) v.push_back("R:" + p.first + "<-" + p.second);
  }
  std::sort(v.begin(), v.end());
  return v;
}

Seq random_seq(std::mt19937& rng, std::size_t max_len, std::size_t vocab) {
  Seq s;
  std::size_t len = rng() % (max_len + 1);
  for (std::size_t i = 0; i < len; ++i) s.push_back(std::string(1, char('a' + rng() % vocab)));
  return s;
}

}  // namespace

TEST_CASE("the oracle itself is sane on hand-checked cases") {
  CHECK(brute_distance({}, {}) == 0);
  CHECK(brute_distance({"a"}, {}) == 1);
  CHECK(brute_distance({}, {"a"}) == 1);
  CHECK(brute_distance({"a", "b", "c"}, {"a", "x", "c"}) == 1);
  CHECK(brute_distance({"a", "b"}, {"b", "a"}) == 2);
  CHECK(brute_distance({"k", "i", "t", "t", "e", "n"}, {"s", "i", "t", "t", "i", "n", "g"}) == 3);
  std::set<OpMultiset> opt = all_optimal_multisets({"a", "b", "c"}, {"a", "x", "c"});
  CHECK(opt == std::set<OpMultiset>{{"R:b<-x"}});
}

// ---------------------------------------------------------------------------
// Distance and operation extraction
// ---------------------------------------------------------------------------

TEST_CASE("equal sequences have distance zero and no operations") {
  Seq s{"a", "_", "{", "3", "}"};
  EditOps ops = levenshtein(s, s);
  CHECK(ops.distance == 0);
  CHECK(ops.op_count() == 0);
  CHECK(levenshtein({}, {}).distance == 0);
}

TEST_CASE("a single substitution is reported as one replace pair") {
  EditOps ops = levenshtein({"a", "b", "c"}, {"a", "x", "c"});
  CHECK(ops.distance == 1);
  CHECK(ops.inserts.empty());
  CHECK(ops.deletes.empty());
  REQUIRE(ops.replaces.size() == 1);
  // Pairs are keyed (ground-truth token, predicted token).
  CHECK(ops.replaces.at({"b", "x"}) == 1);
}

TEST_CASE("operations transform the prediction into the ground truth") {
  // The prediction is missing '}': one insert.
  EditOps missing = levenshtein({"a", "_", "{", "3", "}"}, {"a", "_", "{", "3"});
  CHECK(missing.distance == 1);
  CHECK(missing.inserts.at("}") == 1);
  // The prediction has a spurious token: one delete.
  EditOps spurious = levenshtein({"a", "b"}, {"a", "q", "b"});
  CHECK(spurious.distance == 1);
  CHECK(spurious.deletes.at("q") == 1);
}

TEST_CASE("the backtrace tie rule is deterministic") {
  // Swapping two tokens admits several optimal scripts; the documented rule
  // (match > replace > delete > insert, walking from the ends) picks the
  // double replace.
  EditOps ops = levenshtein({"a", "b"}, {"b", "a"});
  CHECK(ops.distance == 2);
  CHECK(ops.inserts.empty());
  CHECK(ops.deletes.empty());
  CHECK(ops.replaces.at({"a", "b"}) == 1);
  CHECK(ops.replaces.at({"b", "a"}) == 1);
  // Matches win over replaces: only the unmatched head token is inserted.
  EditOps head = levenshtein({"x", "a"}, {"a"});
  CHECK(head.distance == 1);
  CHECK(head.inserts.at("x") == 1);
}

TEST_CASE("distance matches the brute-force oracle on random pairs") {
  std::mt19937 rng(20260815);
  for (int iter = 0; iter < 400; ++iter) {
    Seq gt = random_seq(rng, 12, 5);
    Seq pre = random_seq(rng, 12, 5);
    CAPTURE(iter);
    EditOps ops = levenshtein(gt, pre);
    CHECK(static_cast<int>(ops.distance) == brute_distance(gt, pre));
    CHECK(ops.op_count() == ops.distance);
    CHECK(ops.distance <= std::max(gt.size(), pre.size()));
    CHECK((ops.distance == 0) == (gt == pre));
  }
}

TEST_CASE("the reported operations form one optimal script") {
  std::mt19937 rng(424242);
  for (int iter = 0; iter < 200; ++iter) {
    Seq gt = random_seq(rng, 6, 3);
    Seq pre = random_seq(rng, 6, 3);
    CAPTURE(iter);
    EditOps ops = levenshtein(gt, pre);
    std::set<OpMultiset> optimal = all_optimal_multisets(gt, pre);
    CHECK(optimal.count(multiset_of(ops)) == 1);
  }
}

TEST_CASE("distance is symmetric and satisfies the triangle inequality") {
  std::mt19937 rng(7);
  for (int iter = 0; iter < 300; ++iter) {
    Seq a = random_seq(rng, 10, 4);
    Seq b = random_seq(rng, 10, 4);
    Seq c = random_seq(rng, 10, 4);
    std::size_t ab = levenshtein(a, b).distance;
    std::size_t ba = levenshtein(b, a).distance;
    std::size_t bc = levenshtein(b, c).distance;
    std::size_t ac = levenshtein(a, c).distance;
    CHECK(ab == ba);
    CHECK(ac <= ab + bc);
  }
}

// ---------------------------------------------------------------------------
// Edit score
// ---------------------------------------------------------------------------

TEST_CASE("edit score follows the published formula") {
  // One error in 27 tokens vs the same error in the 45-token fully braced
  // rendering of the same content.
  Seq gt27, gt45;
  for (int i = 0; i < 9; ++i) {
    std::string letter(1, char('a' + i));
    std::string digit(1, char('1' + i));
    gt27.insert(gt27.end(), {letter, "_", digit});
    gt45.insert(gt45.end(), {letter, "_", "{", digit, "}"});
  }
  REQUIRE(gt27.size() == 27);
  REQUIRE(gt45.size() == 45);
  Seq pre27 = gt27;
  pre27[0] = "q";
  Seq pre45 = gt45;
  pre45[0] = "q";

  double s27 = edit_score(gt27, pre27);
  double s45 = edit_score(gt45, pre45);
  CHECK(s27 == doctest::Approx(100.0 * 26.0 / 27.0));
  CHECK(s45 == doctest::Approx(100.0 * 44.0 / 45.0));
  CHECK(std::round(s27 * 10) / 10 == doctest::Approx(96.3));
  CHECK(std::round(s45 * 10) / 10 == doctest::Approx(97.8));
  // The same single error shrinks the error rate by 40% when the denominator
  // grows from 27 to 45 — redundant braces inflate the score.
  double reduction = ((100.0 - s27) - (100.0 - s45)) / (100.0 - s27);
  CHECK(reduction == doctest::Approx(0.4));
}

TEST_CASE("edit score edge cases") {
  CHECK(edit_score({"a"}, {"a"}) == doctest::Approx(100.0));
  CHECK(edit_score({"a", "b"}, {}) == doctest::Approx(0.0));
  bool both_empty = false;
  CHECK(edit_score({}, {}, &both_empty) == doctest::Approx(100.0));
  CHECK(both_empty);
  edit_score({"a"}, {}, &both_empty);
  CHECK(!both_empty);
}

TEST_CASE("edit score stays within its bounds on random pairs") {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 300; ++iter) {
    Seq gt = random_seq(rng, 10, 3);
    Seq pre = random_seq(rng, 10, 3);
    double s = edit_score(gt, pre);
    CHECK(s >= 0.0);
    CHECK(s <= 100.0);
    CHECK(edit_score(gt, gt) == doctest::Approx(100.0));
  }
}

// ---------------------------------------------------------------------------
// Bleu-4
// ---------------------------------------------------------------------------

TEST_CASE("identical sequences score 100") {
  CHECK(bleu4({"a", "b", "c", "d", "e"}, {"a", "b", "c", "d", "e"}) == doctest::Approx(100.0));
  // Short sequences cap n at the prediction length.
  CHECK(bleu4({"a", "b"}, {"a", "b"}) == doctest::Approx(100.0));
  CHECK(bleu4({"a"}, {"a"}) == doctest::Approx(100.0));
}

TEST_CASE("hand-enumerated n-gram precisions") {
  // gt = a b c d, pre = a b c x:
  //   p1 = 3/4 (a, b, c match), p2 = 2/3 (ab, bc), p3 = 1/2 (abc), p4 = 0/1.
  // No smoothing: a zero precision zeroes the whole score.
  CHECK(bleu4({"a", "b", "c", "d"}, {"a", "b", "c", "x"}) == doctest::Approx(0.0));
  // Same n-grams without the zero: gt = a b c d, pre = a b c. p1 = p2 = p3 = 1,
  // brevity penalty exp(1 - 4/3).
  CHECK(bleu4({"a", "b", "c", "d"}, {"a", "b", "c"}) ==
        doctest::Approx(100.0 * std::exp(1.0 - 4.0 / 3.0)));
  // Clipping: a repeated prediction token only counts as often as it appears
  // in the ground truth. gt = a b, pre = a a: p1 = 1/2, p2 = 0 ⇒ 0.
  CHECK(bleu4({"a", "b"}, {"a", "a"}) == doctest::Approx(0.0));
  // gt = a a b, pre = a a: p1 = 2/2, p2 = 1/1, BP = exp(1 - 3/2).
  CHECK(bleu4({"a", "a", "b"}, {"a", "a"}) == doctest::Approx(100.0 * std::exp(1.0 - 1.5)));
}

TEST_CASE("empty and longer predictions") {
  CHECK(bleu4({"a", "b"}, {}) == doctest::Approx(0.0));
  CHECK(bleu4({}, {"a"}) == doctest::Approx(0.0));  // nothing matches
  // No brevity penalty when the prediction is longer.
  double longer = bleu4({"a", "b", "c", "d"}, {"a", "b", "c", "d", "d"});
  double exact = 100.0 * std::pow((4.0 / 5.0) * (3.0 / 4.0) * (2.0 / 3.0) * (1.0 / 2.0), 0.25);
  CHECK(longer == doctest::Approx(exact));
}

// ---------------------------------------------------------------------------
// Exact match
// ---------------------------------------------------------------------------

TEST_CASE("exact match is token-list equality") {
  CHECK(exact_match({"a", "b"}, {"a", "b"}));
  CHECK(!exact_match({"a", "b"}, {"a", "c"}));
  CHECK(exact_match({}, {}));
}

TEST_CASE("metric implications hold on every random pair") {
  std::mt19937 rng(314159);
  for (int iter = 0; iter < 400; ++iter) {
    Seq gt = random_seq(rng, 8, 3);
    Seq pre = random_seq(rng, 8, 3);
    bool em = exact_match(gt, pre);
    double edit = edit_score(gt, pre);
    CAPTURE(iter);
    if (em) {
      CHECK(edit == doctest::Approx(100.0));
      if (!gt.empty()) CHECK(bleu4(gt, pre) == doctest::Approx(100.0));
    }
    if (edit == doctest::Approx(100.0)) CHECK(em);
  }
}

// ---------------------------------------------------------------------------
// Corpus scoring
// ---------------------------------------------------------------------------

TEST_CASE("corpus edit score is the unweighted mean of pair scores") {
  std::vector<PairInput> pairs{
      {{"a"}, {"a"}, false},  // edit 100
      {{"b"}, {"c"}, false},  // edit 0
  };
  ScoreReport r = corpus_score(pairs);
  CHECK(r.overall.pair_count == 2);
  CHECK(r.overall.edit_score == doctest::Approx(50.0));
  CHECK(r.overall.exact_match == doctest::Approx(50.0));
  CHECK(r.overall.summed_errors == 1);
}

TEST_CASE("an all-exact corpus is perfect") {
  std::vector<PairInput> pairs{
      {{"a", "b", "c", "d"}, {"a", "b", "c", "d"}, false},
      {{"x", "y", "z", "w"}, {"x", "y", "z", "w"}, false},
  };
  ScoreReport r = corpus_score(pairs);
  CHECK(r.overall.exact_match == doctest::Approx(100.0));
  CHECK(r.overall.edit_score == doctest::Approx(100.0));
  CHECK(r.overall.bleu4 == doctest::Approx(100.0));
  CHECK(r.overall.summed_errors == 0);
}

TEST_CASE("corpus bleu aggregates n-gram counts before the geometric mean") {
  // Pair 1 is perfect (a b c d). Pair 2 ends with one error (a b c x).
  // Pooled counts: p1 = 7/8, p2 = 5/6, p3 = 3/4, p4 = 1/2; lengths equal, BP 1.
  std::vector<PairInput> pairs{
      {{"a", "b", "c", "d"}, {"a", "b", "c", "d"}, false},
      {{"a", "b", "c", "d"}, {"a", "b", "c", "x"}, false},
  };
  double expected =
      100.0 * std::pow((7.0 / 8.0) * (5.0 / 6.0) * (3.0 / 4.0) * (1.0 / 2.0), 0.25);
  ScoreReport r = corpus_score(pairs);
  CHECK(r.overall.bleu4 == doctest::Approx(expected));
}

TEST_CASE("n-gram orders with no candidates anywhere are skipped") {
  // Every prediction is shorter than 4 tokens, so no 4-gram exists; the
  // remaining orders are all perfect.
  std::vector<PairInput> pairs{{{"a", "b", "c"}, {"a", "b", "c"}, false}};
  ScoreReport r = corpus_score(pairs);
  CHECK(r.overall.bleu4 == doctest::Approx(100.0));
}

TEST_CASE("corpus brevity penalty uses pooled lengths") {
  // Pooled: len(pre) = 2, len(gt) = 4, precisions perfect.
  std::vector<PairInput> pairs{{{"a", "b", "c", "d"}, {"a", "b"}, false}};
  ScoreReport r = corpus_score(pairs);
  CHECK(r.overall.bleu4 == doctest::Approx(100.0 * std::exp(1.0 - 2.0)));
}

TEST_CASE("array breakdown isolates grid-bearing pairs") {
  // Two array pairs hold every error; the other eight are perfect.
  std::vector<PairInput> pairs;
  for (int i = 0; i < 8; ++i) {
    pairs.push_back({{"x", "+", "y"}, {"x", "+", "y"}, false});
  }
  pairs.push_back({{"\\begin{array}", "{", "c", "}", "a", "\\end{array}"},
                   {"\\begin{array}", "{", "c", "}", "b", "\\end{array}"},
                   false});
  pairs.push_back({{"\\begin{array}", "{", "c", "}", "u", "\\end{array}"},
                   {"q", "\\begin{array}", "{", "c", "}", "u", "\\end{array}"},
                   false});
  ScoreReport r = corpus_score(pairs, {array_filter()});
  REQUIRE(r.breakdowns.count("A") == 1);
  REQUIRE(r.breakdowns.count("nA") == 1);
  CHECK(r.breakdowns.at("nA").pair_count == 8);
  CHECK(r.breakdowns.at("nA").edit_score == doctest::Approx(100.0));
  CHECK(r.breakdowns.at("nA").summed_errors == 0);
  CHECK(r.breakdowns.at("A").pair_count == 2);
  CHECK(r.breakdowns.at("A").summed_errors == 2);
  CHECK(r.overall.summed_errors == 2);
}

TEST_CASE("math font and multiline breakdowns") {
  NormConfig cfg = NormConfig::defaults();
  std::vector<PairInput> pairs{
      {{"\\mathbf", "x"}, {"\\mathbf", "x"}, false},
      {{"y"}, {"z"}, true},
  };
  ScoreReport r = corpus_score(pairs, {math_font_filter(cfg), multiline_filter()});
  CHECK(r.breakdowns.at("MF").pair_count == 1);
  CHECK(r.breakdowns.at("nMF").pair_count == 1);
  CHECK(r.breakdowns.at("M").pair_count == 1);
  CHECK(r.breakdowns.at("M").edit_score == doctest::Approx(0.0));
  CHECK(r.breakdowns.at("S").pair_count == 1);
  CHECK(r.breakdowns.at("S").edit_score == doctest::Approx(100.0));
}

TEST_CASE("one-sided filters only produce the non-empty sub-report") {
  std::vector<PairInput> pairs{{{"a"}, {"a"}, false}};
  ScoreReport r = corpus_score(pairs, {multiline_filter()});
  CHECK(r.breakdowns.count("S") == 1);
  CHECK(r.breakdowns.count("M") == 0);
}

TEST_CASE("empty corpora are typed errors") {
  CHECK_THROWS_AS(corpus_score({}), MetricsError);
  CHECK_THROWS_AS(op_analysis({}, 5), MetricsError);
  try {
    corpus_score({});
  } catch (const MetricsError& e) {
    CHECK(e.code() == MetricsError::Code::EmptyCorpus);
  }
}

// ---------------------------------------------------------------------------
// Operation analysis
// ---------------------------------------------------------------------------

TEST_CASE("a systematic missing brace shows up as inserts") {
  std::vector<PairInput> pairs;
  for (int i = 0; i < 4; ++i) {
    pairs.push_back({{"a", "_", "{", "3", "}"}, {"a", "_", "{", "3"}, false});
  }
  OpAnalysis a = op_analysis(pairs, 10);
  REQUIRE(a.top_inserts.size() == 1);
  CHECK(a.top_inserts[0] == std::pair<std::string, int>{"}", 4});
  CHECK(a.top_deletes.empty());
  CHECK(a.top_replaces.empty());
  CHECK(a.total_inserts == 4);
  CHECK(a.total_ops() == 4);
}

TEST_CASE("identical corpora have empty tables") {
  std::vector<PairInput> pairs{{{"a", "b"}, {"a", "b"}, false}};
  OpAnalysis a = op_analysis(pairs, 10);
  CHECK(a.top_inserts.empty());
  CHECK(a.top_deletes.empty());
  CHECK(a.top_replaces.empty());
  CHECK(a.total_ops() == 0);
}

TEST_CASE("tables rank by count with lexicographic ties and honor k") {
  std::vector<PairInput> pairs{
      // Deletions: three spurious 'z', three spurious 'y', one spurious 'w'.
      {{"a"}, {"z", "a", "z", "y", "z", "y", "y", "w"}, false},
  };
  OpAnalysis a = op_analysis(pairs, 2);
  REQUIRE(a.top_deletes.size() == 2);
  CHECK(a.top_deletes[0] == std::pair<std::string, int>{"y", 3});
  CHECK(a.top_deletes[1] == std::pair<std::string, int>{"z", 3});
  CHECK(a.total_deletes == 7);
}

TEST_CASE("analysis aggregates exactly the per-pair operations") {
  std::mt19937 rng(2718);
  std::vector<PairInput> pairs;
  for (int i = 0; i < 5; ++i) {
    pairs.push_back({random_seq(rng, 8, 3), random_seq(rng, 8, 3), false});
  }
  std::map<std::string, int> inserts, deletes;
  std::map<std::pair<std::string, std::string>, int> replaces;
  for (const PairInput& p : pairs) {
    EditOps ops = levenshtein(p.gt, p.pre);
    for (const auto& [t, c] : ops.inserts) inserts[t] += c;
    for (const auto& [t, c] : ops.deletes) deletes[t] += c;
    for (const auto& [pr, c] : ops.replaces) replaces[pr] += c;
  }
  OpAnalysis a = op_analysis(pairs, 1000);
  CHECK(a.top_inserts.size() == inserts.size());
  for (const auto& [t, c] : a.top_inserts) CHECK(inserts.at(t) == c);
  for (const auto& [t, c] : a.top_deletes) CHECK(deletes.at(t) == c);
  for (const auto& [pr, c] : a.top_replaces) CHECK(replaces.at(pr) == c);
}

TEST_CASE("operation totals equal the summed errors") {
  std::mt19937 rng(161803);
  std::vector<PairInput> pairs;
  for (int i = 0; i < 100; ++i) {
    pairs.push_back({random_seq(rng, 9, 4), random_seq(rng, 9, 4), false});
  }
  OpAnalysis a = op_analysis(pairs, 3);
  ScoreReport r = corpus_score(pairs);
  CHECK(a.total_ops() == r.overall.summed_errors);
}
