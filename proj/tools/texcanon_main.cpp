// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0
//
// texcanon: canonicalize LaTeX math, score predictions, and build rendered
// datasets. Exit codes: 0 success, 1 data errors, 2 usage errors.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "texcanon/fixtures.hpp"
#include "texcanon/image.hpp"
#include "texcanon/metrics.hpp"
#include "texcanon/norm_config.hpp"
#include "texcanon/normalizer.hpp"
#include "texcanon/parser.hpp"
#include "texcanon/pipeline.hpp"
#include "texcanon/tokenizer.hpp"

using nlohmann::json;
using namespace texcanon;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  std::string line;
  if (path == "-") {
    while (std::getline(std::cin, line)) lines.push_back(line);
    return lines;
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// --- tokenize ----------------------------------------------------------------

int run_tokenize(const std::string& in_path, const NormConfig& cfg, bool as_json) {
  std::vector<std::string> lines = read_lines(in_path);
  std::size_t errors = 0;
  for (const std::string& line : lines) {
    try {
      TokenSeq seq = tokenize(line, cfg.tokenizer);
      if (as_json) {
        std::cout << json{{"tokens", seq.texts()}}.dump() << "\n";
      } else {
        std::cout << detokenize(seq) << "\n";
      }
    } catch (const TokenizeError& e) {
      ++errors;
      if (as_json) {
        std::cout << json{{"error", e.what()}}.dump() << "\n";
      } else {
        std::cout << "#ERROR " << e.what() << "\n";
      }
    }
  }
  if (errors > 0) {
    std::cerr << errors << " of " << lines.size() << " lines failed to tokenize\n";
    return 1;
  }
  return 0;
}

// --- parse ---------------------------------------------------------------------

int run_parse(const std::string& in_path, const NormConfig& cfg, bool debug, bool as_json) {
  std::vector<std::string> lines = read_lines(in_path);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      TokenSeq seq = tokenize(lines[i], cfg.tokenizer);
      ExprNode tree = parse(seq, cfg.argspec);
      if (as_json) {
        json j{{"ok", true}};
        if (debug) j["tree"] = dump_tree(tree);
        std::cout << j.dump() << "\n";
      } else if (debug) {
        std::cout << "# line " << (i + 1) << "\n" << dump_tree(tree);
      } else {
        std::cout << "ok\n";
      }
    } catch (const std::runtime_error& e) {
      ++errors;
      if (as_json) {
        std::cout << json{{"ok", false}, {"error", e.what()}}.dump() << "\n";
      } else if (debug) {
        std::cout << "# line " << (i + 1) << "\n#ERROR " << e.what() << "\n";
      } else {
        std::cout << "#ERROR " << e.what() << "\n";
      }
    }
  }
  if (errors > 0) {
    std::cerr << errors << " of " << lines.size() << " lines failed to parse\n";
    return 1;
  }
  return 0;
}

// --- normalize -------------------------------------------------------------------

int run_normalize(const std::string& in_path, const NormConfig& cfg, bool stats, bool as_json) {
  std::vector<std::string> lines = read_lines(in_path);
  std::size_t rejected = 0;
  for (const std::string& line : lines) {
    NormOutcome outcome = normalize(line, cfg);
    if (outcome.accepted()) {
      if (as_json) {
        std::vector<std::string> texts;
        for (const Token& t : outcome.tokens) texts.push_back(t.text);
        std::cout << json{{"canonical", outcome.canonical()}, {"tokens", texts}}.dump() << "\n";
      } else {
        std::cout << outcome.canonical() << "\n";
      }
    } else {
      ++rejected;
      if (as_json) {
        std::cout << json{{"reject",
                           {{"reason", to_string(outcome.rejection->reason)},
                            {"detail", outcome.rejection->detail}}}}
                         .dump()
                  << "\n";
      } else {
        std::cout << "#REJECT " << to_string(outcome.rejection->reason) << ": "
                  << outcome.rejection->detail << "\n";
      }
    }
  }
  std::cerr << "normalized " << (lines.size() - rejected) << " of " << lines.size()
            << " lines (" << rejected << " rejected)\n";
  if (stats) {
    VocabStats vs = vocab_stats(lines, cfg);
    std::cerr << "vocabulary before: " << vs.vocab_before << "\n"
              << "vocabulary after:  " << vs.vocab_after << "\n"
              << "removed tokens:    " << vs.removed_tokens.size() << "\n"
              << "rejected inputs:   " << vs.rejected_count << "\n";
  }
  return 0;
}

// --- stats ----------------------------------------------------------------------

int run_stats(const std::string& in_path, const NormConfig& cfg, bool list_removed,
              bool as_json) {
  std::vector<std::string> lines = read_lines(in_path);
  VocabStats vs = vocab_stats(lines, cfg);
  if (as_json) {
    json j{{"vocabBefore", vs.vocab_before},
           {"vocabAfter", vs.vocab_after},
           {"removedCount", vs.removed_tokens.size()},
           {"rejectedCount", vs.rejected_count}};
    if (list_removed) {
      j["removedTokens"] = std::vector<std::string>(vs.removed_tokens.begin(),
                                                    vs.removed_tokens.end());
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "vocabulary before: " << vs.vocab_before << "\n"
            << "vocabulary after:  " << vs.vocab_after << "\n"
            << "removed tokens:    " << vs.removed_tokens.size() << "\n"
            << "rejected inputs:   " << vs.rejected_count << "\n";
  if (list_removed) {
    for (const std::string& t : vs.removed_tokens) std::cout << t << "\n";
  }
  return 0;
}

// --- score / analyze ---------------------------------------------------------------

// Builds scoring pairs from line-aligned files; returns nonzero exit on
// structural problems (mismatched counts, rejected lines under --normalize).
int load_pairs(const std::string& gt_path, const std::string& pre_path,
               const std::string& flags_path, bool normalize_inputs, const NormConfig& cfg,
               std::vector<PairInput>* out) {
  std::vector<std::string> gt_lines = read_lines(gt_path);
  std::vector<std::string> pre_lines = read_lines(pre_path);
  if (gt_lines.size() != pre_lines.size()) {
    std::size_t first = std::min(gt_lines.size(), pre_lines.size()) + 1;
    std::cerr << "line count mismatch: " << gt_path << " has " << gt_lines.size() << " lines, "
              << pre_path << " has " << pre_lines.size() << "; first unpaired line is " << first
              << "\n";
    return 1;
  }
  std::vector<std::string> flag_lines;
  if (!flags_path.empty()) {
    flag_lines = read_lines(flags_path);
    if (flag_lines.size() != gt_lines.size()) {
      std::cerr << "line count mismatch: " << flags_path << " has " << flag_lines.size()
                << " lines, expected " << gt_lines.size() << "\n";
      return 1;
    }
  }
  for (std::size_t i = 0; i < gt_lines.size(); ++i) {
    PairInput pair;
    if (normalize_inputs) {
      NormOutcome gt = normalize(gt_lines[i], cfg);
      NormOutcome pre = normalize(pre_lines[i], cfg);
      if (!gt.accepted()) {
        std::cerr << gt_path << ":" << (i + 1) << ": rejected ("
                  << to_string(gt.rejection->reason) << ": " << gt.rejection->detail << ")\n";
        return 1;
      }
      if (!pre.accepted()) {
        std::cerr << pre_path << ":" << (i + 1) << ": rejected ("
                  << to_string(pre.rejection->reason) << ": " << pre.rejection->detail << ")\n";
        return 1;
      }
      for (const Token& t : gt.tokens) pair.gt.push_back(t.text);
      for (const Token& t : pre.tokens) pair.pre.push_back(t.text);
    } else {
      pair.gt = split_ws(gt_lines[i]);
      pair.pre = split_ws(pre_lines[i]);
    }
    if (!flag_lines.empty()) {
      const std::string& f = flag_lines[i];
      if (f != "0" && f != "1") {
        std::cerr << flags_path << ":" << (i + 1) << ": flag must be 0 or 1, got '" << f << "'\n";
        return 1;
      }
      pair.multiline = f == "1";
    }
    out->push_back(std::move(pair));
  }
  return 0;
}

json scores_to_json(const CorpusScores& s) {
  return json{{"pairs", s.pair_count},
              {"editScore", s.edit_score},
              {"bleu4", s.bleu4},
              {"exactMatch", s.exact_match},
              {"summedErrors", s.summed_errors}};
}

void print_scores_row(const std::string& label, const CorpusScores& s) {
  std::cout << "  " << std::left << std::setw(8) << label << std::right << " pairs "
            << std::setw(6) << s.pair_count << "  edit " << std::fixed << std::setprecision(2)
            << std::setw(7) << s.edit_score << "  bleu " << std::setw(7) << s.bleu4 << "  em "
            << std::setw(7) << s.exact_match << "  errors " << s.summed_errors << "\n";
}

json op_table_json(const std::vector<std::pair<std::string, int>>& table) {
  json arr = json::array();
  for (const auto& [tok, count] : table) arr.push_back({{"token", tok}, {"count", count}});
  return arr;
}

void print_op_analysis(const OpAnalysis& ops) {
  std::cout << "top insertions (tokens the predictions miss):\n";
  for (const auto& [tok, count] : ops.top_inserts) {
    std::cout << "  " << std::left << std::setw(16) << tok << count << "\n";
  }
  std::cout << "top deletions (spurious prediction tokens):\n";
  for (const auto& [tok, count] : ops.top_deletes) {
    std::cout << "  " << std::left << std::setw(16) << tok << count << "\n";
  }
  std::cout << "top replacements (ground truth <- prediction):\n";
  for (const auto& [pr, count] : ops.top_replaces) {
    std::cout << "  " << std::left << std::setw(16) << (pr.first + " <- " + pr.second) << count
              << "\n";
  }
  std::cout << "totals: " << ops.total_inserts << " insert, " << ops.total_deletes << " delete, "
            << ops.total_replaces << " replace\n";
}

json op_analysis_json(const OpAnalysis& ops) {
  json replaces = json::array();
  for (const auto& [pr, count] : ops.top_replaces) {
    replaces.push_back({{"gt", pr.first}, {"pre", pr.second}, {"count", count}});
  }
  return json{{"topInserts", op_table_json(ops.top_inserts)},
              {"topDeletes", op_table_json(ops.top_deletes)},
              {"topReplaces", replaces},
              {"totalInserts", ops.total_inserts},
              {"totalDeletes", ops.total_deletes},
              {"totalReplaces", ops.total_replaces}};
}

int run_score(const std::string& gt_path, const std::string& pre_path,
              const std::string& flags_path, bool normalize_inputs,
              const std::vector<std::string>& filter_names, std::size_t analyze_ops,
              const NormConfig& cfg, bool as_json) {
  std::vector<NamedFilter> filters;
  for (const std::string& name : filter_names) {
    if (name == "array") {
      filters.push_back(array_filter());
    } else if (name == "mathfont") {
      filters.push_back(math_font_filter(cfg));
    } else if (name == "multiline") {
      if (flags_path.empty()) {
        std::cerr << "--filters multiline requires --multiline-flags\n";
        return 2;
      }
      filters.push_back(multiline_filter());
    } else {
      std::cerr << "unknown filter '" << name << "' (known: array, mathfont, multiline)\n";
      return 2;
    }
  }
  std::vector<PairInput> pairs;
  if (int rc = load_pairs(gt_path, pre_path, flags_path, normalize_inputs, cfg, &pairs)) return rc;
  ScoreReport report;
  try {
    report = corpus_score(pairs, filters);
  } catch (const MetricsError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  for (const PairInput& p : pairs) {
    if (p.gt.empty() && p.pre.empty()) {
      std::cerr << "warning: a pair with two empty sequences scored as a trivial match\n";
      break;
    }
  }

  if (as_json) {
    json j{{"overall", scores_to_json(report.overall)}};
    for (const auto& [name, scores] : report.breakdowns) {
      j["breakdowns"][name] = scores_to_json(scores);
    }
    if (analyze_ops > 0) j["opAnalysis"] = op_analysis_json(op_analysis(pairs, analyze_ops));
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "overall:\n";
  print_scores_row("", report.overall);
  if (!report.breakdowns.empty()) {
    std::cout << "breakdowns:\n";
    for (const auto& [name, scores] : report.breakdowns) print_scores_row(name, scores);
  }
  if (analyze_ops > 0) print_op_analysis(op_analysis(pairs, analyze_ops));
  return 0;
}

int run_analyze(const std::string& gt_path, const std::string& pre_path, bool normalize_inputs,
                std::size_t top, const NormConfig& cfg, bool as_json) {
  std::vector<PairInput> pairs;
  if (int rc = load_pairs(gt_path, pre_path, "", normalize_inputs, cfg, &pairs)) return rc;
  OpAnalysis ops;
  try {
    ops = op_analysis(pairs, top);
  } catch (const MetricsError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  if (as_json) {
    std::cout << op_analysis_json(ops).dump(2) << "\n";
  } else {
    print_op_analysis(ops);
  }
  return 0;
}

// --- image subcommands ----------------------------------------------------------

int run_ycut(const std::string& in_path, int threshold, std::size_t min_gap,
             std::size_t min_segment, bool as_json) {
  GrayImage img = load_pgm(in_path);
  std::vector<RowRange> ranges = ycut(img, std::uint8_t(threshold), min_gap, min_segment);
  if (as_json) {
    json arr = json::array();
    for (const RowRange& r : ranges) arr.push_back({{"begin", r.begin}, {"end", r.end}});
    std::cout << json{{"segments", arr}}.dump() << "\n";
  } else {
    for (const RowRange& r : ranges) std::cout << r.begin << " " << r.end << "\n";
    std::cerr << ranges.size() << " segment(s)\n";
  }
  return 0;
}

int run_blank_check(const std::string& in_path, int threshold, bool as_json) {
  GrayImage img = load_pgm(in_path);
  bool blank = is_blank(img, std::uint8_t(threshold));
  if (as_json) {
    std::cout << json{{"blank", blank}}.dump() << "\n";
  } else {
    std::cout << (blank ? "blank" : "not blank") << "\n";
  }
  return blank ? 0 : 1;
}

// --- build-dataset -----------------------------------------------------------------

std::map<std::string, std::string> load_corrections(const std::string& path) {
  std::map<std::string, std::string> out;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corrections file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      std::ostringstream msg;
      msg << path << ":" << lineno << ": expected `id<TAB>formula`";
      throw std::runtime_error(msg.str());
    }
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

int run_build_dataset(const std::string& records_path, const std::string& setups_path,
                      const std::string& out_dir, const std::string& renderer_cmd,
                      bool mock_renderer, const std::vector<std::string>& mock_failures,
                      bool resume, std::size_t jobs, const std::string& corrections_path,
                      const std::string& split_name, const NormConfig& cfg, bool as_json) {
  if (mock_renderer == !renderer_cmd.empty()) {
    std::cerr << "choose exactly one of --mock-renderer or --renderer-cmd\n";
    return 2;
  }
  if (!mock_failures.empty() && !mock_renderer) {
    std::cerr << "--mock-fail requires --mock-renderer\n";
    return 2;
  }
  MockRenderer mock;
  for (const std::string& spec : mock_failures) {
    auto colon = spec.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size()) {
      std::cerr << "--mock-fail expects `recordId:fontId`, got '" << spec << "'\n";
      return 2;
    }
    mock.program_failure(spec.substr(0, colon), spec.substr(colon + 1));
  }
  CommandRenderer command(renderer_cmd);
  RendererIface& renderer = mock_renderer ? static_cast<RendererIface&>(mock)
                                          : static_cast<RendererIface&>(command);

  std::vector<InputRecord> records = load_records(records_path);
  std::vector<RenderSetup> setups = load_setups(setups_path);
  PipelineOptions opts;
  opts.out_dir = out_dir;
  opts.resume = resume;
  opts.jobs = jobs;
  opts.split_name = split_name;
  if (!corrections_path.empty()) opts.corrections = load_corrections(corrections_path);

  PipelineReport report = run_pipeline(records, setups, renderer, cfg, opts);
  write_manifest(report, out_dir + "/manifest.tsv");
  if (as_json) {
    std::cout << report_json(report) << "\n";
  } else {
    std::cout << report_text(report);
    std::cout << "manifest: " << out_dir << "/manifest.tsv\n";
  }
  return 0;
}

// --- gen-fixtures --------------------------------------------------------------------

int run_gen_fixtures(std::uint64_t seed, std::size_t count, const std::string& out_dir,
                     bool as_json) {
  write_fixture_files(seed, count, out_dir);
  if (as_json) {
    std::cout << json{{"dir", out_dir},
                      {"files", {"sources.txt", "canonical.txt", "braced.txt", "scripts.txt"}},
                      {"count", count},
                      {"seed", seed}}
                     .dump()
              << "\n";
  } else {
    std::cout << "wrote " << count << " cases to " << out_dir
              << " (sources.txt, canonical.txt, braced.txt, scripts.txt)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"texcanon: LaTeX math canonicalization, scoring, and dataset tooling"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "normalization config file (key = value)")
      ->envname("TEXCANON_CONFIG");
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "more detail on standard error");

  // tokenize
  auto* c_tok = app.add_subcommand("tokenize", "lex each input line into tokens");
  std::string tok_in = "-";
  bool tok_json = false;
  c_tok->add_option("--in", tok_in, "input file, - for stdin");
  c_tok->add_flag("--json", tok_json, "JSON-lines output");

  // parse
  auto* c_parse = app.add_subcommand("parse", "check that each line parses");
  std::string parse_in = "-";
  bool parse_json = false;
  bool parse_debug = false;
  c_parse->add_option("--in", parse_in, "input file, - for stdin");
  c_parse->add_flag("--debug", parse_debug, "print an indented expression-tree dump per line");
  c_parse->add_flag("--json", parse_json, "JSON-lines output");

  // normalize
  auto* c_norm = app.add_subcommand("normalize", "canonicalize each input line");
  std::string norm_in = "-";
  std::string norm_mode;
  bool norm_stats = false, norm_json = false;
  c_norm->add_option("--in", norm_in, "input file, - for stdin");
  c_norm->add_option("--mode", norm_mode, "serialization mode")
      ->check(CLI::IsMember({"gt", "rendering"}));
  c_norm->add_flag("--stats", norm_stats, "print vocabulary statistics to stderr");
  c_norm->add_flag("--json", norm_json, "JSON-lines output");

  // score
  auto* c_score = app.add_subcommand("score", "score line-aligned prediction files");
  std::string score_gt, score_pre, score_flags;
  std::string score_filters;
  bool score_norm = false, score_json = false;
  std::size_t score_ops = 0;
  c_score->add_option("--gt", score_gt, "ground-truth file")->required();
  c_score->add_option("--pre", score_pre, "prediction file")->required();
  c_score->add_flag("--normalize", score_norm, "canonicalize both sides first");
  c_score->add_option("--filters", score_filters, "comma list: array,mathfont,multiline");
  c_score->add_option("--multiline-flags", score_flags, "0/1 per line, aligned with --gt");
  c_score->add_option("--analyze-ops", score_ops, "also print top-K edit operations");
  c_score->add_flag("--json", score_json, "JSON output");

  // analyze
  auto* c_an = app.add_subcommand("analyze", "rank edit operations over a corpus");
  std::string an_gt, an_pre;
  bool an_norm = false, an_json = false;
  std::size_t an_top = 10;
  c_an->add_option("--gt", an_gt, "ground-truth file")->required();
  c_an->add_option("--pre", an_pre, "prediction file")->required();
  c_an->add_flag("--normalize", an_norm, "canonicalize both sides first");
  c_an->add_option("--top", an_top, "table size")->check(CLI::PositiveNumber);
  c_an->add_flag("--json", an_json, "JSON output");

  // ycut
  auto* c_ycut = app.add_subcommand("ycut", "split an image into line segments");
  std::string ycut_in;
  int ycut_threshold = 250;
  std::size_t ycut_gap = 20, ycut_seg = 8;
  bool ycut_json = false;
  c_ycut->add_option("--in", ycut_in, "PGM image")->required();
  c_ycut->add_option("--threshold", ycut_threshold, "white threshold (default 250)")
      ->check(CLI::Range(0, 255));
  c_ycut->add_option("--min-gap", ycut_gap, "blank rows that separate segments");
  c_ycut->add_option("--min-segment", ycut_seg, "segments shorter than this merge");
  c_ycut->add_flag("--json", ycut_json, "JSON output");

  // blank-check
  auto* c_blank = app.add_subcommand("blank-check", "exit 0 if the image is blank, 1 if not");
  std::string blank_in;
  int blank_threshold = 250;
  bool blank_json = false;
  c_blank->add_option("--in", blank_in, "PGM image")->required();
  c_blank->add_option("--threshold", blank_threshold, "white threshold (default 250)")
      ->check(CLI::Range(0, 255));
  c_blank->add_flag("--json", blank_json, "JSON output");

  // build-dataset
  auto* c_build = app.add_subcommand("build-dataset", "run the rendering pipeline");
  std::string b_records, b_setups, b_out, b_cmd, b_corrections, b_split = "all";
  std::vector<std::string> b_fail;
  bool b_mock = false, b_resume = false, b_json = false;
  std::size_t b_jobs = 1;
  c_build->add_option("--records", b_records, "TSV: id, formula, imagePath")->required();
  c_build->add_option("--setups", b_setups, "render setups: fontId dpi per line")->required();
  c_build->add_option("--out", b_out, "output directory")->required();
  c_build->add_option("--renderer-cmd", b_cmd,
                      "command template with {formula-file} {font} {dpi} {out-image}");
  c_build->add_flag("--mock-renderer", b_mock, "use the deterministic built-in renderer");
  c_build->add_option("--mock-fail", b_fail, "recordId:fontId pair the mock fails on");
  c_build->add_flag("--resume", b_resume, "skip records already in the journal");
  c_build->add_option("--jobs", b_jobs, "parallel record workers")->check(CLI::PositiveNumber);
  c_build->add_option("--corrections", b_corrections, "TSV: id, replacement formula");
  c_build->add_option("--split-name", b_split, "label used in the report");
  c_build->add_flag("--json", b_json, "JSON report");

  // stats
  auto* c_stats = app.add_subcommand("stats", "vocabulary statistics for a corpus");
  std::string stats_in = "-";
  bool stats_removed = false, stats_json = false;
  c_stats->add_option("--in", stats_in, "corpus file, - for stdin");
  c_stats->add_flag("--removed", stats_removed, "list removed tokens");
  c_stats->add_flag("--json", stats_json, "JSON output");

  // gen-fixtures
  auto* c_gen = app.add_subcommand("gen-fixtures", "write deterministic synthetic corpora");
  std::uint64_t gen_seed = 1;
  std::size_t gen_count = 100;
  std::string gen_out;
  bool gen_json = false;
  c_gen->add_option("--seed", gen_seed, "generator seed (default 1)");
  c_gen->add_option("--count", gen_count, "cases to generate")->check(CLI::PositiveNumber);
  c_gen->add_option("--out", gen_out, "output directory")->required();
  c_gen->add_flag("--json", gen_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    NormConfig cfg = NormConfig::defaults();
    if (!config_path.empty()) cfg.load_file(config_path);

    if (app.got_subcommand(c_tok)) return run_tokenize(tok_in, cfg, tok_json);
    if (app.got_subcommand(c_parse)) return run_parse(parse_in, cfg, parse_debug, parse_json);
    if (app.got_subcommand(c_norm)) {
      if (norm_mode == "gt") cfg.mode = SerializeMode::GT;
      if (norm_mode == "rendering") cfg.mode = SerializeMode::Rendering;
      return run_normalize(norm_in, cfg, norm_stats, norm_json);
    }
    if (app.got_subcommand(c_score)) {
      std::vector<std::string> names;
      std::istringstream ss(score_filters);
      std::string name;
      while (std::getline(ss, name, ',')) {
        if (!name.empty()) names.push_back(name);
      }
      return run_score(score_gt, score_pre, score_flags, score_norm, names, score_ops, cfg,
                       score_json);
    }
    if (app.got_subcommand(c_an)) return run_analyze(an_gt, an_pre, an_norm, an_top, cfg, an_json);
    if (app.got_subcommand(c_ycut)) {
      return run_ycut(ycut_in, ycut_threshold, ycut_gap, ycut_seg, ycut_json);
    }
    if (app.got_subcommand(c_blank)) {
      try {
        return run_blank_check(blank_in, blank_threshold, blank_json);
      } catch (const ImageError& e) {
        std::cerr << e.what() << "\n";
        return 2;
      }
    }
    if (app.got_subcommand(c_build)) {
      return run_build_dataset(b_records, b_setups, b_out, b_cmd, b_mock, b_fail, b_resume,
                               b_jobs, b_corrections, b_split, cfg, b_json);
    }
    if (app.got_subcommand(c_stats)) return run_stats(stats_in, cfg, stats_removed, stats_json);
    if (app.got_subcommand(c_gen)) return run_gen_fixtures(gen_seed, gen_count, gen_out, gen_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // unreachable: a subcommand is required
}
