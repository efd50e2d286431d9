// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#include "texcanon/normalizer.hpp"

#include <algorithm>
#include <set>

#include "texcanon/parser.hpp"
#include "texcanon/tokenizer.hpp"

namespace texcanon {

namespace {

// Raised by the array pass; converted to a SparseArray rejection.
struct SparseSignal {
  std::string detail;
};

ExprNode single_node(NodeList&& nodes) {
  if (nodes.size() == 1) return std::move(nodes.front());
  return make_group(std::move(nodes));
}

// --- R1: unwrap mathematical font commands -------------------------------

NodeList font_pass(const NodeList& nodes, const NormConfig& cfg);

NodeList font_pass_node(const ExprNode& node, const NormConfig& cfg) {
  if (node.is<Atom>()) {
    if (cfg.math_font_commands.count(node.as<Atom>().token.text)) return {};
    return {node};
  }
  if (node.is<Group>()) {
    return {make_group(font_pass(node.as<Group>().children, cfg))};
  }
  if (node.is<Command>()) {
    const Command& cmd = node.as<Command>();
    if (cfg.math_font_commands.count(cmd.name.text)) {
      NodeList spliced;
      for (const NodeList& arg : cmd.args) {
        NodeList rewritten = font_pass(arg, cfg);
        std::move(rewritten.begin(), rewritten.end(), std::back_inserter(spliced));
      }
      return spliced;
    }
    Command out{cmd.name, {}};
    for (const NodeList& arg : cmd.args) out.args.push_back(font_pass(arg, cfg));
    return {ExprNode{std::move(out)}};
  }
  if (node.is<Scripted>()) {
    const Scripted& s = node.as<Scripted>();
    Scripted out;
    out.base.push_back(single_node(font_pass_node(s.base_node(), cfg)));
    for (const ScriptAttachment& att : s.scripts) {
      out.scripts.push_back({att.mark, font_pass(att.operand, cfg)});
    }
    return {ExprNode{std::move(out)}};
  }
  if (node.is<Array>()) {
    const Array& a = node.as<Array>();
    Array out{a.col_spec, {}};
    for (const auto& row : a.rows) {
      std::vector<NodeList> cells;
      for (const NodeList& cell : row) cells.push_back(font_pass(cell, cfg));
      out.rows.push_back(std::move(cells));
    }
    return {ExprNode{std::move(out)}};
  }
  const DelimPair& d = node.as<DelimPair>();
  return {ExprNode{DelimPair{d.left, d.right, font_pass(d.body, cfg)}}};
}

NodeList font_pass(const NodeList& nodes, const NormConfig& cfg) {
  NodeList out;
  for (const ExprNode& n : nodes) {
    NodeList rewritten = font_pass_node(n, cfg);
    std::move(rewritten.begin(), rewritten.end(), std::back_inserter(out));
  }
  return out;
}

// --- R2: delete white-space commands (with their arguments) --------------

NodeList space_pass(const NodeList& nodes, const NormConfig& cfg);

NodeList space_pass_node(const ExprNode& node, const NormConfig& cfg) {
  if (node.is<Atom>()) {
    if (cfg.whitespace_commands.count(node.as<Atom>().token.text)) return {};
    return {node};
  }
  if (node.is<Group>()) {
    return {make_group(space_pass(node.as<Group>().children, cfg))};
  }
  if (node.is<Command>()) {
    const Command& cmd = node.as<Command>();
    if (cfg.whitespace_commands.count(cmd.name.text)) return {};
    Command out{cmd.name, {}};
    for (const NodeList& arg : cmd.args) out.args.push_back(space_pass(arg, cfg));
    return {ExprNode{std::move(out)}};
  }
  if (node.is<Scripted>()) {
    const Scripted& s = node.as<Scripted>();
    Scripted out;
    out.base.push_back(single_node(space_pass_node(s.base_node(), cfg)));
    for (const ScriptAttachment& att : s.scripts) {
      out.scripts.push_back({att.mark, space_pass(att.operand, cfg)});
    }
    return {ExprNode{std::move(out)}};
  }
  if (node.is<Array>()) {
    const Array& a = node.as<Array>();
    Array out{a.col_spec, {}};
    for (const auto& row : a.rows) {
      std::vector<NodeList> cells;
      for (const NodeList& cell : row) cells.push_back(space_pass(cell, cfg));
      out.rows.push_back(std::move(cells));
    }
    return {ExprNode{std::move(out)}};
  }
  const DelimPair& d = node.as<DelimPair>();
  return {ExprNode{DelimPair{d.left, d.right, space_pass(d.body, cfg)}}};
}

NodeList space_pass(const NodeList& nodes, const NormConfig& cfg) {
  NodeList out;
  for (const ExprNode& n : nodes) {
    NodeList rewritten = space_pass_node(n, cfg);
    std::move(rewritten.begin(), rewritten.end(), std::back_inserter(out));
  }
  return out;
}

// --- R5b: synonym replacement ---------------------------------------------

Token map_token(const Token& tok, const NormConfig& cfg) {
  auto it = cfg.synonyms.find(tok.text);
  if (it == cfg.synonyms.end()) return tok;
  return make_token(it->second);
}

ExprNode synonym_pass_node(const ExprNode& node, const NormConfig& cfg);

NodeList synonym_pass(const NodeList& nodes, const NormConfig& cfg) {
  NodeList out;
  out.reserve(nodes.size());
  for (const ExprNode& n : nodes) out.push_back(synonym_pass_node(n, cfg));
  return out;
}

ExprNode synonym_pass_node(const ExprNode& node, const NormConfig& cfg) {
  if (node.is<Atom>()) {
    return make_atom(map_token(node.as<Atom>().token, cfg));
  }
  if (node.is<Group>()) {
    return make_group(synonym_pass(node.as<Group>().children, cfg));
  }
  if (node.is<Command>()) {
    const Command& cmd = node.as<Command>();
    Command out{map_token(cmd.name, cfg), {}};
    for (const NodeList& arg : cmd.args) out.args.push_back(synonym_pass(arg, cfg));
    return ExprNode{std::move(out)};
  }
  if (node.is<Scripted>()) {
    const Scripted& s = node.as<Scripted>();
    Scripted out;
    out.base.push_back(synonym_pass_node(s.base_node(), cfg));
    for (const ScriptAttachment& att : s.scripts) {
      out.scripts.push_back({att.mark, synonym_pass(att.operand, cfg)});
    }
    return ExprNode{std::move(out)};
  }
  if (node.is<Array>()) {
    const Array& a = node.as<Array>();
    Array out{a.col_spec, {}};
    for (const auto& row : a.rows) {
      std::vector<NodeList> cells;
      for (const NodeList& cell : row) cells.push_back(synonym_pass(cell, cfg));
      out.rows.push_back(std::move(cells));
    }
    return ExprNode{std::move(out)};
  }
  const DelimPair& d = node.as<DelimPair>();
  return ExprNode{
      DelimPair{map_token(d.left, cfg), map_token(d.right, cfg), synonym_pass(d.body, cfg)}};
}

// --- R6: array handling ----------------------------------------------------

bool is_visible(const Token& delim) { return delim.text != "."; }

bool is_open_delim_atom(const ExprNode& n) {
  static const std::set<std::string> open = {"(", "[", "\\{", "\\langle",
                                             "\\lceil", "\\lfloor", "|", "\\|"};
  return n.is<Atom>() && open.count(n.as<Atom>().token.text) > 0;
}

bool is_close_delim_atom(const ExprNode& n) {
  static const std::set<std::string> close = {")", "]", "\\}", "\\rangle",
                                              "\\rceil", "\\rfloor", "|", "\\|"};
  return n.is<Atom>() && close.count(n.as<Atom>().token.text) > 0;
}

// Context for the keep/splice decision: true when the list being rewritten is
// the body of a DelimPair with two visible delimiters.
NodeList array_pass(const NodeList& nodes, const NormConfig& cfg, bool visible_delim_body);

Array array_pass_rewrite(const Array& a, const NormConfig& cfg) {
  Array out{a.col_spec, {}};
  for (const auto& row : a.rows) {
    if (row.size() != a.col_spec.size()) {
      throw SparseSignal{"row with " + std::to_string(row.size()) + " cells in a " +
                         std::to_string(a.col_spec.size()) + "-column array"};
    }
    std::vector<NodeList> cells;
    for (const NodeList& cell : row) {
      NodeList rewritten = array_pass(cell, cfg, false);
      if (rewritten.empty()) throw SparseSignal{"empty array cell"};
      cells.push_back(std::move(rewritten));
    }
    out.rows.push_back(std::move(cells));
  }
  return out;
}

NodeList array_pass_node(const ExprNode& node, const NormConfig& cfg) {
  if (node.is<Atom>()) return {node};
  if (node.is<Group>()) {
    return {make_group(array_pass(node.as<Group>().children, cfg, false))};
  }
  if (node.is<Command>()) {
    const Command& cmd = node.as<Command>();
    Command out{cmd.name, {}};
    for (const NodeList& arg : cmd.args) out.args.push_back(array_pass(arg, cfg, false));
    return {ExprNode{std::move(out)}};
  }
  if (node.is<Scripted>()) {
    const Scripted& s = node.as<Scripted>();
    Scripted out;
    NodeList base = array_pass_node(s.base_node(), cfg);
    if (base.size() == 1 && base.front().is<Array>()) {
      // A scripted array base is kept: splicing would hand the scripts to the
      // last cell element.
      out.base.push_back(std::move(base.front()));
    } else {
      out.base.push_back(single_node(std::move(base)));
    }
    for (const ScriptAttachment& att : s.scripts) {
      out.scripts.push_back({att.mark, array_pass(att.operand, cfg, false)});
    }
    return {ExprNode{std::move(out)}};
  }
  if (node.is<DelimPair>()) {
    const DelimPair& d = node.as<DelimPair>();
    bool visible = is_visible(d.left) && is_visible(d.right);
    return {ExprNode{DelimPair{d.left, d.right, array_pass(d.body, cfg, visible)}}};
  }
  // Bare Array outside any sequence-level decision (script base handled
  // above); callers decide keep/splice at sequence level.
  return {ExprNode{array_pass_rewrite(node.as<Array>(), cfg)}};
}

// An array stays a grid when it sits between visible delimiters: either as
// the sole content of a visibly delimited \left...\right pair, or with an
// opening delimiter atom on its left and a closing one on its right. Both
// shapes survive GT serialization, so the decision is stable under
// re-normalization. Everything else is formatting and is spliced row-major.
NodeList array_pass(const NodeList& nodes, const NormConfig& cfg, bool visible_delim_body) {
  NodeList out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const ExprNode& n = nodes[i];
    if (!n.is<Array>()) {
      NodeList rewritten = array_pass_node(n, cfg);
      std::move(rewritten.begin(), rewritten.end(), std::back_inserter(out));
      continue;
    }
    Array rewritten = array_pass_rewrite(n.as<Array>(), cfg);
    bool kept = (visible_delim_body && nodes.size() == 1) ||
                (i > 0 && i + 1 < nodes.size() && is_open_delim_atom(nodes[i - 1]) &&
                 is_close_delim_atom(nodes[i + 1]));
    if (kept) {
      out.push_back(ExprNode{std::move(rewritten)});
    } else {
      for (auto& row : rewritten.rows) {
        for (NodeList& cell : row) {
          std::move(cell.begin(), cell.end(), std::back_inserter(out));
        }
      }
    }
  }
  return out;
}

// --- R4: merge script chains ------------------------------------------------

ExprNode script_pass_node(const ExprNode& node);

NodeList script_pass(const NodeList& nodes) {
  NodeList out;
  out.reserve(nodes.size());
  for (const ExprNode& n : nodes) out.push_back(script_pass_node(n));
  return out;
}

ExprNode script_pass_node(const ExprNode& node) {
  if (node.is<Atom>()) return node;
  if (node.is<Group>()) return make_group(script_pass(node.as<Group>().children));
  if (node.is<Command>()) {
    const Command& cmd = node.as<Command>();
    Command out{cmd.name, {}};
    for (const NodeList& arg : cmd.args) out.args.push_back(script_pass(arg));
    return ExprNode{std::move(out)};
  }
  if (node.is<Array>()) {
    const Array& a = node.as<Array>();
    Array out{a.col_spec, {}};
    for (const auto& row : a.rows) {
      std::vector<NodeList> cells;
      for (const NodeList& cell : row) cells.push_back(script_pass(cell));
      out.rows.push_back(std::move(cells));
    }
    return ExprNode{std::move(out)};
  }
  if (node.is<DelimPair>()) {
    const DelimPair& d = node.as<DelimPair>();
    return ExprNode{DelimPair{d.left, d.right, script_pass(d.body)}};
  }
  const Scripted& s = node.as<Scripted>();
  Scripted out;
  out.base.push_back(script_pass_node(s.base_node()));
  NodeList subs, sups;
  bool has_sub = false, has_sup = false;
  for (const ScriptAttachment& att : s.scripts) {
    NodeList operand = script_pass(att.operand);
    if (att.mark == ScriptMark::Sub) {
      has_sub = true;
      std::move(operand.begin(), operand.end(), std::back_inserter(subs));
    } else {
      has_sup = true;
      std::move(operand.begin(), operand.end(), std::back_inserter(sups));
    }
  }
  if (has_sub) out.scripts.push_back({ScriptMark::Sub, std::move(subs)});
  if (has_sup) out.scripts.push_back({ScriptMark::Sup, std::move(sups)});
  return ExprNode{std::move(out)};
}

// --- driver ------------------------------------------------------------------

std::optional<Rejection> build_canonical_tree(std::string_view input, const NormConfig& cfg,
                                              ExprNode* out) {
  TokenSeq seq;
  try {
    seq = tokenize(input, cfg.tokenizer);
  } catch (const TokenizeError& e) {
    return Rejection{RejectReason::ParseError, e.what()};
  }
  ExprNode tree;
  try {
    tree = parse(seq, cfg.argspec);
  } catch (const ParseError& e) {
    return Rejection{RejectReason::ParseError, e.what()};
  }
  if (cfg.rule_tokens) {
    for (const Token& t : seq.tokens) {
      if (cfg.forbidden_tokens.count(t.text)) {
        return Rejection{RejectReason::ForbiddenToken, t.text};
      }
    }
  }
  NodeList children = std::move(tree.as<Group>().children);
  try {
    if (cfg.rule_math_fonts) children = font_pass(children, cfg);
    if (cfg.rule_whitespace) children = space_pass(children, cfg);
    if (cfg.rule_tokens) children = synonym_pass(children, cfg);
    if (cfg.rule_arrays) children = array_pass(children, cfg, false);
    if (cfg.rule_scripts) children = script_pass(children);
  } catch (const SparseSignal& s) {
    return Rejection{RejectReason::SparseArray, s.detail};
  }
  *out = make_group(std::move(children));
  return std::nullopt;
}

SerializeOptions serialize_options(const NormConfig& cfg, SerializeMode mode) {
  SerializeOptions opts;
  opts.mode = mode;
  opts.brace_discipline = cfg.rule_braces;
  opts.array_gt_rewrites = cfg.rule_arrays;
  return opts;
}

}  // namespace

std::string to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::ForbiddenToken: return "forbidden-token";
    case RejectReason::SparseArray: return "sparse-array";
    case RejectReason::EmptyAfterNormalization: return "empty";
    case RejectReason::ParseError: return "parse-error";
  }
  return "unknown";
}

std::string NormOutcome::canonical() const { return detokenize(tokens); }

NormOutcome normalize(std::string_view input, const NormConfig& cfg) {
  ExprNode tree;
  if (auto rejection = build_canonical_tree(input, cfg, &tree)) {
    return NormOutcome{{}, rejection};
  }
  std::vector<Token> tokens = serialize(tree, serialize_options(cfg, cfg.mode));
  if (tokens.empty()) {
    return NormOutcome{{}, Rejection{RejectReason::EmptyAfterNormalization, "all tokens removed"}};
  }
  return NormOutcome{std::move(tokens), std::nullopt};
}

DualOutcome normalize_dual(std::string_view input, const NormConfig& cfg) {
  ExprNode tree;
  if (auto rejection = build_canonical_tree(input, cfg, &tree)) {
    return DualOutcome{{}, {}, rejection};
  }
  DualOutcome out;
  out.gt = serialize(tree, serialize_options(cfg, SerializeMode::GT));
  out.rendering = serialize(tree, serialize_options(cfg, SerializeMode::Rendering));
  if (out.gt.empty()) {
    return DualOutcome{
        {}, {}, Rejection{RejectReason::EmptyAfterNormalization, "all tokens removed"}};
  }
  return out;
}

VocabStats vocab_stats(const std::vector<std::string>& corpus, const NormConfig& cfg) {
  VocabStats stats;
  std::set<std::string> before, after;
  for (const std::string& line : corpus) {
    try {
      TokenSeq seq = tokenize(line, cfg.tokenizer);
      for (const Token& t : seq.tokens) before.insert(t.text);
    } catch (const TokenizeError&) {
      ++stats.rejected_count;
      continue;
    }
    NormOutcome outcome = normalize(line, cfg);
    if (!outcome.accepted()) {
      ++stats.rejected_count;
      continue;
    }
    for (const Token& t : outcome.tokens) after.insert(t.text);
  }
  stats.vocab_before = before.size();
  stats.vocab_after = after.size();
  for (const std::string& t : before) {
    if (!after.count(t)) stats.removed_tokens.insert(t);
  }
  return stats;
}

}  // namespace texcanon
