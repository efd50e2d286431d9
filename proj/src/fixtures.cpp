// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#include "texcanon/fixtures.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

namespace texcanon {

namespace {

// --- generator tree --------------------------------------------------------
//
// The generator keeps its own tiny expression representation so the expected
// canonical form can be derived by construction, without touching the parser
// or normalizer under test.

struct GenNode;
using GenList = std::vector<GenNode>;

struct GenScript {
  char mark = '_';    // '_' or '^'
  GenList operand;    // non-empty, durable content only
  bool bare = false;  // emit a single-token operand without braces
};

struct GenNode {
  enum class K {
    Durable,         // token that survives normalization (maybe a synonym key)
    Space,           // white-space command, deleted
    FontAtom,        // bare font switch, deleted
    Wrap,            // redundant brace group, spliced
    FontCmd,         // font command; its argument content is spliced
    Cmd,             // structural command with braced arguments
    Script,          // base with script attachments
    Delim,           // \left X body \right Y, non-array body
    ArrayKeptDelim,  // array as sole body of a visibly delimited pair
    ArrayKeptFlank,  // ( array ) written as plain delimiter atoms
    ArraySpliced,    // bare array, spliced row-major
  };

  K k = K::Durable;
  std::string text;           // Durable/Space/FontAtom token, Cmd/FontCmd name
  GenList kids;               // Wrap and FontCmd content
  std::vector<GenList> args;  // Cmd arguments
  GenList base;               // Script base (one node, or 2-3 when base_group)
  bool base_group = false;
  std::vector<GenScript> scripts;
  std::string colspec;        // arrays: source column letters
  bool trailing_break = false;  // arrays: emit a trailing row separator
  std::vector<std::vector<GenList>> cells;
  std::string open_d, close_d;  // Delim / ArrayKept* delimiter texts
};

// --- vocabulary -------------------------------------------------------------

const char* const kLetters[] = {"a", "b", "x", "y", "z", "n", "m", "k"};
const char* const kDigits[] = {"0", "1", "2", "3", "7"};
const char* const kCommands[] = {
    "\\alpha", "\\beta", "\\gamma", "\\theta", "\\lambda", "\\mu",   "\\pi",
    "\\sigma", "\\omega", "\\sin",  "\\cos",   "\\log",    "\\infty", "\\sum",
    "\\int",   "\\partial", "\\nabla", "\\cdot", "\\times", "\\pm",  "\\prime",
};
const char* const kOps[] = {"+", "-", "="};
// Keys paired with their canonical replacements; an independent copy of the
// default synonym table restricted to non-delimiter values.
const std::pair<const char*, const char*> kSynonyms[] = {
    {"\\ge", "\\geq"},  {"\\le", "\\leq"},        {"\\ne", "\\neq"},
    {"\\to", "\\rightarrow"}, {"\\gets", "\\leftarrow"}, {"\\dag", "\\dagger"},
    {"\\land", "\\wedge"},    {"\\lor", "\\vee"},
};
const char* const kSpaces[] = {"\\quad", "\\qquad", "\\,", "\\;", "\\:", "\\!", "~"};
const char* const kFontAtoms[] = {"\\bf", "\\cal", "\\rm", "\\it"};
const char* const kFontCmds[] = {"\\mathbf", "\\mathcal", "\\mathrm",
                                 "\\mathbb", "\\boldsymbol", "\\mathit"};
const std::pair<const char*, const char*> kVisiblePairs[] = {
    {"(", ")"}, {"[", "]"}, {"\\{", "\\}"}, {"|", "|"}, {"\\langle", "\\rangle"},
};
const std::pair<const char*, const char*> kFlankPairs[] = {
    {"(", ")"}, {"[", "]"}, {"\\{", "\\}"},
};

std::string map_synonym(const std::string& text) {
  for (const auto& [from, to] : kSynonyms) {
    if (text == from) return to;
  }
  return text;
}

// --- random helpers ---------------------------------------------------------

class Rand {
 public:
  explicit Rand(std::mt19937& rng) : rng_(rng) {}

  // Platform-stable bounded sample (mt19937 output is specified exactly).
  std::size_t below(std::size_t n) { return std::size_t(rng_()) % n; }
  bool chance(std::size_t percent) { return below(100) < percent; }

  template <typename T, std::size_t N>
  const T& pick(const T (&arr)[N]) {
    return arr[below(N)];
  }

 private:
  std::mt19937& rng_;
};

// --- generation --------------------------------------------------------------

GenList gen_sequence(Rand& r, std::size_t depth, bool allow_arrays);

GenNode gen_durable_atom(Rand& r) {
  GenNode n;
  n.k = GenNode::K::Durable;
  switch (r.below(5)) {
    case 0: n.text = r.pick(kLetters); break;
    case 1: n.text = r.pick(kDigits); break;
    case 2: n.text = r.pick(kCommands); break;
    case 3: n.text = r.pick(kOps); break;
    default: n.text = r.pick(kSynonyms).first; break;
  }
  return n;
}

GenList gen_durable_atoms(Rand& r, std::size_t count) {
  GenList out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen_durable_atom(r));
  return out;
}

GenNode gen_cmd(Rand& r, std::size_t depth) {
  GenNode n;
  n.k = GenNode::K::Cmd;
  if (r.chance(55)) {
    n.text = "\\frac";
    n.args.push_back(gen_sequence(r, depth - 1, false));
    n.args.push_back(gen_sequence(r, depth - 1, false));
  } else {
    n.text = "\\sqrt";
    n.args.push_back(gen_sequence(r, depth - 1, false));
  }
  return n;
}

GenNode gen_script(Rand& r, std::size_t depth) {
  GenNode n;
  n.k = GenNode::K::Script;
  switch (r.below(3)) {
    case 0:
      n.base = {gen_durable_atom(r)};
      break;
    case 1:
      n.base_group = true;
      n.base = gen_durable_atoms(r, 2 + r.below(2));
      break;
    default:
      n.base = {depth > 1 ? gen_cmd(r, depth) : gen_durable_atom(r)};
      break;
  }
  std::size_t count = 1 + r.below(3);
  for (std::size_t i = 0; i < count; ++i) {
    GenScript att;
    att.mark = r.chance(50) ? '_' : '^';
    if (depth > 1 && r.chance(20)) {
      att.operand = {gen_cmd(r, depth)};
    } else {
      att.operand = gen_durable_atoms(r, 1 + r.below(2));
    }
    att.bare = att.operand.size() == 1 && r.chance(35);
    n.scripts.push_back(std::move(att));
  }
  return n;
}

void gen_array_shape(Rand& r, std::size_t depth, GenNode* n) {
  std::size_t cols = 1 + r.below(3);
  std::size_t rows = 1 + r.below(3);
  const char* colletters = "lcr";
  for (std::size_t c = 0; c < cols; ++c) n->colspec.push_back(colletters[r.below(3)]);
  n->trailing_break = r.chance(25);
  for (std::size_t row = 0; row < rows; ++row) {
    std::vector<GenList> cell_row;
    for (std::size_t c = 0; c < cols; ++c) {
      GenList cell = gen_durable_atoms(r, 1 + r.below(2));
      if (depth > 1 && r.chance(20)) cell.push_back(gen_script(r, 1));
      cell_row.push_back(std::move(cell));
    }
    n->cells.push_back(std::move(cell_row));
  }
}

GenNode gen_array(Rand& r, std::size_t depth) {
  GenNode n;
  switch (r.below(3)) {
    case 0: {
      n.k = GenNode::K::ArrayKeptDelim;
      auto [open, close] = r.pick(kVisiblePairs);
      n.open_d = open;
      n.close_d = close;
      break;
    }
    case 1: {
      n.k = GenNode::K::ArrayKeptFlank;
      auto [open, close] = r.pick(kFlankPairs);
      n.open_d = open;
      n.close_d = close;
      break;
    }
    default:
      n.k = GenNode::K::ArraySpliced;
      break;
  }
  gen_array_shape(r, depth, &n);
  return n;
}

GenNode gen_delim(Rand& r, std::size_t depth) {
  GenNode n;
  n.k = GenNode::K::Delim;
  auto [open, close] = r.pick(kVisiblePairs);
  n.open_d = open;
  n.close_d = close;
  if (r.chance(15)) (r.chance(50) ? n.open_d : n.close_d) = ".";
  n.kids = gen_sequence(r, depth - 1, false);
  return n;
}

GenNode gen_item(Rand& r, std::size_t depth, bool allow_arrays) {
  if (depth == 0) return gen_durable_atom(r);
  std::size_t roll = r.below(100);
  if (roll < 38) return gen_durable_atom(r);
  if (roll < 46) {
    GenNode n;
    n.k = GenNode::K::Space;
    n.text = r.pick(kSpaces);
    return n;
  }
  if (roll < 50) {
    GenNode n;
    n.k = GenNode::K::FontAtom;
    n.text = r.pick(kFontAtoms);
    return n;
  }
  if (roll < 60) {
    GenNode n;
    n.k = GenNode::K::Wrap;
    n.kids = gen_sequence(r, depth - 1, allow_arrays);
    return n;
  }
  if (roll < 68) {
    GenNode n;
    n.k = GenNode::K::FontCmd;
    n.text = r.pick(kFontCmds);
    n.kids = gen_sequence(r, depth - 1, false);
    return n;
  }
  if (roll < 80) return gen_cmd(r, depth);
  if (roll < 92) return gen_script(r, depth);
  if (allow_arrays && roll < 97) return gen_array(r, depth);
  return gen_delim(r, depth);
}

GenList gen_sequence(Rand& r, std::size_t depth, bool allow_arrays) {
  std::size_t count = 1 + r.below(3);
  GenList out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen_item(r, depth, allow_arrays));
  return out;
}

// --- source emission ----------------------------------------------------------

void emit_src(const GenNode& n, std::vector<std::string>* out);

void emit_src_list(const GenList& nodes, std::vector<std::string>* out) {
  for (const GenNode& n : nodes) emit_src(n, out);
}

void emit_src_array_body(const GenNode& n, std::vector<std::string>* out) {
  out->push_back("\\begin{array}");
  out->push_back("{");
  for (char c : n.colspec) out->push_back(std::string(1, c));
  out->push_back("}");
  for (std::size_t row = 0; row < n.cells.size(); ++row) {
    if (row > 0) out->push_back("\\\\");
    for (std::size_t col = 0; col < n.cells[row].size(); ++col) {
      if (col > 0) out->push_back("&");
      emit_src_list(n.cells[row][col], out);
    }
  }
  if (n.trailing_break) out->push_back("\\\\");
  out->push_back("\\end{array}");
}

void emit_src(const GenNode& n, std::vector<std::string>* out) {
  switch (n.k) {
    case GenNode::K::Durable:
    case GenNode::K::Space:
    case GenNode::K::FontAtom:
      out->push_back(n.text);
      return;
    case GenNode::K::Wrap:
      out->push_back("{");
      emit_src_list(n.kids, out);
      out->push_back("}");
      return;
    case GenNode::K::FontCmd:
      out->push_back(n.text);
      out->push_back("{");
      emit_src_list(n.kids, out);
      out->push_back("}");
      return;
    case GenNode::K::Cmd:
      out->push_back(n.text);
      for (const GenList& arg : n.args) {
        out->push_back("{");
        emit_src_list(arg, out);
        out->push_back("}");
      }
      return;
    case GenNode::K::Script:
      if (n.base_group) {
        out->push_back("{");
        emit_src_list(n.base, out);
        out->push_back("}");
      } else {
        emit_src(n.base.front(), out);
      }
      for (const GenScript& att : n.scripts) {
        out->push_back(std::string(1, att.mark));
        if (att.bare) {
          emit_src(att.operand.front(), out);
        } else {
          out->push_back("{");
          emit_src_list(att.operand, out);
          out->push_back("}");
        }
      }
      return;
    case GenNode::K::Delim:
      out->push_back("\\left");
      out->push_back(n.open_d);
      emit_src_list(n.kids, out);
      out->push_back("\\right");
      out->push_back(n.close_d);
      return;
    case GenNode::K::ArrayKeptDelim:
      out->push_back("\\left");
      out->push_back(n.open_d);
      emit_src_array_body(n, out);
      out->push_back("\\right");
      out->push_back(n.close_d);
      return;
    case GenNode::K::ArrayKeptFlank:
      out->push_back(n.open_d);
      emit_src_array_body(n, out);
      out->push_back(n.close_d);
      return;
    case GenNode::K::ArraySpliced:
      emit_src_array_body(n, out);
      return;
  }
}

// --- expected canonical form ----------------------------------------------------

void expect(const GenNode& n, std::vector<std::string>* out);

void expect_list(const GenList& nodes, std::vector<std::string>* out) {
  for (const GenNode& n : nodes) expect(n, out);
}

void expect_braced(const GenList& nodes, std::vector<std::string>* out) {
  out->push_back("{");
  expect_list(nodes, out);
  out->push_back("}");
}

void expect_array_tokens(const GenNode& n, std::vector<std::string>* out) {
  out->push_back("\\begin{array}");
  out->push_back("{");
  for (std::size_t c = 0; c < n.colspec.size(); ++c) out->push_back("c");
  out->push_back("}");
  for (std::size_t row = 0; row < n.cells.size(); ++row) {
    if (row > 0) out->push_back("\\\\");
    for (std::size_t col = 0; col < n.cells[row].size(); ++col) {
      if (col > 0) out->push_back("&");
      expect_list(n.cells[row][col], out);
    }
  }
  out->push_back("\\end{array}");
}

void expect(const GenNode& n, std::vector<std::string>* out) {
  switch (n.k) {
    case GenNode::K::Durable:
      out->push_back(map_synonym(n.text));
      return;
    case GenNode::K::Space:
    case GenNode::K::FontAtom:
      return;  // deleted
    case GenNode::K::Wrap:
    case GenNode::K::FontCmd:
      expect_list(n.kids, out);  // spliced
      return;
    case GenNode::K::Cmd:
      out->push_back(n.text);
      for (const GenList& arg : n.args) expect_braced(arg, out);
      return;
    case GenNode::K::Script: {
      if (n.base_group) {
        expect_braced(n.base, out);
      } else {
        expect(n.base.front(), out);
      }
      std::vector<std::string> subs, sups;
      for (const GenScript& att : n.scripts) {
        expect_list(att.operand, att.mark == '_' ? &subs : &sups);
      }
      bool has_sub = false, has_sup = false;
      for (const GenScript& att : n.scripts) {
        (att.mark == '_' ? has_sub : has_sup) = true;
      }
      if (has_sub) {
        out->push_back("_");
        out->push_back("{");
        out->insert(out->end(), subs.begin(), subs.end());
        out->push_back("}");
      }
      if (has_sup) {
        out->push_back("^");
        out->push_back("{");
        out->insert(out->end(), sups.begin(), sups.end());
        out->push_back("}");
      }
      return;
    }
    case GenNode::K::Delim:
      if (n.open_d != ".") out->push_back(n.open_d);
      expect_list(n.kids, out);
      if (n.close_d != ".") out->push_back(n.close_d);
      return;
    case GenNode::K::ArrayKeptDelim:
    case GenNode::K::ArrayKeptFlank:
      out->push_back(n.open_d);
      expect_array_tokens(n, out);
      out->push_back(n.close_d);
      return;
    case GenNode::K::ArraySpliced:
      for (const auto& row : n.cells) {
        for (const GenList& cell : row) expect_list(cell, out);
      }
      return;
  }
}

// --- variants ----------------------------------------------------------------

void collect_nodes(GenList& nodes, std::vector<GenNode*>* out) {
  for (GenNode& n : nodes) {
    out->push_back(&n);
    collect_nodes(n.kids, out);
    for (GenList& arg : n.args) collect_nodes(arg, out);
    collect_nodes(n.base, out);
    for (GenScript& att : n.scripts) collect_nodes(att.operand, out);
    for (auto& row : n.cells) {
      for (GenList& cell : row) collect_nodes(cell, out);
    }
  }
}

// Wraps one random complete subtree in a redundant brace group. Array keep/
// splice decisions are encoded per-node (delimiters included), so any wrap
// point leaves the canonical form unchanged.
void wrap_random_node(Rand& r, GenList* root) {
  std::vector<GenNode*> candidates;
  collect_nodes(*root, &candidates);
  if (candidates.empty()) return;
  GenNode* target = candidates[r.below(candidates.size())];
  GenNode wrapper;
  wrapper.k = GenNode::K::Wrap;
  wrapper.kids.push_back(std::move(*target));
  *target = std::move(wrapper);
}

// Reorders script attachments on every Script node with an interleaving that
// keeps same-mark attachments in their original relative order.
void permute_scripts(Rand& r, GenList* nodes) {
  for (GenNode& n : *nodes) {
    permute_scripts(r, &n.kids);
    for (GenList& arg : n.args) permute_scripts(r, &arg);
    permute_scripts(r, &n.base);
    for (GenScript& att : n.scripts) permute_scripts(r, &att.operand);
    for (auto& row : n.cells) {
      for (GenList& cell : row) permute_scripts(r, &cell);
    }
    if (n.k != GenNode::K::Script || n.scripts.size() < 2) continue;
    std::vector<GenScript> subs, sups, merged;
    for (GenScript& att : n.scripts) {
      (att.mark == '_' ? subs : sups).push_back(std::move(att));
    }
    std::size_t si = 0, pi = 0;
    while (si < subs.size() || pi < sups.size()) {
      bool take_sub;
      if (si == subs.size()) take_sub = false;
      else if (pi == sups.size()) take_sub = true;
      else take_sub = r.below(2) == 0;
      merged.push_back(std::move(take_sub ? subs[si++] : sups[pi++]));
    }
    n.scripts = std::move(merged);
  }
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace

FixtureCase FixtureGen::next(std::size_t max_depth) {
  Rand r(rng_);
  GenList tree = gen_sequence(r, max_depth, true);

  FixtureCase out;
  expect_list(tree, &out.expected_canonical);
  if (out.expected_canonical.empty()) {
    // Everything generated was deletable; anchor the case with one atom.
    tree.push_back(gen_durable_atom(r));
    expect(tree.back(), &out.expected_canonical);
  }

  std::vector<std::string> src;
  emit_src_list(tree, &src);
  out.source = join(src);

  GenList braced = tree;
  wrap_random_node(r, &braced);
  src.clear();
  emit_src_list(braced, &src);
  out.braced_variant = join(src);

  GenList permuted = tree;
  permute_scripts(r, &permuted);
  src.clear();
  emit_src_list(permuted, &src);
  out.script_variant = join(src);
  return out;
}

void write_fixture_files(std::uint64_t seed, std::size_t count, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::ofstream sources(fs::path(out_dir) / "sources.txt");
  std::ofstream canonical(fs::path(out_dir) / "canonical.txt");
  std::ofstream braced(fs::path(out_dir) / "braced.txt");
  std::ofstream scripts(fs::path(out_dir) / "scripts.txt");
  if (!sources || !canonical || !braced || !scripts) {
    throw std::runtime_error("cannot create fixture files in " + out_dir);
  }
  FixtureGen gen(seed);
  for (std::size_t i = 0; i < count; ++i) {
    FixtureCase c = gen.next();
    sources << c.source << "\n";
    canonical << join(c.expected_canonical) << "\n";
    braced << c.braced_variant << "\n";
    scripts << c.script_variant << "\n";
  }
}

}  // namespace texcanon
