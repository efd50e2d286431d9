// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef TEXCANON_AST_HPP
#define TEXCANON_AST_HPP

#include <string>
#include <variant>
#include <vector>

#include "texcanon/token.hpp"

namespace texcanon {

struct ExprNode;

// A node sequence: group contents, delimiter-pair body, array cell, root.
using NodeList = std::vector<ExprNode>;

enum class ScriptMark { Sub, Sup };

// One '_' or '^' attachment in source order. The operand is stored as group
// contents whether or not the source braced it.
struct ScriptAttachment {
  ScriptMark mark = ScriptMark::Sub;
  NodeList operand;

  bool operator==(const ScriptAttachment&) const = default;
};

struct Atom {
  Token token;
  bool operator==(const Atom&) const = default;
};

// Explicit brace group.
struct Group {
  NodeList children;
  bool operator==(const Group&) const = default;
};

// Base with its script chain, source order preserved. base holds exactly one
// node (vector for layout with the incomplete element type).
struct Scripted {
  NodeList base;
  std::vector<ScriptAttachment> scripts;

  const ExprNode& base_node() const { return base.front(); }
  bool operator==(const Scripted&) const = default;
};

// Command with required brace-delimited arguments, e.g. \frac{1}{2}.
struct Command {
  Token name;
  std::vector<NodeList> args;
  bool operator==(const Command&) const = default;
};

// \begin{array}{colspec} rows \end{array}. col_spec holds the original
// indicator letters (l, c, r). Cells are node lists; an empty list is an
// empty cell.
struct Array {
  std::string col_spec;
  std::vector<std::vector<NodeList>> rows;
  bool operator==(const Array&) const = default;
};

// \left X body \right Y. Delimiters are the raw tokens; '.' is the null
// delimiter.
struct DelimPair {
  Token left;
  Token right;
  NodeList body;
  bool operator==(const DelimPair&) const = default;
};

struct ExprNode {
  std::variant<Atom, Group, Scripted, Command, Array, DelimPair> value;

  bool operator==(const ExprNode&) const = default;

  template <typename T>
  bool is() const { return std::holds_alternative<T>(value); }
  template <typename T>
  const T& as() const { return std::get<T>(value); }
  template <typename T>
  T& as() { return std::get<T>(value); }
};

inline ExprNode make_atom(Token tok) { return ExprNode{Atom{std::move(tok)}}; }
inline ExprNode make_atom(std::string text) { return make_atom(make_token(std::move(text))); }
inline ExprNode make_group(NodeList children) { return ExprNode{Group{std::move(children)}}; }

}  // namespace texcanon

#endif  // TEXCANON_AST_HPP
