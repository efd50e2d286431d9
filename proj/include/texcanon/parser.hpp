// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef TEXCANON_PARSER_HPP
#define TEXCANON_PARSER_HPP

#include <map>
#include <stdexcept>
#include <string>

#include "texcanon/ast.hpp"
#include "texcanon/token.hpp"

namespace texcanon {

enum class ParseErrorCode {
  UnbalancedBraces,
  DanglingScript,
  UnclosedEnvironment,
  UnsupportedEnvironment,
  MismatchedLeftRight,
  BadColumnSpec,
  MissingArgument,
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ParseErrorCode code() const { return code_; }

 private:
  ParseErrorCode code_;
};

// Command name -> number of required brace-delimited arguments. Commands not
// listed take no arguments.
class ArgSpec {
 public:
  static const ArgSpec& defaults();

  int arity(const std::string& command) const {
    auto it = table_.find(command);
    return it == table_.end() ? 0 : it->second;
  }
  void set(const std::string& command, int arity) { table_[command] = arity; }

 private:
  std::map<std::string, int> table_;
};

// Build the structural tree: braces become Group nodes, '_'/'^' attach to the
// nearest preceding node preserving source order, \begin{array}...\end{array}
// becomes an Array, \left X ... \right Y becomes a DelimPair.
ExprNode parse(const TokenSeq& seq, const ArgSpec& argspec = ArgSpec::defaults());

enum class SerializeMode { GT, Rendering };

struct SerializeOptions {
  SerializeMode mode = SerializeMode::GT;
  // Brace discipline: emit braces only where structurally required and brace
  // script operands / command arguments even when single-token. When off,
  // every Group is emitted verbatim.
  bool brace_discipline = true;
  // Array handling owns the GT-mode rewrites: all-'c' column spec and
  // \left/\right removal. When off, both are emitted as stored regardless of
  // mode.
  bool array_gt_rewrites = true;
};

// Emit tokens for a tree. In Rendering mode DelimPair keeps \left/\right and
// Array keeps the original column spec; in GT mode DelimPair emits only the
// delimiter symbols ('.' vanishes) and Array emits an all-'c' spec.
std::vector<Token> serialize(const ExprNode& root, const SerializeOptions& opts = {});

// Indented tree dump for inspection; not a stability-guaranteed format.
std::string dump_tree(const ExprNode& root);

}  // namespace texcanon

#endif  // TEXCANON_PARSER_HPP
