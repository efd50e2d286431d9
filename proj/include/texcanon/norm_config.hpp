// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#ifndef TEXCANON_NORM_CONFIG_HPP
#define TEXCANON_NORM_CONFIG_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "texcanon/parser.hpp"
#include "texcanon/tokenizer.hpp"

namespace texcanon {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Table-driven normalization settings. The shipped defaults cover the common
// redundant commands; config files extend or replace them (see load_file).
struct NormConfig {
  std::set<std::string> math_font_commands;
  std::set<std::string> whitespace_commands;
  std::map<std::string, std::string> synonyms;
  std::set<std::string> forbidden_tokens;
  SerializeMode mode = SerializeMode::GT;

  // Rule family toggles, all on by default.
  bool rule_math_fonts = true;   // unwrap font commands
  bool rule_whitespace = true;   // drop spacing commands
  bool rule_braces = true;       // brace discipline
  bool rule_scripts = true;      // merge script chains
  bool rule_tokens = true;       // forbidden rejection + synonym mapping
  bool rule_arrays = true;       // array checks and rewrites

  ArgSpec argspec = ArgSpec::defaults();
  TokenizerOptions tokenizer;

  static NormConfig defaults();

  // Loads a plain `key = value` config file. Recognized keys:
  //   mode = gt | rendering
  //   tables = extend | replace   (replace empties the four token tables
  //                                before table files are read)
  //   synonyms | mathfonts | whitespace | forbidden | argspec = <table path>
  //   rule.mathfonts | rule.whitespace | rule.braces | rule.scripts
  //     | rule.tokens | rule.arrays = on | off
  //   max-input-length = <count>
  // Table paths resolve relative to the config file. A table file holds one
  // entry per line ('#' comments): a single token, or `<from> <to>` for
  // synonyms and `<command> <arity>` for argspec. Double-quote a field to
  // include significant spaces. Throws ConfigError with a file:line
  // diagnostic on malformed input.
  void load_file(const std::string& path);

  // Enforces the table invariants: no synonym chain (no mapped value is also
  // a key) and pairwise-disjoint command sets. Throws ConfigError.
  void validate() const;
};

}  // namespace texcanon

#endif  // TEXCANON_NORM_CONFIG_HPP
