// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#include "texcanon/norm_config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace texcanon {

NormConfig NormConfig::defaults() {
  NormConfig cfg;
  cfg.math_font_commands = {
      "\\mathcal", "\\mathbb", "\\boldsymbol", "\\mathbf", "\\mathrm", "\\mathit",
      "\\mathsf",  "\\mathtt", "\\mathfrak",   "\\operatorname",
      "\\bf",      "\\cal",    "\\rm",         "\\it",
  };
  cfg.whitespace_commands = {
      "\\quad", "\\qquad", "\\,", "\\;", "\\:", "\\!", "\\ ", "~",
      "\\hspace", "\\phantom", "\\negthinspace",
  };
  cfg.synonyms = {
      {"\\ge", "\\geq"},       {"\\le", "\\leq"},     {"\\ne", "\\neq"},
      {"\\to", "\\rightarrow"}, {"\\gets", "\\leftarrow"},
      {"\\dag", "\\dagger"},   {"\\land", "\\wedge"}, {"\\lor", "\\vee"},
      {"\\vert", "|"},         {"\\lvert", "|"},      {"\\rvert", "|"},
      {"\\Vert", "\\|"},       {"\\lbrace", "\\{"},   {"\\rbrace", "\\}"},
  };
  cfg.forbidden_tokens = {
      "\\cite", "\\label", "\\ref", "\\fbox", "\\mbox",
      "\\over", "\\atop", "\\def", "\\tag",
  };
  return cfg;
}

namespace {

[[noreturn]] void bad_line(const std::string& path, int lineno, const std::string& why) {
  std::ostringstream msg;
  msg << path << ":" << lineno << ": " << why;
  throw ConfigError(msg.str());
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// One entry per line; '#' comments; each line split on whitespace. A field
// may be double-quoted to contain significant spaces (e.g. the control-space
// command, a backslash followed by a space).
std::vector<std::pair<std::vector<std::string>, int>> read_table_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file: " + path);
  std::vector<std::pair<std::vector<std::string>, int>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::vector<std::string> fields;
    std::size_t i = 0;
    while (i < line.size()) {
      if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
        ++i;
        continue;
      }
      if (line[i] == '"') {
        auto close = line.find('"', i + 1);
        if (close == std::string::npos) bad_line(path, lineno, "unterminated quote");
        fields.push_back(line.substr(i + 1, close - i - 1));
        i = close + 1;
      } else {
        auto end = line.find_first_of(" \t\r", i);
        if (end == std::string::npos) end = line.size();
        fields.push_back(line.substr(i, end - i));
        i = end;
      }
    }
    if (!fields.empty()) out.emplace_back(std::move(fields), lineno);
  }
  return out;
}

void load_token_table(const std::string& path, std::set<std::string>* table) {
  for (const auto& [fields, lineno] : read_table_lines(path)) {
    if (fields.size() != 1) bad_line(path, lineno, "expected one token per line");
    table->insert(fields[0]);
  }
}

}  // namespace

void NormConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  // First pass: collect `key = value` pairs so `tables = replace` applies
  // regardless of its position.
  std::vector<std::tuple<std::string, std::string, int>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (strip(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) bad_line(path, lineno, "expected `key = value`");
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key.empty() || value.empty()) bad_line(path, lineno, "expected `key = value`");
    entries.emplace_back(std::move(key), std::move(value), lineno);
  }

  bool replace_tables = false;
  for (const auto& [key, value, ln] : entries) {
    if (key != "tables") continue;
    if (value == "replace") replace_tables = true;
    else if (value == "extend") replace_tables = false;
    else bad_line(path, ln, "tables must be 'extend' or 'replace'");
  }
  if (replace_tables) {
    synonyms.clear();
    math_font_commands.clear();
    whitespace_commands.clear();
    forbidden_tokens.clear();
  }

  auto resolve = [&base](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).string();
  };
  auto parse_on_off = [&path](const std::string& value, int ln) {
    if (value == "on") return true;
    if (value == "off") return false;
    bad_line(path, ln, "value must be 'on' or 'off'");
  };

  for (const auto& [key, value, ln] : entries) {
    if (key == "tables") {
      // handled above
    } else if (key == "mode") {
      if (value == "gt") mode = SerializeMode::GT;
      else if (value == "rendering") mode = SerializeMode::Rendering;
      else bad_line(path, ln, "mode must be 'gt' or 'rendering'");
    } else if (key == "synonyms") {
      std::string table_path = resolve(value);
      for (const auto& [fields, tln] : read_table_lines(table_path)) {
        if (fields.size() != 2) bad_line(table_path, tln, "expected `<from> <to>`");
        synonyms[fields[0]] = fields[1];
      }
    } else if (key == "mathfonts") {
      load_token_table(resolve(value), &math_font_commands);
    } else if (key == "whitespace") {
      load_token_table(resolve(value), &whitespace_commands);
    } else if (key == "forbidden") {
      load_token_table(resolve(value), &forbidden_tokens);
    } else if (key == "argspec") {
      std::string table_path = resolve(value);
      for (const auto& [fields, tln] : read_table_lines(table_path)) {
        if (fields.size() != 2) bad_line(table_path, tln, "expected `<command> <arity>`");
        int arity = 0;
        try {
          arity = std::stoi(fields[1]);
        } catch (const std::exception&) {
          bad_line(table_path, tln, "arity must be an integer");
        }
        if (arity < 0) bad_line(table_path, tln, "arity must be >= 0");
        argspec.set(fields[0], arity);
      }
    } else if (key == "rule.mathfonts") {
      rule_math_fonts = parse_on_off(value, ln);
    } else if (key == "rule.whitespace") {
      rule_whitespace = parse_on_off(value, ln);
    } else if (key == "rule.braces") {
      rule_braces = parse_on_off(value, ln);
    } else if (key == "rule.scripts") {
      rule_scripts = parse_on_off(value, ln);
    } else if (key == "rule.tokens") {
      rule_tokens = parse_on_off(value, ln);
    } else if (key == "rule.arrays") {
      rule_arrays = parse_on_off(value, ln);
    } else if (key == "max-input-length") {
      try {
        long n = std::stol(value);
        if (n <= 0) throw std::out_of_range("non-positive");
        tokenizer.max_length = static_cast<std::size_t>(n);
      } catch (const std::exception&) {
        bad_line(path, ln, "max-input-length must be a positive integer");
      }
    } else {
      bad_line(path, ln, "unknown key '" + key + "'");
    }
  }
  validate();
}

void NormConfig::validate() const {
  for (const auto& [key, value] : synonyms) {
    if (synonyms.count(value)) {
      throw ConfigError("synonym chain: '" + key + "' maps to '" + value +
                        "', which is itself a key");
    }
  }
  auto check_disjoint = [](const std::set<std::string>& a, const std::set<std::string>& b,
                           const char* an, const char* bn) {
    for (const std::string& t : a) {
      if (b.count(t)) {
        throw ConfigError(std::string("token '") + t + "' appears in both " + an + " and " + bn);
      }
    }
  };
  check_disjoint(math_font_commands, whitespace_commands, "mathfont", "whitespace");
  check_disjoint(math_font_commands, forbidden_tokens, "mathfont", "forbidden");
  check_disjoint(whitespace_commands, forbidden_tokens, "whitespace", "forbidden");
}

}  // namespace texcanon
