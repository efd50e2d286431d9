// Copyright 2026 The TexCanon Authors
//
// Licensed under the Apache License, Version 2.0.
// SPDX-License-Identifier: Apache-2.0

#include "texcanon/parser.hpp"

#include <functional>
#include <sstream>

namespace texcanon {

namespace {

[[noreturn]] void fail(ParseErrorCode code, const std::string& message) {
  throw ParseError(code, message);
}

bool is_delimiter_capable(const Token& t) {
  switch (t.kind) {
    case TokenKind::Command:
    case TokenKind::Letter:
    case TokenKind::Digit:
    case TokenKind::Other:
      return true;
    default:
      return false;
  }
}

class Parser {
 public:
  Parser(const TokenSeq& seq, const ArgSpec& argspec) : tokens_(seq.tokens), argspec_(argspec) {}

  ExprNode parse_root() {
    NodeList children = parse_sequence(nullptr);
    if (!at_end()) {
      // Only a stray '}' can stop the top-level sequence.
      fail(ParseErrorCode::UnbalancedBraces, "unmatched '}' at token " + std::to_string(pos_));
    }
    return make_group(std::move(children));
  }

 private:
  using StopPredicate = bool (*)(const Token&);

  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }

  static bool stop_cell(const Token& t) {
    return t.kind == TokenKind::AlignTab || t.kind == TokenKind::RowBreak ||
           t.kind == TokenKind::EnvEnd;
  }
  static bool stop_right(const Token& t) {
    return t.kind == TokenKind::Command && t.text == "\\right";
  }

  NodeList parse_sequence(StopPredicate stop) {
    NodeList list;
    for (;;) {
      if (at_end()) break;
      const Token& t = peek();
      if (t.kind == TokenKind::GroupClose) break;
      if (stop && stop(t)) break;
      if (t.kind == TokenKind::Subscript || t.kind == TokenKind::Superscript) {
        attach_script(list);
        continue;
      }
      list.push_back(parse_primary());
    }
    return list;
  }

  void attach_script(NodeList& list) {
    const Token& marker = take();
    if (list.empty()) {
      fail(ParseErrorCode::DanglingScript, "'" + marker.text + "' with no base");
    }
    ScriptAttachment att;
    att.mark = marker.kind == TokenKind::Subscript ? ScriptMark::Sub : ScriptMark::Sup;
    att.operand = parse_operand(marker.text);

    ExprNode& base = list.back();
    if (base.is<Scripted>()) {
      base.as<Scripted>().scripts.push_back(std::move(att));
    } else {
      Scripted scripted;
      scripted.base.push_back(std::move(base));
      scripted.scripts.push_back(std::move(att));
      base = ExprNode{std::move(scripted)};
    }
  }

  NodeList parse_operand(const std::string& marker) {
    if (at_end()) {
      fail(ParseErrorCode::DanglingScript, "'" + marker + "' with no operand");
    }
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::GroupOpen:
        return parse_group_contents();
      case TokenKind::Letter:
      case TokenKind::Digit:
      case TokenKind::Other:
        return {make_atom(take())};
      case TokenKind::Command:
        if (t.text == "\\left" || t.text == "\\right") break;
        return {parse_command()};
      default:
        break;
    }
    fail(ParseErrorCode::DanglingScript,
         "'" + marker + "' followed by '" + t.text + "'");
  }

  NodeList parse_group_contents() {
    take();  // '{'
    NodeList children = parse_sequence(nullptr);
    if (at_end()) {
      fail(ParseErrorCode::UnbalancedBraces, "missing '}'");
    }
    take();  // '}'
    return children;
  }

  ExprNode parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::GroupOpen:
        return make_group(parse_group_contents());
      case TokenKind::Letter:
      case TokenKind::Digit:
      case TokenKind::Other:
      case TokenKind::AlignTab:   // lenient outside array cells
      case TokenKind::RowBreak:   // lenient: bare '\\' in multi-line fragments
        return make_atom(take());
      case TokenKind::EnvBegin:
        return parse_environment();
      case TokenKind::EnvEnd:
        fail(ParseErrorCode::UnclosedEnvironment, "unmatched '" + t.text + "'");
      case TokenKind::Command:
        if (t.text == "\\left") return parse_delim_pair();
        if (t.text == "\\right") {
          fail(ParseErrorCode::MismatchedLeftRight, "\\right without \\left");
        }
        return parse_command();
      default:
        break;
    }
    fail(ParseErrorCode::UnbalancedBraces, "unexpected token '" + t.text + "'");
  }

  ExprNode parse_command() {
    Token name = take();
    int arity = argspec_.arity(name.text);
    if (arity == 0) return make_atom(std::move(name));
    Command cmd;
    cmd.name = std::move(name);
    for (int i = 0; i < arity; ++i) {
      cmd.args.push_back(parse_argument(cmd.name.text));
    }
    return ExprNode{std::move(cmd)};
  }

  NodeList parse_argument(const std::string& command) {
    if (at_end()) {
      fail(ParseErrorCode::MissingArgument, command + " missing argument");
    }
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::GroupOpen:
        return parse_group_contents();
      case TokenKind::Letter:
      case TokenKind::Digit:
      case TokenKind::Other:
        return {make_atom(take())};
      case TokenKind::Command:
        if (t.text == "\\left" || t.text == "\\right") break;
        return {parse_command()};
      default:
        break;
    }
    fail(ParseErrorCode::MissingArgument,
         command + " argument cannot start with '" + t.text + "'");
  }

  ExprNode parse_delim_pair() {
    take();  // \left
    if (at_end() || !is_delimiter_capable(peek())) {
      fail(ParseErrorCode::MismatchedLeftRight, "\\left without a delimiter");
    }
    DelimPair pair;
    pair.left = take();
    pair.body = parse_sequence(&stop_right);
    if (at_end()) {
      fail(ParseErrorCode::MismatchedLeftRight, "\\left never closed by \\right");
    }
    if (peek().kind == TokenKind::GroupClose) {
      fail(ParseErrorCode::MismatchedLeftRight, "\\left closed by '}'");
    }
    take();  // \right
    if (at_end() || !is_delimiter_capable(peek())) {
      fail(ParseErrorCode::MismatchedLeftRight, "\\right without a delimiter");
    }
    pair.right = take();
    return ExprNode{std::move(pair)};
  }

  ExprNode parse_environment() {
    Token begin = take();
    std::string name = env_name(begin);
    if (name != "array") {
      fail(ParseErrorCode::UnsupportedEnvironment, "unsupported environment '" + name + "'");
    }
    Array array;
    array.col_spec = parse_col_spec();

    std::vector<NodeList> row;
    for (;;) {
      row.push_back(parse_sequence(&stop_cell));
      if (at_end()) {
        fail(ParseErrorCode::UnclosedEnvironment, "\\begin{array} never closed");
      }
      const Token& t = peek();
      if (t.kind == TokenKind::GroupClose) {
        fail(ParseErrorCode::UnbalancedBraces, "stray '}' in array");
      }
      if (t.kind == TokenKind::AlignTab) {
        take();
        continue;
      }
      if (t.kind == TokenKind::RowBreak) {
        take();
        array.rows.push_back(std::move(row));
        row.clear();
        continue;
      }
      // EnvEnd
      if (env_name(t) != "array") {
        fail(ParseErrorCode::UnclosedEnvironment,
             "\\begin{array} closed by '" + t.text + "'");
      }
      take();
      break;
    }
    // A trailing '\\' leaves one empty pending cell; drop it unless the
    // environment has no other rows (then it stands for the empty array).
    bool pending_is_empty = row.size() == 1 && row.front().empty();
    if (!pending_is_empty || array.rows.empty()) {
      array.rows.push_back(std::move(row));
    }
    return ExprNode{std::move(array)};
  }

  std::string parse_col_spec() {
    if (at_end() || peek().kind != TokenKind::GroupOpen) {
      fail(ParseErrorCode::BadColumnSpec, "array missing column spec group");
    }
    take();  // '{'
    std::string spec;
    for (;;) {
      if (at_end()) {
        fail(ParseErrorCode::UnbalancedBraces, "missing '}' in column spec");
      }
      const Token& t = take();
      if (t.kind == TokenKind::GroupClose) break;
      if (t.kind == TokenKind::Letter &&
          (t.text == "l" || t.text == "c" || t.text == "r")) {
        spec += t.text;
        continue;
      }
      fail(ParseErrorCode::BadColumnSpec, "unsupported column indicator '" + t.text + "'");
    }
    return spec;
  }

  const std::vector<Token>& tokens_;
  const ArgSpec& argspec_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

class Serializer {
 public:
  explicit Serializer(const SerializeOptions& opts) : opts_(opts) {}

  std::vector<Token> run(const ExprNode& root) {
    if (root.is<Group>()) {
      emit_sequence(root.as<Group>().children);
    } else {
      emit_node(root);
    }
    return std::move(out_);
  }

 private:
  void push(const Token& t) { out_.push_back(t); }
  void push(std::string text) { out_.push_back(make_token(std::move(text))); }

  void emit_sequence(const NodeList& nodes) {
    for (const ExprNode& n : nodes) emit_node(n);
  }

  // Sequence position: under brace discipline a Group here is a pure wrapper
  // and is spliced away.
  void emit_node(const ExprNode& node) {
    if (node.is<Group>()) {
      if (opts_.brace_discipline) {
        emit_sequence(node.as<Group>().children);
      } else {
        push("{");
        emit_sequence(node.as<Group>().children);
        push("}");
      }
      return;
    }
    if (node.is<Atom>()) {
      push(node.as<Atom>().token);
      return;
    }
    if (node.is<Scripted>()) {
      emit_scripted(node.as<Scripted>());
      return;
    }
    if (node.is<Command>()) {
      emit_command(node.as<Command>());
      return;
    }
    if (node.is<Array>()) {
      emit_array(node.as<Array>());
      return;
    }
    emit_delim_pair(node.as<DelimPair>());
  }

  void emit_scripted(const Scripted& s) {
    emit_script_base(s.base_node());
    for (const ScriptAttachment& att : s.scripts) {
      push(att.mark == ScriptMark::Sub ? "_" : "^");
      emit_braced(att.operand);
    }
  }

  // A Group base keeps its braces only when splicing would re-bind the
  // script: more than one child, or a child that is itself scripted.
  void emit_script_base(const ExprNode& base) {
    if (!base.is<Group>() || !opts_.brace_discipline) {
      emit_node(base);
      return;
    }
    const NodeList& children = base.as<Group>().children;
    if (children.size() == 1 && !children.front().is<Scripted>()) {
      emit_script_base(children.front());
      return;
    }
    push("{");
    emit_sequence(children);
    push("}");
  }

  // Script operands and command arguments are always braced.
  void emit_braced(const NodeList& contents) {
    push("{");
    emit_sequence(contents);
    push("}");
  }

  void emit_command(const Command& c) {
    push(c.name);
    for (const NodeList& arg : c.args) emit_braced(arg);
  }

  void emit_array(const Array& a) {
    bool gt = opts_.mode == SerializeMode::GT && opts_.array_gt_rewrites;
    push("\\begin{array}");
    push("{");
    for (char col : a.col_spec) push(std::string(1, gt ? 'c' : col));
    push("}");
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      if (r > 0) push("\\\\");
      const auto& row = a.rows[r];
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) push("&");
        emit_sequence(row[c]);
      }
    }
    push("\\end{array}");
  }

  void emit_delim_pair(const DelimPair& d) {
    bool gt = opts_.mode == SerializeMode::GT && opts_.array_gt_rewrites;
    if (gt) {
      if (d.left.text != ".") push(d.left);
      emit_sequence(d.body);
      if (d.right.text != ".") push(d.right);
    } else {
      push("\\left");
      push(d.left);
      emit_sequence(d.body);
      push("\\right");
      push(d.right);
    }
  }

  SerializeOptions opts_;
  std::vector<Token> out_;
};

void dump_node(const ExprNode& node, int depth, std::ostringstream& out);

void dump_list(const char* label, const NodeList& nodes, int depth, std::ostringstream& out) {
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << label << "\n";
  for (const ExprNode& n : nodes) dump_node(n, depth + 1, out);
}

void dump_node(const ExprNode& node, int depth, std::ostringstream& out) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  if (node.is<Atom>()) {
    out << pad << "Atom '" << node.as<Atom>().token.text << "'\n";
  } else if (node.is<Group>()) {
    out << pad << "Group\n";
    for (const ExprNode& c : node.as<Group>().children) dump_node(c, depth + 1, out);
  } else if (node.is<Scripted>()) {
    const Scripted& s = node.as<Scripted>();
    out << pad << "Scripted\n";
    dump_list("base:", s.base, depth + 1, out);
    for (const ScriptAttachment& att : s.scripts) {
      dump_list(att.mark == ScriptMark::Sub ? "sub:" : "sup:", att.operand, depth + 1, out);
    }
  } else if (node.is<Command>()) {
    const Command& c = node.as<Command>();
    out << pad << "Command '" << c.name.text << "'\n";
    for (const NodeList& arg : c.args) dump_list("arg:", arg, depth + 1, out);
  } else if (node.is<Array>()) {
    const Array& a = node.as<Array>();
    out << pad << "Array colspec=" << a.col_spec << "\n";
    for (const auto& row : a.rows) {
      out << pad << "  row\n";
      for (const NodeList& cell : row) dump_list("cell:", cell, depth + 2, out);
    }
  } else {
    const DelimPair& d = node.as<DelimPair>();
    out << pad << "DelimPair '" << d.left.text << "' '" << d.right.text << "'\n";
    for (const ExprNode& c : d.body) dump_node(c, depth + 1, out);
  }
}

}  // namespace

const ArgSpec& ArgSpec::defaults() {
  static const ArgSpec spec = [] {
    ArgSpec s;
    for (const char* name :
         {"\\sqrt", "\\mathcal", "\\mathbb", "\\boldsymbol", "\\mathbf", "\\mathrm",
          "\\mathit", "\\mathsf", "\\mathtt", "\\mathfrak", "\\operatorname", "\\hspace",
          "\\phantom", "\\vspace", "\\overline", "\\underline", "\\hat", "\\tilde", "\\vec",
          "\\dot", "\\ddot", "\\bar", "\\check", "\\breve", "\\acute", "\\grave",
          "\\widehat", "\\widetilde", "\\overrightarrow", "\\overleftarrow", "\\underbrace",
          "\\overbrace", "\\text", "\\textrm", "\\textbf", "\\textit", "\\mbox", "\\fbox"}) {
      s.set(name, 1);
    }
    for (const char* name : {"\\frac", "\\binom", "\\stackrel", "\\overset", "\\underset",
                             "\\dfrac", "\\tfrac", "\\cfrac"}) {
      s.set(name, 2);
    }
    return s;
  }();
  return spec;
}

ExprNode parse(const TokenSeq& seq, const ArgSpec& argspec) {
  Parser parser(seq, argspec);
  return parser.parse_root();
}

std::vector<Token> serialize(const ExprNode& root, const SerializeOptions& opts) {
  Serializer s(opts);
  return s.run(root);
}

std::string dump_tree(const ExprNode& root) {
  std::ostringstream out;
  dump_node(root, 0, out);
  return out.str();
}

}  // namespace texcanon
