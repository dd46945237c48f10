// Copyright 2026 The icnl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Line-oriented circuit language (.icl): lexer, recursive-descent parser with
// diagnostics, and the canonical formatter.
//
//   # leading comments are kept as the document header
//   paths s1 i1 s2 i2
//   param PHI = pi / 2
//   init |0000> + (0, 1) |HH00>
//   nl s1 i1
//   phase i1 PHI
//   unitary s1 [[(0, 1), 0], [0, (0, -1)]]
//   unitary s2 i2 householder [(sqrt(0.5), 0), 0, 0, (sqrt(0.5), 0)]
//   cnot i1 when s1=H, s2=0
//   trace_keep s2 i2
//   sweep PHI from 0 to 2 * pi count 64

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "icnl/circuit.hpp"
#include "icnl/gates.hpp"

namespace icnl {

enum class DiagnosticKind { Lexical, Syntax, Semantic };

inline std::string_view to_string(DiagnosticKind k) {
  switch (k) {
    case DiagnosticKind::Lexical: return "lexical";
    case DiagnosticKind::Syntax: return "syntax";
    case DiagnosticKind::Semantic: return "semantic";
  }
  return "?";
}

struct Diagnostic {
  int line = 0;
  int column = 0;
  DiagnosticKind kind = DiagnosticKind::Syntax;
  std::string message;
  std::string token;     // offending token text, may be empty at end of line
  std::string expected;  // hint, may be empty
};

struct ParseResult {
  std::optional<Circuit> doc;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return doc.has_value(); }
};

namespace dsl {

enum class Tok { Ident, Number, Ket, LParen, RParen, LBracket, RBracket, Comma, Plus, Minus, Star, Slash, Equals, Newline, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

inline std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Ket: return "ket literal";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Equals: return "'='";
    case Tok::Newline: return "end of line";
    case Tok::End: return "end of file";
  }
  return "?";
}

struct LexResult {
  std::vector<Token> tokens;
  std::vector<std::string> header;
  std::vector<Diagnostic> diagnostics;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
inline bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

/// Splits text into tokens. Lines that fail to lex are dropped up to their
/// newline, so the parser still sees the statement boundary.
inline LexResult lex(std::string_view text) {
  LexResult out;
  int line = 1;
  std::size_t line_start = 0;
  bool in_header = true;
  std::size_t i = 0;
  auto col = [&](std::size_t at) { return static_cast<int>(at - line_start) + 1; };
  auto fail = [&](std::size_t at, std::string msg, std::string tok) {
    out.diagnostics.push_back({line, col(at), DiagnosticKind::Lexical, std::move(msg), std::move(tok), ""});
    while (!out.tokens.empty() && out.tokens.back().line == line && out.tokens.back().kind != Tok::Newline)
      out.tokens.pop_back();
    while (i < text.size() && text[i] != '\n') ++i;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      out.tokens.push_back({Tok::Newline, "", line, col(i)});
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') {
      std::size_t e = text.find('\n', i);
      if (e == std::string_view::npos) e = text.size();
      const bool line_is_comment = out.tokens.empty() || out.tokens.back().kind == Tok::Newline;
      if (in_header && line_is_comment) {
        std::string_view h = text.substr(i + 1, e - i - 1);
        if (!h.empty() && h.back() == '\r') h.remove_suffix(1);
        out.header.emplace_back(h);
      }
      i = e;
      continue;
    }
    in_header = false;
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < text.size() && ident_char(text[i])) ++i;
      out.tokens.push_back({Tok::Ident, std::string(text.substr(start, i - start)), line, col(start)});
      continue;
    }
    if (digit(c) || (c == '.' && i + 1 < text.size() && digit(text[i + 1]))) {
      while (i < text.size() && digit(text[i])) ++i;
      if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && digit(text[i])) ++i;
      }
      if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
        if (j >= text.size() || !digit(text[j])) {
          std::size_t e = j;
          while (e < text.size() && ident_char(text[e])) ++e;
          fail(start, "malformed number", std::string(text.substr(start, e - start)));
          continue;
        }
        i = j;
        while (i < text.size() && digit(text[i])) ++i;
      }
      if (i < text.size() && (ident_char(text[i]) || text[i] == '.')) {
        std::size_t e = i;
        while (e < text.size() && (ident_char(text[e]) || text[e] == '.')) ++e;
        fail(start, "malformed number", std::string(text.substr(start, e - start)));
        continue;
      }
      out.tokens.push_back({Tok::Number, std::string(text.substr(start, i - start)), line, col(start)});
      continue;
    }
    if (c == '|') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '>' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '>') {
        fail(start, "unterminated ket literal", std::string(text.substr(start, j - start)));
        continue;
      }
      const std::string body(text.substr(i + 1, j - i - 1));
      bool good = !body.empty();
      for (char s : body) good = good && is_qutrit_symbol(s);
      if (!good) {
        i = j + 1;
        fail(start, "ket symbols must be 0, H or V", "|" + body + ">");
        continue;
      }
      out.tokens.push_back({Tok::Ket, body, line, col(start)});
      i = j + 1;
      continue;
    }
    Tok t;
    switch (c) {
      case '(': t = Tok::LParen; break;
      case ')': t = Tok::RParen; break;
      case '[': t = Tok::LBracket; break;
      case ']': t = Tok::RBracket; break;
      case ',': t = Tok::Comma; break;
      case '+': t = Tok::Plus; break;
      case '-': t = Tok::Minus; break;
      case '*': t = Tok::Star; break;
      case '/': t = Tok::Slash; break;
      case '=': t = Tok::Equals; break;
      default: {
        // Whole UTF-8 sequence for the message.
        std::size_t e = i + 1;
        while (e < text.size() && (static_cast<unsigned char>(text[e]) & 0xC0) == 0x80) ++e;
        fail(start, "unexpected character", std::string(text.substr(start, e - start)));
        continue;
      }
    }
    out.tokens.push_back({t, std::string(1, c), line, col(start)});
    ++i;
  }
  out.tokens.push_back({Tok::Newline, "", line, col(i)});
  out.tokens.push_back({Tok::End, "", line, col(i)});
  return out;
}

inline const std::set<std::string, std::less<>>& reserved_words() {
  static const std::set<std::string, std::less<>> words = {
      "paths", "param",   "init",      "nl",     "nl1p",  "phase",      "hwp",  "unitary", "align",
      "bs",    "object",  "gcnot",     "galpha", "cnot",  "cg",         "measure", "trace_keep", "sweep",
      "pi",    "sqrt",    "sin",       "cos",    "exp",   "X",          "H",    "V",       "householder",
      "when",  "symmetric", "from",    "to",     "count", "values"};
  return words;
}

struct SyntaxError {
  Diagnostic diag;
};

class Parser {
 public:
  explicit Parser(LexResult lexed) : lx_(std::move(lexed)) {}

  /// Parses the whole input as one expression over the names in `known`.
  std::optional<Expr> expression_only(const std::vector<std::string>& known, std::vector<Diagnostic>& diags) {
    diags = lx_.diagnostics;
    if (!diags.empty()) return std::nullopt;
    for (const auto& k : known) env_[k] = 0.0;
    try {
      if (peek().kind == Tok::Newline || peek().kind == Tok::End) unexpected(peek(), "expression");
      Expr e = expr();
      if (peek().kind != Tok::Newline) unexpected(peek(), "end of expression");
      return e;
    } catch (const SyntaxError& err) {
      diags.push_back(err.diag);
      return std::nullopt;
    }
  }

  ParseResult run() {
    ParseResult res;
    res.diagnostics = lx_.diagnostics;
    doc_.header = lx_.header;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Newline) {
        ++pos_;
        continue;
      }
      try {
        statement();
      } catch (const SyntaxError& e) {
        res.diagnostics.push_back(e.diag);
        while (peek().kind != Tok::Newline && peek().kind != Tok::End) ++pos_;
      }
    }
    if (!have_paths_ && !paths_seen_) {
      const bool reported = std::any_of(res.diagnostics.begin(), res.diagnostics.end(),
                                        [](const Diagnostic& d) { return d.message == "missing paths declaration"; });
      if (!reported) res.diagnostics.push_back({1, 1, DiagnosticKind::Semantic, "missing paths declaration", "", "paths"});
    }
    std::stable_sort(res.diagnostics.begin(), res.diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
      return a.line != b.line ? a.line < b.line : a.column < b.column;
    });
    if (res.diagnostics.empty()) res.doc = std::move(doc_);
    return res;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return lx_.tokens[std::min(pos_ + ahead, lx_.tokens.size() - 1)];
  }
  const Token& next() { return lx_.tokens[pos_++]; }

  [[noreturn]] void error(const Token& at, DiagnosticKind k, std::string msg, std::string expected = "") const {
    throw SyntaxError{{at.line, at.column, k, std::move(msg), at.text, std::move(expected)}};
  }
  [[noreturn]] void unexpected(const Token& at, const std::string& expected) const {
    std::string found = at.text.empty() ? std::string(describe(at.kind)) : "'" + at.text + "'";
    if (at.kind == Tok::Ket) found = "'|" + at.text + ">'";
    error(at, DiagnosticKind::Syntax, "unexpected " + found, expected);
  }

  const Token& expect(Tok t, const std::string& expected) {
    if (peek().kind != t) unexpected(peek(), expected);
    return next();
  }
  bool accept(Tok t) {
    if (peek().kind != t) return false;
    ++pos_;
    return true;
  }
  bool accept_word(std::string_view w) {
    if (peek().kind != Tok::Ident || peek().text != w) return false;
    ++pos_;
    return true;
  }
  void end_of_statement() {
    if (peek().kind != Tok::Newline && peek().kind != Tok::End) unexpected(peek(), "end of line");
  }

  void statement() {
    const Token& kw = peek();
    if (kw.kind != Tok::Ident) unexpected(kw, "statement keyword");
    const std::string w = kw.text;
    ++pos_;
    if (w == "paths") return paths_stmt(kw);
    if (!have_paths_) {
      // A rejected declaration was already reported; skip what depends on it.
      if (paths_seen_) {
        while (peek().kind != Tok::Newline && peek().kind != Tok::End) ++pos_;
        return;
      }
      error(kw, DiagnosticKind::Semantic, "missing paths declaration", "paths");
    }
    if (w == "param") return param_stmt();
    if (w == "init") return init_stmt(kw);
    if (w == "sweep") return sweep_stmt(kw);
    gate_stmt(kw, w);
  }

  void paths_stmt(const Token& kw) {
    if (have_paths_) error(kw, DiagnosticKind::Semantic, "duplicate paths declaration");
    paths_seen_ = true;
    std::vector<std::string> names;
    while (peek().kind == Tok::Ident) {
      const Token& t = next();
      if (reserved_words().count(t.text)) error(t, DiagnosticKind::Semantic, "'" + t.text + "' is a reserved name");
      if (std::find(names.begin(), names.end(), t.text) != names.end())
        error(t, DiagnosticKind::Semantic, "path '" + t.text + "' declared twice");
      names.push_back(t.text);
    }
    if (names.empty()) unexpected(peek(), "path name");
    end_of_statement();
    doc_.paths = std::move(names);
    have_paths_ = true;
  }

  void param_stmt() {
    const Token& name = expect(Tok::Ident, "parameter name");
    if (reserved_words().count(name.text))
      error(name, DiagnosticKind::Semantic, "'" + name.text + "' is a reserved name");
    if (std::find(doc_.paths.begin(), doc_.paths.end(), name.text) != doc_.paths.end())
      error(name, DiagnosticKind::Semantic, "'" + name.text + "' is already a path name");
    if (env_.count(name.text)) error(name, DiagnosticKind::Semantic, "parameter '" + name.text + "' defined twice");
    expect(Tok::Equals, "'='");
    const Token& at = peek();
    Expr e = expr();
    end_of_statement();
    env_[name.text] = evaluate(e, at);
    doc_.params.push_back({name.text, std::move(e)});
  }

  void init_stmt(const Token& kw) {
    if (!doc_.init.empty()) error(kw, DiagnosticKind::Semantic, "duplicate init statement");
    std::vector<InitTerm> terms;
    do {
      InitTerm t;
      if (peek().kind != Tok::Ket) {
        const Token& at = peek();
        t.coefficient = complex_value(true);
        evaluate(*t.coefficient, at);
      }
      const Token& k = expect(Tok::Ket, "ket literal");
      if (k.text.size() != doc_.paths.size())
        error(k, DiagnosticKind::Semantic,
              "ket has " + std::to_string(k.text.size()) + " symbols but " + std::to_string(doc_.paths.size()) +
                  " paths are declared");
      t.ket = k.text;
      terms.push_back(std::move(t));
    } while (accept(Tok::Plus));
    end_of_statement();
    doc_.init = std::move(terms);
  }

  void sweep_stmt(const Token& kw) {
    if (doc_.sweep) error(kw, DiagnosticKind::Semantic, "duplicate sweep directive");
    const Token& name = expect(Tok::Ident, "parameter name");
    if (!env_.count(name.text)) error(name, DiagnosticKind::Semantic, "unknown parameter '" + name.text + "'");
    SweepSpec s;
    s.param = name.text;
    if (accept_word("from")) {
      const Token& a = peek();
      s.lo = expr();
      evaluate(*s.lo, a);
      if (!accept_word("to")) unexpected(peek(), "'to'");
      const Token& b = peek();
      s.hi = expr();
      evaluate(*s.hi, b);
      if (!accept_word("count")) unexpected(peek(), "'count'");
      const Token& n = expect(Tok::Number, "point count");
      int count = 0;
      auto [p, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), count);
      if (ec != std::errc() || p != n.text.data() + n.text.size() || count < 1)
        error(n, DiagnosticKind::Semantic, "sweep count must be a positive integer");
      s.count = count;
    } else if (accept_word("values")) {
      expect(Tok::LBracket, "'['");
      do {
        const Token& a = peek();
        s.values.push_back(expr());
        evaluate(s.values.back(), a);
      } while (accept(Tok::Comma));
      expect(Tok::RBracket, "']'");
    } else {
      unexpected(peek(), "'from' or 'values'");
    }
    end_of_statement();
    doc_.sweep = std::move(s);
  }

  std::string path_name() {
    const Token& t = expect(Tok::Ident, "path name");
    if (std::find(doc_.paths.begin(), doc_.paths.end(), t.text) == doc_.paths.end())
      error(t, DiagnosticKind::Semantic, "undeclared path '" + t.text + "'");
    return t.text;
  }

  std::vector<std::string> path_list(const Token& kw, std::size_t want) {
    std::vector<std::string> out;
    std::vector<const Token*> where;
    for (std::size_t k = 0; k < want; ++k) {
      where.push_back(&peek());
      out.push_back(path_name());
    }
    for (std::size_t a = 0; a < out.size(); ++a)
      for (std::size_t b = 0; b < a; ++b)
        if (out[a] == out[b]) error(*where[a], DiagnosticKind::Semantic, kw.text + " targets must be distinct paths");
    return out;
  }

  static bool is_word_after_paths(const std::string& w) {
    return w == "X" || w == "H" || w == "householder" || w == "symmetric" || w == "when";
  }

  // Counts the identifiers naming declared paths at the cursor.
  std::size_t declared_run() const {
    std::size_t n = 0;
    while (peek(n).kind == Tok::Ident &&
           std::find(doc_.paths.begin(), doc_.paths.end(), peek(n).text) != doc_.paths.end())
      ++n;
    return n;
  }

  // Arity is judged from the identifiers on the line, so `nl s1` reports the
  // rule rather than a missing token. `only_paths` gates take nothing else.
  void arity(const Token& kw, std::size_t want, bool only_paths = false) {
    std::size_t n = 0;
    while (peek(n).kind == Tok::Ident && !is_word_after_paths(peek(n).text)) ++n;
    const bool line_ends = peek(n).kind == Tok::Newline || peek(n).kind == Tok::End;
    if ((n < want && line_ends) || (only_paths && n > want && line_ends))
      error(kw, DiagnosticKind::Semantic,
            kw.text + " requires " + std::to_string(want) + (want == 1 ? " path" : " paths"), "path name");
  }

  void gate_stmt(const Token& kw, const std::string& w) {
    GateApplication g;
    if (w == "nl") {
      arity(kw, 2, true);
      g = op::nl("", "");
      g.targets = path_list(kw, 2);
    } else if (w == "nl1p") {
      arity(kw, 3, true);
      g = op::nl1p("", "", "");
      g.targets = path_list(kw, 3);
    } else if (w == "phase") {
      arity(kw, 1);
      g = op::phase("", Expr());
      g.targets = path_list(kw, 1);
      const Token& at = peek();
      if (at.kind == Tok::Newline || at.kind == Tok::End) unexpected(at, "phase expression");
      g.args = {expr()};
      evaluate(g.args[0], at);
    } else if (w == "hwp" || w == "galpha") {
      arity(kw, 1, true);
      g = w == "hwp" ? op::hwp("") : op::galpha("");
      g.targets = path_list(kw, 1);
    } else if (w == "align" || w == "gcnot") {
      arity(kw, 2, true);
      g = w == "align" ? op::align("", "") : op::gcnot("", "");
      g.targets = path_list(kw, 2);
    } else if (w == "bs") {
      arity(kw, 2, true);
      g = op::bs("", "");
      g.targets = path_list(kw, 2);
      g.symmetric = accept_word("symmetric");
    } else if (w == "object") {
      arity(kw, 2);
      g = op::object("", "", Expr(), Expr());
      g.targets = path_list(kw, 2);
      const Token& at = peek();
      if (at.kind == Tok::Newline || at.kind == Tok::End) unexpected(at, "transmittance expression");
      Expr t = expr();
      const double tv = evaluate(t, at);
      if (!(tv >= 0.0 && tv <= 1.0)) error(at, DiagnosticKind::Semantic, "transmittance must be in [0,1]");
      const Token& at2 = peek();
      if (at2.kind == Tok::Newline || at2.kind == Tok::End) unexpected(at2, "phase expression");
      Expr gm = expr();
      evaluate(gm, at2);
      g.args = {std::move(t), std::move(gm)};
    } else if (w == "unitary") {
      const std::size_t n = std::min<std::size_t>(declared_run(), 2);
      if (n == 0) {
        arity(kw, 1);
        path_name();  // reports the undeclared path
      }
      g = n == 1 ? op::unitary("", MatrixSpec{}) : op::unitary("", "", MatrixSpec{});
      g.targets = path_list(kw, n);
      g.matrix = matrix_operand(n == 1 ? 2 : 4);
    } else if (w == "cnot" || w == "cg") {
      arity(kw, 1);
      g = w == "cnot" ? op::cnot("", {}) : op::cg("", {});
      g.targets = path_list(kw, 1);
      if (!accept_word("when")) unexpected(peek(), "'when'");
      do {
        const Token& p = peek();
        Control c;
        c.path = path_name();
        if (c.path == g.targets[0]) error(p, DiagnosticKind::Semantic, "control and target must differ");
        for (const auto& o : g.controls)
          if (o.path == c.path) error(p, DiagnosticKind::Semantic, "duplicate control path '" + c.path + "'");
        expect(Tok::Equals, "'='");
        const Token& v = peek();
        if (v.kind == Tok::Ident && (v.text == "H" || v.text == "V"))
          c.value = static_cast<Qutrit>(v.text[0]);
        else if (v.kind == Tok::Number && v.text == "0")
          c.value = Qutrit::Vac;
        else
          unexpected(v, "0, H or V");
        ++pos_;
        g.controls.push_back(std::move(c));
      } while (accept(Tok::Comma));
    } else if (w == "measure" || w == "trace_keep") {
      g = w == "measure" ? op::measure({}) : op::trace_keep({});
      while (peek().kind == Tok::Ident) {
        const Token& t = peek();
        const std::string p = path_name();
        if (std::find(g.targets.begin(), g.targets.end(), p) != g.targets.end())
          error(t, DiagnosticKind::Semantic, "path '" + p + "' listed twice");
        g.targets.push_back(p);
      }
      if (g.targets.empty()) error(kw, DiagnosticKind::Semantic, w + " requires at least 1 path", "path name");
    } else {
      error(kw, DiagnosticKind::Syntax, "unknown statement '" + w + "'",
            "paths, param, init, a gate keyword, measure, trace_keep or sweep");
    }
    end_of_statement();
    doc_.ops.push_back(std::move(g));
  }

  MatrixSpec matrix_operand(std::size_t dim) {
    const Token& at = peek();
    if (accept_word("X") || accept_word("H")) {
      if (dim != 2) error(at, DiagnosticKind::Semantic, "preset " + at.text + " applies to a single path");
      return at.text == "X" ? MatrixSpec::pauli_x() : MatrixSpec::hadamard();
    }
    if (accept_word("householder")) {
      expect(Tok::LBracket, "'['");
      std::vector<ComplexExpr> t = complex_list();
      expect(Tok::RBracket, "']'");
      if (t.size() != dim)
        error(at, DiagnosticKind::Semantic, "householder target needs " + std::to_string(dim) + " entries");
      VectorXcd v(static_cast<Eigen::Index>(dim));
      for (std::size_t k = 0; k < dim; ++k) v(static_cast<Eigen::Index>(k)) = t[k].eval(env_);
      if (std::abs(v.norm() - 1.0) > kUnitaryTolerance)
        error(at, DiagnosticKind::Semantic, "householder target must have unit norm");
      return MatrixSpec::householder(std::move(t));
    }
    if (peek().kind != Tok::LBracket) unexpected(peek(), "matrix literal, X, H or householder");
    next();
    std::vector<std::vector<ComplexExpr>> rows;
    do {
      expect(Tok::LBracket, "'['");
      rows.push_back(complex_list());
      expect(Tok::RBracket, "']'");
    } while (accept(Tok::Comma));
    expect(Tok::RBracket, "']'");
    if (rows.size() != dim)
      error(at, DiagnosticKind::Semantic,
            "unitary on " + std::string(dim == 2 ? "one path requires a 2x2" : "two paths requires a 4x4") + " matrix");
    for (const auto& r : rows)
      if (r.size() != dim) error(at, DiagnosticKind::Semantic, "matrix rows must have " + std::to_string(dim) + " entries");
    MatrixSpec m = MatrixSpec::explicit_rows(std::move(rows));
    if (!is_unitary(evaluate_matrix(m, env_))) error(at, DiagnosticKind::Semantic, "matrix is not unitary within 1e-10");
    return m;
  }

  std::vector<ComplexExpr> complex_list() {
    std::vector<ComplexExpr> out;
    do {
      const Token& at = peek();
      out.push_back(complex_value(false));
      evaluate(out.back(), at);
    } while (accept(Tok::Comma));
    return out;
  }

  // `(re, im)` or a real expression. With `term_only`, a bare real value
  // stops before + and - so it can precede a ket.
  ComplexExpr complex_value(bool term_only) {
    if (peek().kind == Tok::LParen) {
      const std::size_t save = pos_;
      ++pos_;
      Expr re = expr();
      if (accept(Tok::Comma)) {
        Expr im = expr();
        expect(Tok::RParen, "')'");
        return ComplexExpr(std::move(re), std::move(im));
      }
      pos_ = save;
    }
    return ComplexExpr(term_only ? term() : expr());
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept(Tok::Plus))
        e = e + term();
      else if (accept(Tok::Minus))
        e = e - term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept(Tok::Star))
        e = e * unary();
      else if (accept(Tok::Slash))
        e = e / unary();
      else
        return e;
    }
  }

  Expr unary() {
    if (accept(Tok::Minus)) {
      // A negated literal is the same tree as the negative number itself.
      return -unary();
    }
    return primary();
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        ++pos_;
        return Expr(std::strtod(t.text.c_str(), nullptr));
      }
      case Tok::LParen: {
        ++pos_;
        Expr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        ++pos_;
        if (t.text == "pi") return Expr::pi();
        if (Expr::is_function(t.text)) {
          expect(Tok::LParen, "'('");
          Expr a = expr();
          expect(Tok::RParen, "')'");
          return Expr::call(t.text, std::move(a));
        }
        if (!env_.count(t.text)) error(t, DiagnosticKind::Semantic, "undefined parameter '" + t.text + "'");
        return Expr::param(t.text);
      }
      default: unexpected(t, "expression");
    }
  }

  double evaluate(const Expr& e, const Token& at) const {
    const double v = e.eval(env_);
    if (!std::isfinite(v)) error(at, DiagnosticKind::Semantic, "expression does not evaluate to a finite number");
    return v;
  }
  void evaluate(const ComplexExpr& e, const Token& at) const {
    evaluate(e.re, at);
    if (e.pair) evaluate(e.im, at);
  }

  LexResult lx_;
  std::size_t pos_ = 0;
  Circuit doc_;
  ParamEnv env_;
  bool have_paths_ = false;
  bool paths_seen_ = false;
};

}  // namespace dsl

inline ParseResult parse(std::string_view text) { return dsl::Parser(dsl::lex(text)).run(); }

/// Parses a single expression, e.g. the right-hand side of `--set NAME=EXPR`.
/// Identifiers must be functions, `pi` or one of `known`.
inline std::optional<Expr> parse_expression(std::string_view text, const std::vector<std::string>& known,
                                            std::vector<Diagnostic>& diagnostics) {
  return dsl::Parser(dsl::lex(text)).expression_only(known, diagnostics);
}

namespace dsl {

inline std::string init_coefficient(const ComplexExpr& c) {
  if (c.pair) return c.str();
  const auto op = c.re.op();
  if (op == Expr::Op::Add || op == Expr::Op::Sub) return "(" + c.re.str() + ")";
  return c.re.str();
}

inline std::string complex_list(const std::vector<ComplexExpr>& xs) {
  std::string s;
  for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? ", " : "") + xs[k].str();
  return s;
}

inline std::string matrix_text(const MatrixSpec& m) {
  switch (m.kind) {
    case MatrixSpec::Kind::PauliX: return "X";
    case MatrixSpec::Kind::Hadamard: return "H";
    case MatrixSpec::Kind::Householder: return "householder [" + complex_list(m.target) + "]";
    case MatrixSpec::Kind::Explicit: {
      std::string s = "[";
      for (std::size_t r = 0; r < m.rows.size(); ++r) s += (r ? ", [" : "[") + complex_list(m.rows[r]) + "]";
      return s + "]";
    }
  }
  return "";
}

inline std::string statement_text(const GateApplication& g) {
  std::string s(keyword(g.kind));
  for (const auto& t : g.targets) s += " " + t;
  switch (g.kind) {
    case GateKind::Phase: s += " " + g.args.at(0).str(); break;
    case GateKind::Object: {
      // A leading minus would continue the transmittance expression.
      std::string gamma = g.args.at(1).str();
      if (gamma.front() == '-') gamma = "(" + gamma + ")";
      s += " " + g.args.at(0).str() + " " + gamma;
      break;
    }
    case GateKind::PolUnitary:
    case GateKind::TwoPathUnitary: s += " " + matrix_text(*g.matrix); break;
    case GateKind::BeamSplitter:
      if (g.symmetric) s += " symmetric";
      break;
    case GateKind::ControlledNot:
    case GateKind::ControlledG:
      s += " when";
      for (std::size_t k = 0; k < g.controls.size(); ++k)
        s += std::string(k ? ", " : " ") + g.controls[k].path + "=" + static_cast<char>(g.controls[k].value);
      break;
    default: break;
  }
  return s;
}

}  // namespace dsl

/// Canonical text of a circuit: header comments, paths, params, init, the
/// statements in order, then the sweep directive.
inline std::string format(const Circuit& c) {
  std::ostringstream os;
  for (const auto& h : c.header) os << '#' << h << '\n';
  os << "paths";
  for (const auto& p : c.paths) os << ' ' << p;
  os << '\n';
  for (const auto& p : c.params) os << "param " << p.name << " = " << p.value.str() << '\n';
  if (!c.init.empty()) {
    os << "init";
    for (std::size_t k = 0; k < c.init.size(); ++k) {
      os << (k ? " + " : " ");
      if (c.init[k].coefficient) os << dsl::init_coefficient(*c.init[k].coefficient) << ' ';
      os << '|' << c.init[k].ket << '>';
    }
    os << '\n';
  }
  for (const auto& g : c.ops) os << dsl::statement_text(g) << '\n';
  if (c.sweep) {
    const auto& s = *c.sweep;
    os << "sweep " << s.param;
    if (!s.values.empty()) {
      os << " values [";
      for (std::size_t k = 0; k < s.values.size(); ++k) os << (k ? ", " : "") << s.values[k].str();
      os << ']';
    } else {
      os << " from " << s.lo->str() << " to " << s.hi->str() << " count " << s.count;
    }
    os << '\n';
  }
  return os.str();
}

/// Diagnostic rendering: `file:line:col: kind error: message`, then the
/// offending token and expected hint when known.
inline std::string render(const Diagnostic& d, std::string_view file, bool color) {
  std::ostringstream os;
  const char* red = color ? "\x1b[1;31m" : "";
  const char* bold = color ? "\x1b[1m" : "";
  const char* reset = color ? "\x1b[0m" : "";
  os << bold << file << ':' << d.line << ':' << d.column << ':' << reset << ' ' << red << to_string(d.kind)
     << " error:" << reset << ' ' << d.message;
  if (!d.token.empty() || !d.expected.empty()) {
    os << " (";
    if (!d.token.empty()) os << "at '" << d.token << "'";
    if (!d.token.empty() && !d.expected.empty()) os << "; ";
    if (!d.expected.empty()) os << "expected " << d.expected;
    os << ')';
  }
  return os.str();
}

}  // namespace icnl
