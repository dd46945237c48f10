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

// Real-valued parameter expressions: numbers, pi, named parameters, the four
// arithmetic operators and a few functions. Expressions are immutable trees
// shared by value.

#include <charconv>
#include <complex>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace icnl {

using ParamEnv = std::map<std::string, double, std::less<>>;

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class Expr {
 public:
  enum class Op { Number, Pi, Param, Neg, Add, Sub, Mul, Div, Call };

  Expr() : Expr(0.0) {}
  // Negative literals are stored as negated magnitudes so that printing and
  // re-parsing yields the same tree.
  Expr(double v)  // NOLINT(google-explicit-constructor)
      : node_(std::signbit(v) ? make(Op::Neg, 0.0, {}, {Expr(-v)}) : make(Op::Number, v, {}, {})) {}

  static Expr pi() { return Expr(make(Op::Pi, 0.0, {}, {})); }
  static Expr param(std::string name) { return Expr(make(Op::Param, 0.0, std::move(name), {})); }
  static Expr call(std::string fn, Expr arg) {
    if (!is_function(fn)) throw std::invalid_argument("unknown function '" + fn + "'");
    return Expr(make(Op::Call, 0.0, std::move(fn), {std::move(arg)}));
  }
  static bool is_function(const std::string& fn) {
    return fn == "sqrt" || fn == "sin" || fn == "cos" || fn == "exp";
  }

  friend Expr operator-(Expr a) { return Expr(make(Op::Neg, 0.0, {}, {std::move(a)})); }
  friend Expr operator+(Expr a, Expr b) { return binary(Op::Add, std::move(a), std::move(b)); }
  friend Expr operator-(Expr a, Expr b) { return binary(Op::Sub, std::move(a), std::move(b)); }
  friend Expr operator*(Expr a, Expr b) { return binary(Op::Mul, std::move(a), std::move(b)); }
  friend Expr operator/(Expr a, Expr b) { return binary(Op::Div, std::move(a), std::move(b)); }

  Op op() const { return node_->op; }
  const std::string& name() const { return node_->name; }

  double eval(const ParamEnv& env) const {
    const auto& n = *node_;
    switch (n.op) {
      case Op::Number: return n.value;
      case Op::Pi: return std::numbers::pi;
      case Op::Param: {
        auto it = env.find(n.name);
        if (it == env.end()) throw std::invalid_argument("undefined parameter '" + n.name + "'");
        return it->second;
      }
      case Op::Neg: return -n.args[0].eval(env);
      case Op::Add: return n.args[0].eval(env) + n.args[1].eval(env);
      case Op::Sub: return n.args[0].eval(env) - n.args[1].eval(env);
      case Op::Mul: return n.args[0].eval(env) * n.args[1].eval(env);
      case Op::Div: return n.args[0].eval(env) / n.args[1].eval(env);
      case Op::Call: {
        double x = n.args[0].eval(env);
        if (n.name == "sqrt") return std::sqrt(x);
        if (n.name == "sin") return std::sin(x);
        if (n.name == "cos") return std::cos(x);
        return std::exp(x);
      }
    }
    return 0.0;
  }

  double eval() const { return eval(ParamEnv{}); }

  void collect_params(std::set<std::string>& out) const {
    if (node_->op == Op::Param) out.insert(node_->name);
    for (const auto& a : node_->args) a.collect_params(out);
  }

  /// Canonical text with minimal parentheses.
  std::string str() const {
    const auto& n = *node_;
    switch (n.op) {
      case Op::Number: return format_double(n.value);
      case Op::Pi: return "pi";
      case Op::Param: return n.name;
      case Op::Call: return n.name + "(" + n.args[0].str() + ")";
      case Op::Neg: return "-" + n.args[0].wrapped(precedence(Op::Neg), false);
      default: {
        const char* sym = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? " * " : " / ";
        int p = precedence(n.op);
        return n.args[0].wrapped(p, false) + sym + n.args[1].wrapped(p, true);
      }
    }
  }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.op != y.op || x.name != y.name || x.args.size() != y.args.size()) return false;
    if (x.op == Op::Number && !(x.value == y.value)) return false;
    for (std::size_t i = 0; i < x.args.size(); ++i)
      if (!(x.args[i] == y.args[i])) return false;
    return true;
  }

 private:
  struct Node {
    Op op;
    double value;
    std::string name;
    std::vector<Expr> args;
  };

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<const Node> make(Op op, double v, std::string name, std::vector<Expr> args) {
    return std::make_shared<const Node>(Node{op, v, std::move(name), std::move(args)});
  }
  static Expr binary(Op op, Expr a, Expr b) { return Expr(make(op, 0.0, {}, {std::move(a), std::move(b)})); }

  static int precedence(Op op) {
    switch (op) {
      case Op::Add:
      case Op::Sub: return 1;
      case Op::Mul:
      case Op::Div: return 2;
      case Op::Neg: return 3;
      default: return 4;
    }
  }

  // Right operands of - and / need parentheses at equal precedence.
  std::string wrapped(int parent, bool right) const {
    int p = precedence(node_->op);
    bool paren = p < parent || (right && p == parent && p < 3);
    if (parent == 3 && p == 3) paren = true;  // "--x" would not lex back
    return paren ? "(" + str() + ")" : str();
  }

  std::shared_ptr<const Node> node_;
};

/// Complex literal written either as a real expression or as `(re, im)`.
struct ComplexExpr {
  Expr re;
  Expr im;
  bool pair = false;

  ComplexExpr() = default;
  ComplexExpr(Expr r)  // NOLINT(google-explicit-constructor)
      : re(std::move(r)) {}
  ComplexExpr(double r) : re(r) {}  // NOLINT(google-explicit-constructor)
  ComplexExpr(Expr r, Expr i) : re(std::move(r)), im(std::move(i)), pair(true) {}

  std::complex<double> eval(const ParamEnv& env) const {
    return {re.eval(env), pair ? im.eval(env) : 0.0};
  }
  std::string str() const { return pair ? "(" + re.str() + ", " + im.str() + ")" : re.str(); }
  void collect_params(std::set<std::string>& out) const {
    re.collect_params(out);
    if (pair) im.collect_params(out);
  }
  friend bool operator==(const ComplexExpr&, const ComplexExpr&) = default;
};

}  // namespace icnl
