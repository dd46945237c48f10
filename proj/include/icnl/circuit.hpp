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

// Circuit values: a path registry, named parameters, an optional initial
// superposition, and an ordered list of gate applications and probes.

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "icnl/expr.hpp"
#include "icnl/perturb.hpp"

namespace icnl {

enum class GateKind {
  NL,              // nl s i
  NLSinglePump,    // nl1p p s i
  Phase,           // phase p PHI
  HWP,             // hwp p
  PolUnitary,      // unitary p M
  TwoPathUnitary,  // unitary a b M
  Align,           // align a b (SWAP)
  BeamSplitter,    // bs a b [symmetric]
  Object,          // object i w T GAMMA
  GCnot,           // gcnot c t
  GAlpha,          // galpha p
  ControlledNot,   // cnot t when p=H, s=0
  ControlledG,     // cg t when p=H, s=0
  Measure,         // measure a b ...
  TraceKeep,       // trace_keep a b ...
};

inline std::string_view keyword(GateKind k) {
  switch (k) {
    case GateKind::NL: return "nl";
    case GateKind::NLSinglePump: return "nl1p";
    case GateKind::Phase: return "phase";
    case GateKind::HWP: return "hwp";
    case GateKind::PolUnitary:
    case GateKind::TwoPathUnitary: return "unitary";
    case GateKind::Align: return "align";
    case GateKind::BeamSplitter: return "bs";
    case GateKind::Object: return "object";
    case GateKind::GCnot: return "gcnot";
    case GateKind::GAlpha: return "galpha";
    case GateKind::ControlledNot: return "cnot";
    case GateKind::ControlledG: return "cg";
    case GateKind::Measure: return "measure";
    case GateKind::TraceKeep: return "trace_keep";
  }
  return "?";
}

inline bool is_probe(GateKind k) { return k == GateKind::Measure || k == GateKind::TraceKeep; }

/// Polarization matrix operand of a `unitary` statement.
struct MatrixSpec {
  enum class Kind { Explicit, PauliX, Hadamard, Householder };
  Kind kind = Kind::Explicit;
  std::vector<std::vector<ComplexExpr>> rows;  // Explicit
  std::vector<ComplexExpr> target;             // Householder: image of |H> or |HH>

  static MatrixSpec pauli_x() { return {Kind::PauliX, {}, {}}; }
  static MatrixSpec hadamard() { return {Kind::Hadamard, {}, {}}; }
  static MatrixSpec householder(std::vector<ComplexExpr> t) { return {Kind::Householder, {}, std::move(t)}; }
  static MatrixSpec explicit_rows(std::vector<std::vector<ComplexExpr>> r) { return {Kind::Explicit, std::move(r), {}}; }

  /// Side length, or 0 when the preset does not fix it.
  std::size_t dimension() const {
    switch (kind) {
      case Kind::Explicit: return rows.size();
      case Kind::Householder: return target.size();
      default: return 2;
    }
  }

  friend bool operator==(const MatrixSpec&, const MatrixSpec&) = default;
};

struct Control {
  std::string path;
  Qutrit value = Qutrit::H;
  friend bool operator==(const Control&, const Control&) = default;
};

struct GateApplication {
  GateKind kind = GateKind::NL;
  std::vector<std::string> targets;
  std::vector<Expr> args;  // Phase: {PHI}; Object: {T, GAMMA}
  std::optional<MatrixSpec> matrix;
  std::vector<Control> controls;
  bool symmetric = false;  // beam splitter i-phase convention

  friend bool operator==(const GateApplication&, const GateApplication&) = default;
};

struct Param {
  std::string name;
  Expr value;
  friend bool operator==(const Param&, const Param&) = default;
};

struct InitTerm {
  std::optional<ComplexExpr> coefficient;  // absent means 1
  Ket ket;
  friend bool operator==(const InitTerm&, const InitTerm&) = default;
};

struct SweepSpec {
  std::string param;
  // Either an explicit list, or lo/hi/count for an inclusive linear grid.
  std::vector<Expr> values;
  std::optional<Expr> lo, hi;
  int count = 0;

  std::vector<double> grid(const ParamEnv& env) const {
    if (!values.empty()) {
      std::vector<double> out;
      for (const auto& v : values) out.push_back(v.eval(env));
      return out;
    }
    double a = lo->eval(env), b = hi->eval(env);
    std::vector<double> out;
    for (int k = 0; k < count; ++k)
      out.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
    return out;
  }

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// Also the parsed form of a circuit document.
struct Circuit {
  std::vector<std::string> header;  // leading comment lines, without '#'
  std::vector<std::string> paths;
  std::vector<Param> params;
  std::vector<InitTerm> init;  // empty means vacuum
  std::vector<GateApplication> ops;
  std::optional<SweepSpec> sweep;

  bool has_param(std::string_view name) const {
    return std::any_of(params.begin(), params.end(), [&](const Param& p) { return p.name == name; });
  }

  std::size_t gate_count() const {
    return static_cast<std::size_t>(
        std::count_if(ops.begin(), ops.end(), [](const GateApplication& g) { return !is_probe(g.kind); }));
  }

  Circuit& add(GateApplication g) {
    ops.push_back(std::move(g));
    return *this;
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

using CircuitDoc = Circuit;

/// Evaluates every parameter in declaration order; `overrides` replace the
/// declared expression of an existing parameter.
inline ParamEnv resolve_params(const Circuit& c, const std::vector<Param>& overrides = {}) {
  for (const auto& o : overrides)
    if (!c.has_param(o.name)) throw std::invalid_argument("unknown parameter '" + o.name + "'");
  ParamEnv env;
  for (const auto& p : c.params) {
    const Expr* e = &p.value;
    for (const auto& o : overrides)
      if (o.name == p.name) e = &o.value;
    env[p.name] = e->eval(env);
  }
  return env;
}

// Gate builders used by the experiment and decomposition modules.
namespace op {

inline GateApplication nl(std::string s, std::string i) { return {GateKind::NL, {std::move(s), std::move(i)}}; }
inline GateApplication nl1p(std::string p, std::string s, std::string i) {
  return {GateKind::NLSinglePump, {std::move(p), std::move(s), std::move(i)}};
}
inline GateApplication phase(std::string p, Expr phi) { return {GateKind::Phase, {std::move(p)}, {std::move(phi)}}; }
inline GateApplication hwp(std::string p) { return {GateKind::HWP, {std::move(p)}}; }
inline GateApplication unitary(std::string p, MatrixSpec m) {
  return {GateKind::PolUnitary, {std::move(p)}, {}, std::move(m)};
}
inline GateApplication unitary(std::string a, std::string b, MatrixSpec m) {
  return {GateKind::TwoPathUnitary, {std::move(a), std::move(b)}, {}, std::move(m)};
}
inline GateApplication align(std::string a, std::string b) { return {GateKind::Align, {std::move(a), std::move(b)}}; }
inline GateApplication bs(std::string a, std::string b, bool symmetric = false) {
  GateApplication g{GateKind::BeamSplitter, {std::move(a), std::move(b)}};
  g.symmetric = symmetric;
  return g;
}
inline GateApplication object(std::string i, std::string w, Expr t, Expr gamma) {
  return {GateKind::Object, {std::move(i), std::move(w)}, {std::move(t), std::move(gamma)}};
}
inline GateApplication gcnot(std::string c, std::string t) { return {GateKind::GCnot, {std::move(c), std::move(t)}}; }
inline GateApplication galpha(std::string p) { return {GateKind::GAlpha, {std::move(p)}}; }
inline GateApplication cnot(std::string t, std::vector<Control> ctl) {
  return {GateKind::ControlledNot, {std::move(t)}, {}, std::nullopt, std::move(ctl)};
}
inline GateApplication cg(std::string t, std::vector<Control> ctl) {
  return {GateKind::ControlledG, {std::move(t)}, {}, std::nullopt, std::move(ctl)};
}
inline GateApplication measure(std::vector<std::string> paths) { return {GateKind::Measure, std::move(paths)}; }
inline GateApplication trace_keep(std::vector<std::string> paths) { return {GateKind::TraceKeep, std::move(paths)}; }

}  // namespace op

}  // namespace icnl
