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

/// Gate set acting on KetState.
///
/// Every gate is a pure function from a state to a new state. Paths are
/// addressed by label; the state's registry resolves positions. Gates built
/// from a crystal (nl, nl1p, galpha, cg) carry their coupling in the k slot of
/// the truncated series, so repeated pair creation truncates automatically.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <map>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icnl/circuit.hpp"
#include "icnl/perturb.hpp"

namespace icnl {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline constexpr double kUnitaryTolerance = 1e-10;

inline bool is_unitary(const MatrixXcd& u, double tol = kUnitaryTolerance) {
  if (u.rows() != u.cols() || u.rows() == 0) return false;
  MatrixXcd d = u.adjoint() * u - MatrixXcd::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

inline void require_unitary(const MatrixXcd& u, std::string_view what) {
  if (!is_unitary(u)) throw std::invalid_argument(std::string(what) + " is not unitary within 1e-10");
}

inline Matrix2cd pauli_x() {
  Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix2cd hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix2cd m;
  m << s, s, s, -s;
  return m;
}

/// Deterministic unitary whose first column is `target` (unit norm).
///
/// Reflects e0 onto e^{-i theta} target with theta = arg(target[0]), then
/// restores the phase. A target equal to e0 yields the identity.
inline MatrixXcd householder_completion(const VectorXcd& target) {
  const auto n = target.size();
  if (n == 0) throw std::invalid_argument("empty Householder target");
  if (std::abs(target.norm() - 1.0) > kUnitaryTolerance)
    throw std::invalid_argument("Householder target must have unit norm");
  const complex_t lead = target(0);
  const complex_t phase = std::abs(lead) > 0.0 ? lead / std::abs(lead) : complex_t{1.0, 0.0};
  VectorXcd y = target * std::conj(phase);
  VectorXcd w = -y;
  w(0) += 1.0;
  const double wn2 = w.squaredNorm();
  MatrixXcd h = MatrixXcd::Identity(n, n);
  if (wn2 > 0.0) h -= (2.0 / wn2) * (w * w.adjoint());
  return phase * h;
}

namespace detail {

inline int pol_index(char c) { return c == 'H' ? 0 : 1; }
inline char pol_symbol(int k) { return k == 0 ? 'H' : 'V'; }

inline void require_distinct(const KetState& s, std::initializer_list<std::string_view> labels) {
  std::vector<std::size_t> idx;
  for (auto l : labels) idx.push_back(s.index_of(l));
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b)
      if (idx[a] == idx[b]) throw std::invalid_argument("gate targets must be distinct paths");
}

template <class F>
KetState map_terms(const KetState& state, F&& f) {
  TermAccumulator acc;
  for (const auto& [ket, amp] : state.terms()) f(ket, amp, acc);
  return std::move(acc).finish(state.paths());
}

}  // namespace detail

/// Pair creation in a coherently pumped crystal on signal `s`, idler `i`:
/// |00> -> |00> - i k |HH>, |HH> -> |HH> - i kb |00>, identity elsewhere.
inline KetState apply_nl(const KetState& state, std::string_view s, std::string_view i,
                         complex_t coupling = 1.0) {
  detail::require_distinct(state, {s, i});
  const auto ps = state.index_of(s), pi = state.index_of(i);
  const auto create = PerturbAmp::minus_i_kappa(coupling);
  const auto annihilate = PerturbAmp::minus_i_kappa_bar(coupling);
  return detail::map_terms(state, [&](const Ket& ket, const PerturbAmp& amp, TermAccumulator& acc) {
    acc.add(ket, amp);
    if (ket[ps] == '0' && ket[pi] == '0') {
      Ket k = ket;
      k[ps] = k[pi] = 'H';
      acc.add(k, amp * create);
    } else if (ket[ps] == 'H' && ket[pi] == 'H') {
      Ket k = ket;
      k[ps] = k[pi] = '0';
      acc.add(k, amp * annihilate);
    }
  });
}

/// Path alignment: exchanges the occupation symbols of `a` and `b`.
inline KetState apply_swap(const KetState& state, std::string_view a, std::string_view b) {
  detail::require_distinct(state, {a, b});
  const auto pa = state.index_of(a), pb = state.index_of(b);
  return detail::map_terms(state, [&](const Ket& ket, const PerturbAmp& amp, TermAccumulator& acc) {
    Ket k = ket;
    std::swap(k[pa], k[pb]);
    acc.add(k, amp);
  });
}

/// 2x2 unitary on the {H, V} polarization of one path; vacuum is fixed.
inline KetState apply_pol_unitary(const KetState& state, std::string_view p, const Matrix2cd& u) {
  require_unitary(u, "polarization matrix");
  const auto pp = state.index_of(p);
  return detail::map_terms(state, [&](const Ket& ket, const PerturbAmp& amp, TermAccumulator& acc) {
    if (!is_occupied(ket[pp])) {
      acc.add(ket, amp);
      return;
    }
    const int col = detail::pol_index(ket[pp]);
    for (int row = 0; row < 2; ++row) {
      if (u(row, col) == complex_t{}) continue;
      Ket k = ket;
      k[pp] = detail::pol_symbol(row);
      acc.add(k, amp * u(row, col));
    }
  });
}

/// Phase shifter: every photon on `p` picks up e^{-i phi}.
inline KetState apply_phase(const KetState& state, std::string_view p, double phi) {
  const auto pp = state.index_of(p);
  const complex_t f = unit_phase(-phi);
  return detail::map_terms(state, [&](const Ket& ket, const PerturbAmp& amp, TermAccumulator& acc) {
    acc.add(ket, is_occupied(ket[pp]) ? amp * f : amp);
  });
}

enum class BeamSplitterConvention { Hadamard, Symmetric };

/// Polarization-preserving beam splitter on the single-photon path modes of
/// `a` and `b`. Hadamard: |X0> -> (|X0>+|0X>)/sqrt2, |0X> -> (|X0>-|0X>)/sqrt2.
/// Symmetric: |X0> -> (|X0>+i|0X>)/sqrt2, |0X> -> (i|X0>+|0X>)/sqrt2.
inline KetState apply_beam_splitter(const KetState& state, std::string_view a, std::string_view b,
                                    BeamSplitterConvention conv = BeamSplitterConvention::Hadamard) {
  detail::require_distinct(state, {a, b});
  const auto pa = state.index_of(a), pb = state.index_of(b);
  const double s = 1.0 / std::sqrt(2.0);
  // m(out, in) over the path modes {a, b}.
  Matrix2cd m;
  if (conv == BeamSplitterConvention::Hadamard)
    m << s, s, s, -s;
  else
    m << s, complex_t(0, s), complex_t(0, s), s;
  return detail::map_terms(state, [&](const Ket& ket, const PerturbAmp& amp, TermAccumulator& acc) {
    const bool oa = is_occupied(ket[pa]), ob = is_occupied(ket[pb]);
    if (oa && ob)
      throw std::invalid_argument("beam splitter input |" + ket + "> has both paths occupied");
    if (!oa && !ob) {
      acc.add(ket, amp);
      return;
    }
    const int in = oa ? 0 : 1;
    const char x = oa ? ket[pa] : ket[pb];
    for (int out = 0; out < 2; ++out) {
      Ket k = ket;
      k[pa] = out == 0 ? x : '0';
      k[pb] = out == 1 ? x : '0';
      acc.add(k, amp * m(out, in));
    }
  });
}

/// Mode matrix of a point-like object coupling path i to loss path w,
/// columns are the images of |X0> and |0X>.
inline Matrix2cd object_mode_matrix(double t, double gamma) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("transmittance must be in [0,1]");
  const double r = std::sqrt(1.0 - t * t);
  Matrix2cd m;
  m << t * unit_phase(gamma), -r, r, t * unit_phase(-gamma);
  return m;
}

/// The object channel completed to a unitary on {|X0>, |0X>}_{i,w}; accepts
/// an occupied loss path.
inline KetState apply_object_unitary(const KetState& state, std::string_view i, std::string_view w, double t,
                                     double gamma) {
  detail::require_distinct(state, {i, w});
  const auto pi = state.index_of(i), pw = state.index_of(w);
  const Matrix2cd m = object_mode_matrix(t, gamma);
  return detail::map_terms(state, [&](const Ket& ket, const PerturbAmp& amp, TermAccumulator& acc) {
    const bool oi = is_occupied(ket[pi]), ow = is_occupied(ket[pw]);
    if (oi && ow) throw std::invalid_argument("object input |" + ket + "> has both paths occupied");
    if (!oi && !ow) {
      acc.add(ket, amp);
      return;
    }
    const int in = oi ? 0 : 1;
    const char x = oi ? ket[pi] : ket[pw];
    for (int out = 0; out < 2; ++out) {
      if (m(out, in) == complex_t{}) continue;
      Ket k = ket;
      k[pi] = out == 0 ? x : '0';
      k[pw] = out == 1 ? x : '0';
      acc.add(k, amp * m(out, in));
    }
  });
}

/// Object with transmittance `t` and phase `gamma` on path `i`; photons that
/// are not transmitted end up in the loss path `w`, which must be empty.
inline KetState apply_object(const KetState& state, std::string_view i, std::string_view w, double t,
                             double gamma) {
  const auto pw = state.index_of(w);
  for (const auto& [ket, amp] : state.terms())
    if (is_occupied(ket[pw]))
      throw std::invalid_argument("loss path '" + std::string(w) + "' is occupied in |" + ket + ">");
  return apply_object_unitary(state, i, w, t, gamma);
}

/// 4x4 unitary on the joint polarization {HH, HV, VH, VV} of `a` and `b`,
/// acting only when both paths carry a photon.
inline KetState apply_two_path_pol_unitary(const KetState& state, std::string_view a, std::string_view b,
                                           const Matrix4cd& u) {
  require_unitary(u, "two-path polarization matrix");
  detail::require_distinct(state, {a, b});
  const auto pa = state.index_of(a), pb = state.index_of(b);
  // Group by the rest of the ket so each block is multiplied in column order
  // {HH, HV, VH, VV} independent of the registry order of a and b.
  std::map<Ket, std::array<PerturbAmp, 4>> blocks;
  TermAccumulator acc;
  for (const auto& [ket, amp] : state.terms()) {
    if (!is_occupied(ket[pa]) || !is_occupied(ket[pb])) {
      acc.add(ket, amp);
      continue;
    }
    Ket rest = ket;
    rest[pa] = rest[pb] = 'H';
    blocks[rest][static_cast<std::size_t>(2 * detail::pol_index(ket[pa]) + detail::pol_index(ket[pb]))] = amp;
  }
  for (const auto& [rest, v] : blocks) {
    for (int row = 0; row < 4; ++row) {
      PerturbAmp r;
      for (int col = 0; col < 4; ++col)
        if (u(row, col) != complex_t{}) r += v[static_cast<std::size_t>(col)] * u(row, col);
      Ket k = rest;
      k[pa] = detail::pol_symbol(row / 2);
      k[pb] = detail::pol_symbol(row % 2);
      acc.add(k, r);
    }
  }
  return std::move(acc).finish(state.paths());
}

namespace detail {

inline std::vector<std::pair<std::size_t, char>> resolve_controls(const KetState& state,
                                                                  const std::vector<Control>& controls,
                                                                  std::size_t target) {
  std::vector<std::pair<std::size_t, char>> out;
  for (const auto& c : controls) {
    auto idx = state.index_of(c.path);
    if (idx == target) throw std::invalid_argument("control and target must differ");
    for (const auto& [j, v] : out)
      if (j == idx) throw std::invalid_argument("duplicate control path '" + c.path + "'");
    out.emplace_back(idx, static_cast<char>(c.value));
  }
  return out;
}

inline bool controls_match(const Ket& ket, const std::vector<std::pair<std::size_t, char>>& ctl) {
  for (const auto& [j, v] : ctl)
    if (ket[j] != v) return false;
  return true;
}

}  // namespace detail

/// Toggles `target` between 0 and H when every control holds its value.
inline KetState apply_controlled_not(const KetState& state, std::string_view target,
                                     const std::vector<Control>& controls) {
  const auto pt = state.index_of(target);
  const auto ctl = detail::resolve_controls(state, controls, pt);
  return detail::map_terms(state, [&](const Ket& ket, const PerturbAmp& amp, TermAccumulator& acc) {
    if (!detail::controls_match(ket, ctl) || ket[pt] == 'V') {
      acc.add(ket, amp);
      return;
    }
    Ket k = ket;
    k[pt] = ket[pt] == '0' ? 'H' : '0';
    acc.add(k, amp);
  });
}

/// g-CNOT: toggles target 0 <-> H when the control holds an H photon.
inline KetState apply_gcnot(const KetState& state, std::string_view control, std::string_view target) {
  return apply_controlled_not(state, target, {{std::string(control), Qutrit::H}});
}

/// Controlled crystal gate G on `target`: |0> -> |0> - i k |H>,
/// |H> -> |H> - i kb |0>, |V> fixed; identity unless every control matches.
inline KetState apply_controlled_g(const KetState& state, std::string_view target,
                                   const std::vector<Control>& controls, complex_t coupling = 1.0) {
  const auto pt = state.index_of(target);
  const auto ctl = detail::resolve_controls(state, controls, pt);
  const auto up = PerturbAmp::minus_i_kappa(coupling);
  const auto down = PerturbAmp::minus_i_kappa_bar(coupling);
  return detail::map_terms(state, [&](const Ket& ket, const PerturbAmp& amp, TermAccumulator& acc) {
    acc.add(ket, amp);
    if (!detail::controls_match(ket, ctl) || ket[pt] == 'V') return;
    Ket k = ket;
    k[pt] = ket[pt] == '0' ? 'H' : '0';
    acc.add(k, amp * (ket[pt] == '0' ? up : down));
  });
}

inline KetState apply_G_alpha(const KetState& state, std::string_view p) { return apply_controlled_g(state, p, {}); }

/// Crystal pumped by a single photon on `p`: |H00> <-> |0HH> over (p, s, i)
/// with amplitude -i g k (and -i g* kb back), identity on the other eight
/// states of the ten-dimensional input space.
inline KetState apply_nl_single_photon_pump(const KetState& state, std::string_view p, std::string_view s,
                                            std::string_view i, complex_t coupling = 1.0) {
  detail::require_distinct(state, {p, s, i});
  const auto pp = state.index_of(p), ps = state.index_of(s), pi = state.index_of(i);
  const auto create = PerturbAmp::minus_i_kappa(coupling);
  const auto annihilate = PerturbAmp::minus_i_kappa_bar(coupling);
  return detail::map_terms(state, [&](const Ket& ket, const PerturbAmp& amp, TermAccumulator& acc) {
    const char cp = ket[pp], cs = ket[ps], ci = ket[pi];
    if (cp == 'V' || (cp == 'H' && (cs != '0' || ci != '0')))
      throw std::invalid_argument("|" + ket + "> lies outside the single-photon-pump input space");
    acc.add(ket, amp);
    if (cp == 'H') {
      Ket k = ket;
      k[pp] = '0';
      k[ps] = k[pi] = 'H';
      acc.add(k, amp * create);
    } else if (cs == 'H' && ci == 'H') {
      Ket k = ket;
      k[pp] = 'H';
      k[ps] = k[pi] = '0';
      acc.add(k, amp * annihilate);
    }
  });
}

// ---------------------------------------------------------------------------
// Circuit evaluation

inline MatrixXcd evaluate_matrix(const MatrixSpec& m, const ParamEnv& env) {
  switch (m.kind) {
    case MatrixSpec::Kind::PauliX: return pauli_x();
    case MatrixSpec::Kind::Hadamard: return hadamard();
    case MatrixSpec::Kind::Householder: {
      VectorXcd v(static_cast<Eigen::Index>(m.target.size()));
      for (std::size_t k = 0; k < m.target.size(); ++k) v(static_cast<Eigen::Index>(k)) = m.target[k].eval(env);
      return householder_completion(v);
    }
    case MatrixSpec::Kind::Explicit: {
      const auto n = static_cast<Eigen::Index>(m.rows.size());
      MatrixXcd u(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = m.rows[static_cast<std::size_t>(r)];
        if (static_cast<Eigen::Index>(row.size()) != n) throw std::invalid_argument("matrix must be square");
        for (Eigen::Index c = 0; c < n; ++c) u(r, c) = row[static_cast<std::size_t>(c)].eval(env);
      }
      return u;
    }
  }
  return {};
}

inline KetState initial_state(const Circuit& c, const ParamEnv& env) {
  if (c.init.empty()) return vacuum_state(c.paths);
  TermAccumulator acc;
  for (const auto& t : c.init) acc.add(t.ket, PerturbAmp::one() * (t.coefficient ? t.coefficient->eval(env) : 1.0));
  return std::move(acc).finish(c.paths);
}

/// Applies one gate; probes leave the state unchanged.
inline KetState apply_gate(const KetState& state, const GateApplication& g, const ParamEnv& env) {
  const auto& t = g.targets;
  auto need = [&](std::size_t n) {
    if (t.size() != n)
      throw std::invalid_argument(std::string(keyword(g.kind)) + " requires " + std::to_string(n) + (n == 1 ? " path" : " paths"));
  };
  switch (g.kind) {
    case GateKind::NL: need(2); return apply_nl(state, t[0], t[1]);
    case GateKind::NLSinglePump: need(3); return apply_nl_single_photon_pump(state, t[0], t[1], t[2]);
    case GateKind::Phase: need(1); return apply_phase(state, t[0], g.args.at(0).eval(env));
    case GateKind::HWP: need(1); return apply_pol_unitary(state, t[0], pauli_x());
    case GateKind::PolUnitary: {
      need(1);
      MatrixXcd u = evaluate_matrix(*g.matrix, env);
      if (u.rows() != 2) throw std::invalid_argument("unitary on one path requires a 2x2 matrix");
      return apply_pol_unitary(state, t[0], u);
    }
    case GateKind::TwoPathUnitary: {
      need(2);
      MatrixXcd u = evaluate_matrix(*g.matrix, env);
      if (u.rows() != 4) throw std::invalid_argument("unitary on two paths requires a 4x4 matrix");
      return apply_two_path_pol_unitary(state, t[0], t[1], u);
    }
    case GateKind::Align: need(2); return apply_swap(state, t[0], t[1]);
    case GateKind::BeamSplitter:
      need(2);
      return apply_beam_splitter(state, t[0], t[1],
                                 g.symmetric ? BeamSplitterConvention::Symmetric : BeamSplitterConvention::Hadamard);
    case GateKind::Object:
      need(2);
      return apply_object(state, t[0], t[1], g.args.at(0).eval(env), g.args.at(1).eval(env));
    case GateKind::GCnot: need(2); return apply_gcnot(state, t[0], t[1]);
    case GateKind::GAlpha: need(1); return apply_G_alpha(state, t[0]);
    case GateKind::ControlledNot: need(1); return apply_controlled_not(state, t[0], g.controls);
    case GateKind::ControlledG: need(1); return apply_controlled_g(state, t[0], g.controls);
    case GateKind::Measure:
    case GateKind::TraceKeep: return state;
  }
  return state;
}

using ProbeHook = std::function<void(const GateApplication&, const KetState&)>;

/// Runs the circuit from its initial state. `probe` sees the state at every
/// measure/trace_keep statement.
inline KetState evolve(const Circuit& c, const ParamEnv& env, const ProbeHook& probe = {}) {
  KetState s = initial_state(c, env);
  for (const auto& g : c.ops) {
    if (is_probe(g.kind)) {
      if (probe) probe(g, s);
      continue;
    }
    s = apply_gate(s, g, env);
  }
  return s;
}

inline KetState evolve(const Circuit& c) { return evolve(c, resolve_params(c)); }

/// Applies `c`'s gates to an arbitrary state over the same registry.
inline KetState apply_circuit(const KetState& state, const Circuit& c, const ParamEnv& env = {}) {
  KetState s = state;
  for (const auto& g : c.ops)
    if (!is_probe(g.kind)) s = apply_gate(s, g, env);
  return s;
}

}  // namespace icnl
