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

/// Brute-force truncated Fock-space simulation of crystal circuits.
///
/// Every path contributes an H mode (and a V mode when the circuit touches
/// polarization), each truncated at `signal_cutoff` photons, plus one shared
/// pump mode prepared in a truncated coherent state. Crystals evolve under
/// exp(-i (g a_p a_s^+ a_i^+ + h.c.)) computed by dense matrix exponential;
/// passive optics (phase, waveplates, beam splitters, object, alignment)
/// act through the exponential of their quadratic generator, so they are
/// exact on every photon-number sector that fits in the cutoff.
///
/// This is the independent reference for the first-order engine and shares
/// no code with it beyond the circuit description.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icnl/circuit.hpp"
#include "icnl/gates.hpp"

namespace icnl {

struct OracleConfig {
  int signal_cutoff = 2;              // max photons per signal/idler mode
  std::size_t max_dimension = 4096;   // total Hilbert-space dimension limit
  double pump_norm_error = 1e-10;     // 1 - ||truncated coherent state||
};

class DimensionError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct FockMode {
  std::string name;
  int levels = 3;  // cutoff + 1
};

/// Dense state over the tensor product of truncated modes; the first mode is
/// the most significant digit of the flat index.
class FockState {
 public:
  FockState(std::vector<FockMode> modes, std::size_t max_dimension) : modes_(std::move(modes)) {
    std::size_t dim = 1;
    for (const auto& m : modes_) {
      if (m.levels < 1) throw std::invalid_argument("mode '" + m.name + "' needs at least one level");
      dim *= static_cast<std::size_t>(m.levels);
      if (dim > max_dimension)
        throw DimensionError("Fock space dimension exceeds the configured limit of " +
                             std::to_string(max_dimension));
    }
    strides_.assign(modes_.size(), 1);
    for (std::size_t k = modes_.size(); k-- > 1;)
      strides_[k - 1] = strides_[k] * static_cast<std::size_t>(modes_[k].levels);
    amp_ = VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    amp_(0) = 1.0;
  }

  const std::vector<FockMode>& modes() const { return modes_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amp_.size()); }
  const VectorXcd& amplitudes() const { return amp_; }
  VectorXcd& amplitudes() { return amp_; }
  double norm() const { return amp_.norm(); }

  std::size_t mode_index(std::string_view name) const {
    for (std::size_t k = 0; k < modes_.size(); ++k)
      if (modes_[k].name == name) return k;
    throw std::invalid_argument("unknown Fock mode '" + std::string(name) + "'");
  }
  bool has_mode(std::string_view name) const {
    return std::any_of(modes_.begin(), modes_.end(), [&](const FockMode& m) { return m.name == name; });
  }

  int occupation(std::size_t flat, std::size_t mode) const {
    return static_cast<int>((flat / strides_[mode]) % static_cast<std::size_t>(modes_[mode].levels));
  }
  std::size_t stride(std::size_t mode) const { return strides_[mode]; }

  /// Applies `op` on the listed modes (first listed = most significant).
  void apply_local(const std::vector<std::size_t>& local, const MatrixXcd& op) {
    std::size_t ldim = 1;
    for (auto m : local) ldim *= static_cast<std::size_t>(modes_[m].levels);
    if (static_cast<std::size_t>(op.rows()) != ldim || op.cols() != op.rows())
      throw std::invalid_argument("local operator dimension mismatch");
    std::vector<std::size_t> offset(ldim, 0);
    for (std::size_t l = 0; l < ldim; ++l) {
      std::size_t rem = l;
      for (std::size_t k = local.size(); k-- > 0;) {
        const auto lev = static_cast<std::size_t>(modes_[local[k]].levels);
        offset[l] += (rem % lev) * strides_[local[k]];
        rem /= lev;
      }
    }
    VectorXcd x(static_cast<Eigen::Index>(ldim));
    for (std::size_t base = 0; base < dimension(); ++base) {
      bool at_origin = true;
      for (auto m : local)
        if (occupation(base, m) != 0) {
          at_origin = false;
          break;
        }
      if (!at_origin) continue;
      for (std::size_t l = 0; l < ldim; ++l) x(static_cast<Eigen::Index>(l)) = amp_(static_cast<Eigen::Index>(base + offset[l]));
      VectorXcd y = op * x;
      for (std::size_t l = 0; l < ldim; ++l) amp_(static_cast<Eigen::Index>(base + offset[l])) = y(static_cast<Eigen::Index>(l));
    }
  }

  /// Replaces the content of one mode (currently vacuum) by `v`.
  void prepare_mode(std::size_t mode, const VectorXcd& v) {
    const auto lev = static_cast<Eigen::Index>(modes_[mode].levels);
    if (v.size() != lev) throw std::invalid_argument("mode vector has wrong length");
    MatrixXcd op = MatrixXcd::Identity(lev, lev);
    op.col(0) = v;
    // Only column 0 matters: the mode starts in vacuum.
    apply_local({mode}, op);
  }

 private:
  std::vector<FockMode> modes_;
  std::vector<std::size_t> strides_;
  VectorXcd amp_;
};

namespace fock {

inline MatrixXcd annihilation(int levels) {
  MatrixXcd a = MatrixXcd::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

/// Annihilation operator of local mode `k` in the product of `levels`.
inline MatrixXcd embedded_annihilation(const std::vector<int>& levels, std::size_t k) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (std::size_t j = 0; j < levels.size(); ++j)
    out = kron(out, j == k ? annihilation(levels[j]) : MatrixXcd::Identity(levels[j], levels[j]));
  return out;
}

/// Smallest level count whose truncated coherent state misses unit norm by
/// less than `tol`.
inline int coherent_levels(complex_t alpha, double tol) {
  const double x = std::norm(alpha);
  double term = std::exp(-x), sum = 0.0;
  for (int n = 0; n < 200; ++n) {
    sum += term;
    if (1.0 - std::sqrt(sum) < tol) return n + 1;
    term *= x / static_cast<double>(n + 1);
  }
  throw std::invalid_argument("coherent amplitude too large for the pump cutoff search");
}

/// Normalized truncated coherent state.
inline VectorXcd coherent_state(complex_t alpha, int levels) {
  VectorXcd v(levels);
  complex_t c = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < levels; ++n) {
    v(n) = c;
    c *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return v / v.norm();
}

/// Hermitian h with m = exp(-i h), from the Schur form of the unitary m.
inline MatrixXcd unitary_generator(const MatrixXcd& m) {
  Eigen::ComplexSchur<MatrixXcd> schur(m);
  const MatrixXcd& q = schur.matrixU();
  const MatrixXcd& t = schur.matrixT();
  VectorXcd theta(t.rows());
  for (Eigen::Index k = 0; k < t.rows(); ++k) theta(k) = -std::arg(t(k, k));
  MatrixXcd h = q * theta.asDiagonal() * q.adjoint();
  return 0.5 * (h + h.adjoint());
}

}  // namespace fock

/// Exact crystal evolution exp(-i(g a_p a_s^+ a_i^+ + g* a_p^+ a_s a_i)).
inline FockState evolve_nl_exact(const FockState& state, std::string_view p, std::string_view s, std::string_view i,
                                 complex_t g) {
  const std::vector<std::size_t> local{state.mode_index(p), state.mode_index(s), state.mode_index(i)};
  if (local[0] == local[1] || local[0] == local[2] || local[1] == local[2])
    throw std::invalid_argument("crystal modes must be distinct");
  std::vector<int> lev;
  for (auto m : local) lev.push_back(state.modes()[m].levels);
  const MatrixXcd ap = fock::embedded_annihilation(lev, 0);
  const MatrixXcd as = fock::embedded_annihilation(lev, 1);
  const MatrixXcd ai = fock::embedded_annihilation(lev, 2);
  const MatrixXcd k = g * ap * as.adjoint() * ai.adjoint() + std::conj(g) * ap.adjoint() * as * ai;
  const MatrixXcd u = (complex_t(0.0, -1.0) * k).exp();
  FockState out = state;
  out.apply_local(local, u);
  return out;
}

/// Passive linear-optics transformation: a photon in local mode k goes to
/// sum_j m(j, k) a_j^+. Applied as exp(-i sum h_jk a_j^+ a_k).
inline FockState apply_mode_unitary(const FockState& state, const std::vector<std::string>& names,
                                    const MatrixXcd& m) {
  if (static_cast<std::size_t>(m.rows()) != names.size()) throw std::invalid_argument("mode matrix size mismatch");
  require_unitary(m, "mode matrix");
  std::vector<std::size_t> local;
  std::vector<int> lev;
  for (const auto& n : names) {
    local.push_back(state.mode_index(n));
    lev.push_back(state.modes()[local.back()].levels);
  }
  const MatrixXcd h = fock::unitary_generator(m);
  std::vector<MatrixXcd> a;
  for (std::size_t k = 0; k < names.size(); ++k) a.push_back(fock::embedded_annihilation(lev, k));
  MatrixXcd gen = MatrixXcd::Zero(a[0].rows(), a[0].cols());
  for (std::size_t j = 0; j < names.size(); ++j)
    for (std::size_t k = 0; k < names.size(); ++k)
      gen += h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * a[j].adjoint() * a[k];
  const MatrixXcd u = (complex_t(0.0, -1.0) * gen).exp();
  FockState out = state;
  out.apply_local(local, u);
  return out;
}

/// Exchanges the contents of two modes of equal cutoff.
inline FockState swap_modes(const FockState& state, std::string_view a, std::string_view b) {
  const auto ma = state.mode_index(a), mb = state.mode_index(b);
  const int la = state.modes()[ma].levels, lb = state.modes()[mb].levels;
  if (la != lb) throw std::invalid_argument("swapped modes must share a cutoff");
  MatrixXcd perm = MatrixXcd::Zero(la * lb, la * lb);
  for (int x = 0; x < la; ++x)
    for (int y = 0; y < lb; ++y) perm(y * lb + x, x * lb + y) = 1.0;
  FockState out = state;
  out.apply_local({ma, mb}, perm);
  return out;
}

/// e^{-i phi n} on one mode.
inline FockState apply_mode_phase(const FockState& state, std::string_view mode, double phi) {
  const auto m = state.mode_index(mode);
  const int lev = state.modes()[m].levels;
  MatrixXcd d = MatrixXcd::Zero(lev, lev);
  for (int n = 0; n < lev; ++n) d(n, n) = std::polar(1.0, -phi * n);
  FockState out = state;
  out.apply_local({m}, d);
  return out;
}

struct OracleTolerances {
  double max_constant = 10.0;  // pass iff deviation <= max_constant * |g alpha|^2
};

struct OracleReport {
  complex_t kappa;
  double max_deviation = 0.0;
  double scale = 0.0;     // |g alpha|^2
  double constant = 0.0;  // max_deviation / scale
  bool passes = false;
  std::size_t dimension = 0;
  int pump_levels = 0;
  double max_norm_drift = 0.0;  // worst | ||psi|| - 1 | after any gate
};

namespace detail {

inline bool oracle_needs_vertical(const Circuit& c) {
  return std::any_of(c.ops.begin(), c.ops.end(), [](const GateApplication& g) {
    return g.kind == GateKind::HWP || g.kind == GateKind::PolUnitary;
  });
}

inline std::string mode_name(const std::string& path, char pol) { return path + "." + pol; }

}  // namespace detail

/// Builds the oracle space for `c`: pump first, then each path's H (and V)
/// mode; the pump holds the truncated coherent state |alpha>.
inline FockState oracle_initial_state(const Circuit& c, complex_t alpha, const OracleConfig& cfg) {
  const bool vertical = detail::oracle_needs_vertical(c);
  const int pump_levels = fock::coherent_levels(alpha, cfg.pump_norm_error);
  std::vector<FockMode> modes{{"pump", pump_levels}};
  for (const auto& p : c.paths) {
    modes.push_back({detail::mode_name(p, 'H'), cfg.signal_cutoff + 1});
    if (vertical) modes.push_back({detail::mode_name(p, 'V'), cfg.signal_cutoff + 1});
  }
  FockState s(std::move(modes), cfg.max_dimension);
  s.prepare_mode(0, fock::coherent_state(alpha, pump_levels));
  return s;
}

/// Exact counterpart of one circuit gate.
inline FockState oracle_apply_gate(const FockState& s, const GateApplication& g, const ParamEnv& env, complex_t coupling) {
  const auto& t = g.targets;
  const bool vertical = s.has_mode(detail::mode_name(t.at(0), 'V'));
  std::vector<char> pols{'H'};
  if (vertical) pols.push_back('V');
  switch (g.kind) {
    case GateKind::NL:
      return evolve_nl_exact(s, "pump", detail::mode_name(t[0], 'H'), detail::mode_name(t[1], 'H'), coupling);
    case GateKind::Phase: {
      FockState out = s;
      const double phi = g.args.at(0).eval(env);
      for (char x : pols) out = apply_mode_phase(out, detail::mode_name(t[0], x), phi);
      return out;
    }
    case GateKind::HWP:
    case GateKind::PolUnitary: {
      MatrixXcd u = g.kind == GateKind::HWP ? MatrixXcd(pauli_x()) : evaluate_matrix(*g.matrix, env);
      if (u.rows() != 2) throw std::invalid_argument("unsupported polarization matrix size");
      return apply_mode_unitary(s, {detail::mode_name(t[0], 'H'), detail::mode_name(t[0], 'V')}, u);
    }
    case GateKind::Align: {
      FockState out = s;
      for (char x : pols) out = swap_modes(out, detail::mode_name(t[0], x), detail::mode_name(t[1], x));
      return out;
    }
    case GateKind::BeamSplitter:
    case GateKind::Object: {
      Matrix2cd m;
      if (g.kind == GateKind::Object) {
        m = object_mode_matrix(g.args.at(0).eval(env), g.args.at(1).eval(env));
      } else {
        const double r = 1.0 / std::sqrt(2.0);
        if (g.symmetric)
          m << r, complex_t(0, r), complex_t(0, r), r;
        else
          m << r, r, r, -r;
      }
      FockState out = s;
      for (char x : pols) out = apply_mode_unitary(out, {detail::mode_name(t[0], x), detail::mode_name(t[1], x)}, m);
      return out;
    }
    case GateKind::Measure:
    case GateKind::TraceKeep: return s;
    default:
      throw std::invalid_argument("gate '" + std::string(keyword(g.kind)) + "' has no Fock-space counterpart");
  }
}

/// Projects the pump onto the truncated coherent state and returns the
/// remaining signal/idler amplitudes.
inline VectorXcd project_pump(const FockState& s, complex_t alpha) {
  const int pl = s.modes()[0].levels;
  const VectorXcd coh = fock::coherent_state(alpha, pl);
  const auto rest = s.dimension() / static_cast<std::size_t>(pl);
  VectorXcd out = VectorXcd::Zero(static_cast<Eigen::Index>(rest));
  for (int n = 0; n < pl; ++n)
    out += std::conj(coh(n)) * s.amplitudes().segment(static_cast<Eigen::Index>(n * rest), static_cast<Eigen::Index>(rest));
  return out;
}

/// Runs `c` in both engines at pump amplitude `alpha` and coupling `g`.
inline OracleReport compare_first_order(const Circuit& c, complex_t g, complex_t alpha, const OracleTolerances& tol = {},
                                        const OracleConfig& cfg = {}, const std::vector<Param>& overrides = {}) {
  if (!c.init.empty()) throw std::invalid_argument("oracle comparison requires a vacuum initial state");
  const ParamEnv env = resolve_params(c, overrides);
  for (const auto& op : c.ops)
    switch (op.kind) {
      case GateKind::NLSinglePump:
      case GateKind::TwoPathUnitary:
      case GateKind::GCnot:
      case GateKind::GAlpha:
      case GateKind::ControlledNot:
      case GateKind::ControlledG:
        throw std::invalid_argument("gate '" + std::string(keyword(op.kind)) + "' has no Fock-space counterpart");
      default: break;
    }

  OracleReport rep;
  rep.kappa = g * alpha;
  rep.scale = std::norm(rep.kappa);

  FockState s = oracle_initial_state(c, alpha, cfg);
  rep.dimension = s.dimension();
  rep.pump_levels = s.modes()[0].levels;
  for (const auto& op : c.ops) {
    s = oracle_apply_gate(s, op, env, g);
    rep.max_norm_drift = std::max(rep.max_norm_drift, std::abs(s.norm() - 1.0));
  }
  const VectorXcd reduced = project_pump(s, alpha);

  // First-order prediction laid out on the same reduced index.
  const KetState first = evolve(c, env);
  VectorXcd predicted = VectorXcd::Zero(reduced.size());
  for (const auto& [ket, amp] : first.terms()) {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < ket.size(); ++j) {
      if (!is_occupied(ket[j])) continue;
      const auto m = s.mode_index(detail::mode_name(c.paths[j], ket[j]));
      flat += s.stride(m);
    }
    predicted(static_cast<Eigen::Index>(flat)) += amp.evaluate(rep.kappa);
  }
  rep.max_deviation = (reduced - predicted).cwiseAbs().maxCoeff();
  rep.constant = rep.scale > 0.0 ? rep.max_deviation / rep.scale : 0.0;
  rep.passes = rep.max_deviation <= tol.max_constant * rep.scale;
  return rep;
}

}  // namespace icnl
