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

/// Effective (vacuum-free) picture of coherently pumped crystal circuits.
///
/// A physical state |vac> - i k |eff> is represented by |eff> alone, split into
/// a direct sum of 4-dimensional polarization blocks, one per (signal, idler)
/// path pair. A crystal becomes the affine "superposer" |eff> -> |eff> + |HH>,
/// made linear by carrying an auxiliary coordinate that is 1 for physical
/// states.

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "icnl/gates.hpp"
#include "icnl/perturb.hpp"

namespace icnl {

using Eigen::Vector4cd;
using Matrix5cd = Eigen::Matrix<complex_t, 5, 5>;
using Vector5cd = Eigen::Matrix<complex_t, 5, 1>;

using PathPair = std::pair<std::string, std::string>;  // (signal, idler)

class EffState {
 public:
  using BlockMap = std::map<PathPair, Vector4cd>;

  EffState(std::vector<std::string> signals, std::vector<std::string> idlers, complex_t aux = 1.0)
      : signals_(std::move(signals)), idlers_(std::move(idlers)), aux_(aux) {
    std::vector<std::string> all = signals_;
    all.insert(all.end(), idlers_.begin(), idlers_.end());
    KetState::validate_registry(all);
    if (signals_.empty() || idlers_.empty())
      throw std::invalid_argument("effective state needs at least one signal and one idler path");
  }

  static EffState vacuum(std::vector<std::string> signals, std::vector<std::string> idlers) {
    return EffState(std::move(signals), std::move(idlers), 1.0);
  }

  const std::vector<std::string>& signals() const { return signals_; }
  const std::vector<std::string>& idlers() const { return idlers_; }
  complex_t aux() const { return aux_; }
  const BlockMap& blocks() const { return blocks_; }

  void check_pair(const PathPair& key) const {
    if (std::find(signals_.begin(), signals_.end(), key.first) == signals_.end() ||
        std::find(idlers_.begin(), idlers_.end(), key.second) == idlers_.end())
      throw std::invalid_argument("unknown path pair (" + key.first + ", " + key.second + ")");
  }

  Vector4cd block(const PathPair& key) const {
    check_pair(key);
    auto it = blocks_.find(key);
    return it == blocks_.end() ? Vector4cd::Zero() : it->second;
  }

  /// Blocks sharing a signal or an idler path with another block are
  /// rejected.
  void set_block(const PathPair& key, const Vector4cd& v) {
    check_pair(key);
    for (const auto& [k, b] : blocks_)
      if (k != key && (k.first == key.first || k.second == key.second))
        throw std::invalid_argument("blocks (" + k.first + ", " + k.second + ") and (" + key.first + ", " +
                                    key.second + ") overlap");
    blocks_[key] = v;
  }

  void set_aux(complex_t a) { aux_ = a; }

  bool same_registry(const EffState& o) const { return signals_ == o.signals_ && idlers_ == o.idlers_; }

  /// Exact equality; absent blocks compare as zero.
  friend bool operator==(const EffState& a, const EffState& b) {
    if (!a.same_registry(b) || a.aux_ != b.aux_) return false;
    auto covered = [](const EffState& x, const EffState& y) {
      for (const auto& [k, v] : x.blocks_)
        if (v != y.block(k)) return false;
      return true;
    };
    return covered(a, b) && covered(b, a);
  }

  double max_abs_difference(const EffState& o) const {
    if (!same_registry(o)) throw std::invalid_argument("effective states use different registries");
    double worst = std::abs(aux_ - o.aux_);
    for (const auto& [k, v] : blocks_) worst = std::max(worst, (v - o.block(k)).cwiseAbs().maxCoeff());
    for (const auto& [k, v] : o.blocks_) worst = std::max(worst, (v - block(k)).cwiseAbs().maxCoeff());
    return worst;
  }

 private:
  std::vector<std::string> signals_;
  std::vector<std::string> idlers_;
  complex_t aux_;
  BlockMap blocks_;
};

/// Superposer: adds aux * |HH> to the (signal, idler) block.
inline EffState eff_apply_nl(const EffState& state, const std::string& signal, const std::string& idler) {
  EffState out = state;
  const PathPair key{signal, idler};
  Vector4cd b = state.block(key);
  b(0) += state.aux();
  out.set_block(key, b);
  return out;
}

/// (1 + U) acting on the (signal, idler) block.
inline EffState eff_apply_unitary(const EffState& state, const std::string& signal, const std::string& idler,
                                  const Matrix4cd& u) {
  require_unitary(u, "two-path polarization matrix");
  const PathPair key{signal, idler};
  Vector4cd b = state.block(key);
  EffState out = state;
  if (state.blocks().count(key)) {
    Vector4cd r = Vector4cd::Zero();
    for (int row = 0; row < 4; ++row)
      for (int col = 0; col < 4; ++col) r(row) += u(row, col) * b(col);
    out.set_block(key, r);
  }
  return out;
}

/// The superposer as a 5x5 matrix over {|a>, |HH>, |HV>, |VH>, |VV>}.
inline Matrix5cd translation_matrix() {
  Matrix5cd m = Matrix5cd::Identity();
  m(1, 0) = 1.0;
  return m;
}

/// Extended vector (aux, block) for one path pair.
inline Vector5cd to_extended(const EffState& s, const PathPair& key) {
  Vector5cd v;
  v(0) = s.aux();
  v.tail<4>() = s.block(key);
  return v;
}

/// Affine combination c1*psi1 + c2*psi2 of two physical states: blocks add
/// linearly and the result is again a physical state with aux = 1.
inline EffState eff_superpose(const EffState& a, const EffState& b, complex_t c1, complex_t c2) {
  if (!a.same_registry(b))
    throw std::invalid_argument("effective states on different path registries cannot be combined");
  EffState out(a.signals(), a.idlers(), 1.0);
  std::map<PathPair, Vector4cd> acc;
  for (const auto& [k, v] : a.blocks()) acc[k] = c1 * v;
  for (const auto& [k, v] : b.blocks()) {
    auto it = acc.find(k);
    if (it == acc.end())
      acc[k] = c2 * v;
    else
      it->second += c2 * v;
  }
  for (const auto& [k, v] : acc) out.set_block(k, v);
  return out;
}

/// True when the superposer fails linearity on this instance:
/// L(c1 psi1 + c2 psi2) differs from c1 L psi1 + c2 L psi2 by more than
/// `tol` (relative to the largest component) in some block entry.
inline bool eff_nonlinearity_witness(const EffState& psi1, const EffState& psi2, complex_t c1, complex_t c2,
                                     const PathPair& pair, double tol = 1e-12) {
  const EffState lhs = eff_apply_nl(eff_superpose(psi1, psi2, c1, c2), pair.first, pair.second);
  const EffState l1 = eff_apply_nl(psi1, pair.first, pair.second);
  const EffState l2 = eff_apply_nl(psi2, pair.first, pair.second);
  std::map<PathPair, Vector4cd> rhs;
  auto accumulate = [&](const EffState& s, complex_t c) {
    for (const auto& [k, v] : s.blocks()) {
      auto it = rhs.find(k);
      if (it == rhs.end())
        rhs[k] = c * v;
      else
        it->second += c * v;
    }
  };
  accumulate(l1, c1);
  accumulate(l2, c2);
  double scale = 1.0, worst = 0.0;
  for (const auto& [k, v] : rhs) {
    const Vector4cd l = lhs.block(k);
    scale = std::max({scale, v.cwiseAbs().maxCoeff(), l.cwiseAbs().maxCoeff()});
    worst = std::max(worst, (l - v).cwiseAbs().maxCoeff());
  }
  for (const auto& [k, v] : lhs.blocks()) {
    if (rhs.count(k)) continue;
    scale = std::max(scale, v.cwiseAbs().maxCoeff());
    worst = std::max(worst, v.cwiseAbs().maxCoeff());
  }
  return worst > tol * scale;
}

/// Splits the first-order part of `state` into (signal, idler) blocks.
///
/// The order-0 part must be exactly the vacuum ket; every first-order ket
/// must hold one photon on a signal path and one on an idler path.
inline EffState unitary_to_effective(const KetState& state, const std::vector<std::string>& signals,
                                     const std::vector<std::string>& idlers) {
  EffState out(signals, idlers, 0.0);
  std::vector<int> role(state.paths().size(), 0);  // 1 signal, 2 idler
  for (const auto& s : signals) role[state.index_of(s)] = 1;
  for (const auto& i : idlers) role[state.index_of(i)] = 2;
  const Ket vac = state.vacuum_ket();
  std::map<PathPair, Vector4cd> acc;
  for (const auto& [ket, amp] : state.terms()) {
    if (amp.ckb != complex_t{}) throw std::invalid_argument("|" + ket + "> carries a kb term");
    if (ket == vac) {
      if (amp.c0 != complex_t{1.0, 0.0} || amp.ck != complex_t{})
        throw std::invalid_argument("vacuum amplitude must be exactly 1");
      out.set_aux(amp.c0);
      continue;
    }
    if (amp.c0 != complex_t{})
      throw std::invalid_argument("order-0 component |" + ket + "> is not the vacuum");
    std::vector<std::size_t> sig, idl;
    for (std::size_t j = 0; j < ket.size(); ++j) {
      if (!is_occupied(ket[j])) continue;
      if (role[j] == 1)
        sig.push_back(j);
      else if (role[j] == 2)
        idl.push_back(j);
      else
        throw std::invalid_argument("|" + ket + "> occupies path '" + state.paths()[j] +
                                    "' outside the signal/idler registry");
    }
    if (sig.size() != 1 || idl.size() != 1)
      throw std::invalid_argument("|" + ket + "> does not occupy exactly one signal and one idler path");
    const PathPair key{state.paths()[sig[0]], state.paths()[idl[0]]};
    const int k = 2 * detail::pol_index(ket[sig[0]]) + detail::pol_index(ket[idl[0]]);
    auto it = acc.try_emplace(key, Vector4cd::Zero()).first;
    it->second(k) = times_i(amp.ck);
  }
  if (out.aux() != complex_t{1.0, 0.0}) throw std::invalid_argument("state has no vacuum component");
  for (const auto& [k, v] : acc) out.set_block(k, v);
  return out;
}

/// Rebuilds aux |vac> - i k |eff> over `paths`.
inline KetState effective_to_unitary(const EffState& eff, const std::vector<std::string>& paths) {
  KetState shape(paths, {});
  TermAccumulator acc;
  acc.add(shape.vacuum_ket(), PerturbAmp{eff.aux(), {}, {}});
  for (const auto& [key, v] : eff.blocks()) {
    const auto ps = shape.index_of(key.first), pi = shape.index_of(key.second);
    for (int k = 0; k < 4; ++k) {
      Ket ket = shape.vacuum_ket();
      ket[ps] = detail::pol_symbol(k / 2);
      ket[pi] = detail::pol_symbol(k % 2);
      acc.add(ket, PerturbAmp{{}, times_minus_i(v(k)), {}});
    }
  }
  return std::move(acc).finish(paths);
}

}  // namespace icnl
