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

/// First-order perturbative amplitudes and sparse multi-path qutrit states.
///
/// Every amplitude is an element of the truncated ring C[k, kb] / (order >= 2)
/// where k = g*alpha is the pair-creation parameter and kb its conjugate.
/// Keeping the series symbolic makes interference cancellations exact: the
/// numeric size of k only matters once amplitudes are turned into
/// probabilities.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace icnl {

using complex_t = std::complex<double>;

inline constexpr complex_t kI{0.0, 1.0};

/// Multiplies by i by swapping components; exact in floating point.
constexpr complex_t times_i(complex_t z) { return {-z.imag(), z.real()}; }
/// Multiplies by -i by swapping components; exact in floating point.
constexpr complex_t times_minus_i(complex_t z) { return {z.imag(), -z.real()}; }

/// e^{i angle}, exact when the angle is a multiple of pi/2 up to a few ulps.
inline complex_t unit_phase(double angle) {
  constexpr double quarter = std::numbers::pi / 2.0;
  const double q = angle / quarter;
  const double r = std::nearbyint(q);
  if (std::abs(q) < 1e15 && std::abs(q - r) <= 8.0 * 2.220446049250313e-16 * std::max(1.0, std::abs(q))) {
    switch (((static_cast<long long>(r) % 4) + 4) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, angle);
}

/// Truncated series c0 + c_k * k + c_kb * kb.
struct PerturbAmp {
  complex_t c0{};
  complex_t ck{};
  complex_t ckb{};

  static constexpr PerturbAmp one() { return {{1.0, 0.0}, {}, {}}; }
  /// -i k, the pair-creation amplitude of a single crystal.
  static constexpr PerturbAmp minus_i_kappa(complex_t coupling = 1.0) {
    return {{}, times_minus_i(coupling), {}};
  }
  static constexpr PerturbAmp minus_i_kappa_bar(complex_t coupling = 1.0) {
    return {{}, {}, times_minus_i(std::conj(coupling))};
  }

  bool is_zero() const {
    return c0 == complex_t{} && ck == complex_t{} && ckb == complex_t{};
  }

  /// Numeric value for a concrete k.
  complex_t evaluate(complex_t kappa) const {
    return c0 + ck * kappa + ckb * std::conj(kappa);
  }

  PerturbAmp& operator+=(const PerturbAmp& o) {
    c0 += o.c0;
    ck += o.ck;
    ckb += o.ckb;
    return *this;
  }
  PerturbAmp& operator-=(const PerturbAmp& o) {
    c0 -= o.c0;
    ck -= o.ck;
    ckb -= o.ckb;
    return *this;
  }
  PerturbAmp& operator*=(complex_t s) {
    c0 *= s;
    ck *= s;
    ckb *= s;
    return *this;
  }

  friend PerturbAmp operator+(PerturbAmp a, const PerturbAmp& b) { return a += b; }
  friend PerturbAmp operator-(PerturbAmp a, const PerturbAmp& b) { return a -= b; }
  friend PerturbAmp operator-(const PerturbAmp& a) { return {-a.c0, -a.ck, -a.ckb}; }
  friend PerturbAmp operator*(PerturbAmp a, complex_t s) { return a *= s; }
  friend PerturbAmp operator*(complex_t s, PerturbAmp a) {
    return {s * a.c0, s * a.ck, s * a.ckb};
  }
  friend bool operator==(const PerturbAmp&, const PerturbAmp&) = default;

  friend std::ostream& operator<<(std::ostream& os, const PerturbAmp& a) {
    return os << '(' << a.c0 << ", " << a.ck << ", " << a.ckb << ')';
  }
};

/// Truncated product: k^2, k*kb and kb^2 contributions are dropped.
inline PerturbAmp amp_mul(const PerturbAmp& a, const PerturbAmp& b) {
  return {a.c0 * b.c0, a.c0 * b.ck + a.ck * b.c0, a.c0 * b.ckb + a.ckb * b.c0};
}

inline PerturbAmp operator*(const PerturbAmp& a, const PerturbAmp& b) {
  return amp_mul(a, b);
}

/// Per-path occupation: vacuum, one H photon or one V photon.
enum class Qutrit : char { Vac = '0', H = 'H', V = 'V' };

inline bool is_qutrit_symbol(char c) { return c == '0' || c == 'H' || c == 'V'; }

inline bool is_occupied(char c) { return c == 'H' || c == 'V'; }

/// One symbol per registered path, in registry order.
using Ket = std::string;

inline std::size_t photon_count(std::string_view ket) {
  return static_cast<std::size_t>(std::count_if(ket.begin(), ket.end(), is_occupied));
}

class KetState {
 public:
  using TermMap = std::map<Ket, PerturbAmp>;

  KetState() = default;

  /// Builds a state over `paths`; zero terms are pruned and every ket is
  /// checked against the registry.
  KetState(std::vector<std::string> paths, TermMap terms) : paths_(std::move(paths)) {
    validate_registry(paths_);
    for (auto& [ket, amp] : terms) {
      check_ket(ket);
      if (!amp.is_zero()) terms_.emplace(ket, amp);
    }
  }

  const std::vector<std::string>& paths() const { return paths_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  std::size_t index_of(std::string_view label) const {
    auto it = std::find(paths_.begin(), paths_.end(), label);
    if (it == paths_.end())
      throw std::invalid_argument("unregistered path '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - paths_.begin());
  }

  bool has_path(std::string_view label) const {
    return std::find(paths_.begin(), paths_.end(), label) != paths_.end();
  }

  PerturbAmp amplitude(std::string_view ket) const {
    auto it = terms_.find(Ket(ket));
    return it == terms_.end() ? PerturbAmp{} : it->second;
  }

  Ket vacuum_ket() const { return Ket(paths_.size(), '0'); }

  void check_ket(std::string_view ket) const {
    if (ket.size() != paths_.size())
      throw std::invalid_argument("ket '" + std::string(ket) + "' does not match " +
                                  std::to_string(paths_.size()) + " registered paths");
    for (char c : ket)
      if (!is_qutrit_symbol(c))
        throw std::invalid_argument("invalid occupation symbol in ket '" + std::string(ket) + "'");
  }

  friend bool operator==(const KetState&, const KetState&) = default;

  static void validate_registry(const std::vector<std::string>& paths) {
    if (paths.empty()) throw std::invalid_argument("path registry must not be empty");
    std::set<std::string_view> seen;
    for (const auto& p : paths) {
      if (p.empty()) throw std::invalid_argument("empty path label");
      if (!seen.insert(p).second) throw std::invalid_argument("duplicate path label '" + p + "'");
    }
  }

 private:
  std::vector<std::string> paths_;
  TermMap terms_;
};

/// Accumulates contributions into a fresh term map; zero terms are pruned on
/// `finish`.
class TermAccumulator {
 public:
  void add(const Ket& ket, const PerturbAmp& amp) {
    if (amp.is_zero()) return;
    terms_[ket] += amp;
  }
  KetState finish(std::vector<std::string> paths) && {
    return KetState(std::move(paths), std::move(terms_));
  }

 private:
  KetState::TermMap terms_;
};

inline KetState vacuum_state(std::vector<std::string> paths) {
  KetState::validate_registry(paths);
  Ket vac(paths.size(), '0');
  return KetState(std::move(paths), {{vac, PerturbAmp::one()}});
}

inline std::ostream& operator<<(std::ostream& os, const KetState& s) {
  os << '{';
  bool first = true;
  for (const auto& [ket, amp] : s.terms()) {
    os << (first ? "" : ", ") << '|' << ket << "> " << amp;
    first = false;
  }
  return os << '}';
}

enum class Order { Zeroth, Kappa, KappaBar };

/// Sub-state holding one coefficient of every term, stored in the order-0
/// slot. The k and kb coefficients are divided by -i so that
/// state = vac - i k eff holds exactly.
inline KetState extract_order(const KetState& state, Order which) {
  TermAccumulator acc;
  for (const auto& [ket, amp] : state.terms()) {
    complex_t v;
    switch (which) {
      case Order::Zeroth: v = amp.c0; break;
      case Order::Kappa: v = times_i(amp.ck); break;
      case Order::KappaBar: v = times_i(amp.ckb); break;
    }
    acc.add(ket, PerturbAmp{v, {}, {}});
  }
  return std::move(acc).finish(state.paths());
}

/// Largest componentwise difference between two states on the same registry.
inline double max_abs_difference(const KetState& a, const KetState& b) {
  if (a.paths() != b.paths()) throw std::invalid_argument("states use different path registries");
  double worst = 0.0;
  auto visit = [&](const KetState& x, const KetState& y, bool skip_common) {
    for (const auto& [ket, amp] : x.terms()) {
      if (skip_common && y.terms().count(ket)) continue;
      PerturbAmp d = amp - y.amplitude(ket);
      worst = std::max({worst, std::abs(d.c0), std::abs(d.ck), std::abs(d.ckb)});
    }
  };
  visit(a, b, false);
  visit(b, a, true);
  return worst;
}

}  // namespace icnl
