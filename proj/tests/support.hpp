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

// Shared generators and dense reference operators for the unit tests.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "icnl/icnl.hpp"

namespace support {

using icnl::complex_t;
using icnl::Ket;
using icnl::KetState;
using icnl::PerturbAmp;

using Rng = std::mt19937_64;

inline complex_t gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

/// Gaussian integers in [-lim, lim]^2: products and sums stay exact.
inline complex_t gauss_int(Rng& rng, int lim = 8) {
  std::uniform_int_distribution<int> d(-lim, lim);
  const int re = d(rng);
  return {static_cast<double>(re), static_cast<double>(d(rng))};
}

inline PerturbAmp int_amp(Rng& rng) {
  const complex_t a = gauss_int(rng), b = gauss_int(rng);
  return {a, b, gauss_int(rng)};
}

inline PerturbAmp amp(Rng& rng) {
  const complex_t a = gaussian(rng), b = gaussian(rng);
  return {a, b, gaussian(rng)};
}

inline Eigen::VectorXcd haar_vector(Eigen::Index n, Rng& rng) {
  Eigen::VectorXcd v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = gaussian(rng);
  return v / v.norm();
}

/// Haar unitary from the QR decomposition of a Ginibre matrix.
inline Eigen::MatrixXcd haar_unitary(Eigen::Index n, Rng& rng) {
  Eigen::MatrixXcd z(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) z(r, c) = gaussian(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) q.col(k) *= std::polar(1.0, std::arg(r(k, k)));
  return q;
}

// ---------------------------------------------------------------------------
// Dense operators over PerturbAmp on an n-qutrit register, basis index in
// base 3 with digits 0 -> '0', 1 -> 'H', 2 -> 'V' (first path most
// significant).

inline std::size_t dim_of(std::size_t n_paths) {
  std::size_t d = 1;
  for (std::size_t k = 0; k < n_paths; ++k) d *= 3;
  return d;
}

inline Ket ket_of(std::size_t index, std::size_t n_paths) {
  Ket k(n_paths, '0');
  for (std::size_t j = n_paths; j-- > 0;) {
    k[j] = "0HV"[index % 3];
    index /= 3;
  }
  return k;
}

inline std::size_t index_of(const Ket& k) {
  std::size_t idx = 0;
  for (char c : k) idx = idx * 3 + (c == '0' ? 0 : c == 'H' ? 1 : 2);
  return idx;
}

inline std::vector<Ket> all_kets(std::size_t n_paths) {
  std::vector<Ket> out;
  for (std::size_t k = 0; k < dim_of(n_paths); ++k) out.push_back(ket_of(k, n_paths));
  return out;
}

struct DenseOp {
  std::size_t n_paths = 0;
  std::vector<PerturbAmp> m;  // row-major, dim x dim

  static DenseOp identity(std::size_t n) {
    DenseOp op{n, std::vector<PerturbAmp>(dim_of(n) * dim_of(n))};
    for (std::size_t k = 0; k < dim_of(n); ++k) op.at(k, k) = PerturbAmp::one();
    return op;
  }
  std::size_t dim() const { return dim_of(n_paths); }
  PerturbAmp& at(std::size_t r, std::size_t c) { return m[r * dim() + c]; }
  const PerturbAmp& at(std::size_t r, std::size_t c) const { return m[r * dim() + c]; }
  PerturbAmp& at(const Ket& r, const Ket& c) { return at(index_of(r), index_of(c)); }

  friend DenseOp operator*(const DenseOp& a, const DenseOp& b) {
    DenseOp out{a.n_paths, std::vector<PerturbAmp>(a.m.size())};
    for (std::size_t r = 0; r < a.dim(); ++r)
      for (std::size_t c = 0; c < a.dim(); ++c) {
        PerturbAmp s;
        for (std::size_t k = 0; k < a.dim(); ++k) s = s + a.at(r, k) * b.at(k, c);
        out.at(r, c) = s;
      }
    return out;
  }

  /// Conjugate transpose; conjugation swaps the k and kb coefficients.
  DenseOp adjoint() const {
    DenseOp out{n_paths, std::vector<PerturbAmp>(m.size())};
    for (std::size_t r = 0; r < dim(); ++r)
      for (std::size_t c = 0; c < dim(); ++c) {
        const PerturbAmp& a = at(c, r);
        out.at(r, c) = PerturbAmp{std::conj(a.c0), std::conj(a.ckb), std::conj(a.ck)};
      }
    return out;
  }

  KetState apply(const KetState& s) const {
    std::vector<PerturbAmp> v(dim());
    for (const auto& [k, a] : s.terms()) v[index_of(k)] = a;
    icnl::TermAccumulator acc;
    for (std::size_t r = 0; r < dim(); ++r) {
      PerturbAmp x;
      for (std::size_t c = 0; c < dim(); ++c) x = x + at(r, c) * v[c];
      acc.add(ket_of(r, n_paths), x);
    }
    return std::move(acc).finish(s.paths());
  }

  friend bool operator==(const DenseOp& a, const DenseOp& b) { return a.n_paths == b.n_paths && a.m == b.m; }
};

/// Dense matrix of a state map, column k = f(|k>).
template <class F>
DenseOp dense_of(const std::vector<std::string>& paths, F&& f) {
  DenseOp op{paths.size(), std::vector<PerturbAmp>(dim_of(paths.size()) * dim_of(paths.size()))};
  for (std::size_t c = 0; c < op.dim(); ++c) {
    const KetState out = f(KetState(paths, {{ket_of(c, paths.size()), PerturbAmp::one()}}));
    for (const auto& [k, a] : out.terms()) op.at(index_of(k), c) = a;
  }
  return op;
}

inline KetState basis_state(const std::vector<std::string>& paths, const Ket& k) {
  return KetState(paths, {{k, PerturbAmp::one()}});
}

/// Random superposition over the given kets.
inline KetState random_state(const std::vector<std::string>& paths, const std::vector<Ket>& kets, Rng& rng) {
  icnl::TermAccumulator acc;
  for (const auto& k : kets) acc.add(k, amp(rng));
  return std::move(acc).finish(paths);
}

}  // namespace support
