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

// Post-selected quantities of first-order states: the pair-sector weight,
// conditional (reduced) density matrices, fidelities, detector
// probabilities, and parameter sweeps.

#include <Eigen/Dense>
#include <algorithm>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "icnl/circuit.hpp"
#include "icnl/gates.hpp"
#include "icnl/perturb.hpp"

namespace icnl {

/// Sum of |c_k|^2 over non-vacuum terms. The physical detection probability
/// is this coefficient times |g alpha|^2.
inline double pair_probability_coefficient(const KetState& state) {
  const Ket vac = state.vacuum_ket();
  double sum = 0.0;
  for (const auto& [ket, amp] : state.terms())
    if (ket != vac) sum += std::norm(amp.ck);
  return sum;
}

/// First-order amplitudes of the detectable (non-vacuum) terms.
inline std::vector<std::pair<Ket, complex_t>> kappa_sector(const KetState& state) {
  std::vector<std::pair<Ket, complex_t>> out;
  const Ket vac = state.vacuum_ket();
  for (const auto& [ket, amp] : state.terms())
    if (ket != vac && amp.ck != complex_t{}) out.emplace_back(ket, amp.ck);
  return out;
}

/// Density matrix over kets of the kept paths, conditioned on a pair being
/// emitted. The basis lists only kets in the support, sorted.
struct ConditionalDensity {
  std::vector<std::string> paths;  // kept paths, in ket order
  std::vector<Ket> basis;
  MatrixXcd matrix;

  std::size_t index_of(const Ket& k) const {
    auto it = std::lower_bound(basis.begin(), basis.end(), k);
    if (it == basis.end() || *it != k) return basis.size();
    return static_cast<std::size_t>(it - basis.begin());
  }

  /// <row|rho|col>, zero outside the support.
  complex_t element(const Ket& row, const Ket& col) const {
    const auto r = index_of(row), c = index_of(col);
    if (r == basis.size() || c == basis.size()) return {};
    return matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  double trace() const { return matrix.trace().real(); }

  /// Hermitian within 1e-12, unit trace within 1e-12, eigenvalues >= -1e-10.
  bool is_valid() const {
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12) return false;
    if (std::abs(matrix.trace() - complex_t(1.0)) > 1e-12) return false;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (matrix + matrix.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-10;
  }
};

namespace detail {

inline std::vector<std::size_t> keep_positions(const std::vector<std::string>& all, const std::vector<std::string>& keep) {
  if (keep.empty()) throw std::invalid_argument("no paths to keep");
  std::vector<std::size_t> pos;
  for (const auto& k : keep) {
    auto it = std::find(all.begin(), all.end(), k);
    if (it == all.end()) throw std::invalid_argument("unknown path '" + k + "'");
    const auto p = static_cast<std::size_t>(it - all.begin());
    if (std::find(pos.begin(), pos.end(), p) != pos.end()) throw std::invalid_argument("path '" + k + "' kept twice");
    pos.push_back(p);
  }
  return pos;
}

inline std::pair<Ket, Ket> split_ket(const Ket& ket, const std::vector<std::size_t>& keep) {
  Ket kept, env;
  for (auto p : keep) kept += ket[p];
  for (std::size_t j = 0; j < ket.size(); ++j)
    if (std::find(keep.begin(), keep.end(), j) == keep.end()) env += ket[j];
  return {kept, env};
}

/// rho_keep = sum_env |v(kept, env)><v(kept', env)| from sparse amplitudes.
inline ConditionalDensity reduce(const std::vector<std::pair<Ket, complex_t>>& amps,
                                 const std::vector<std::string>& all, const std::vector<std::string>& keep) {
  const auto pos = keep_positions(all, keep);
  std::map<Ket, std::vector<std::pair<Ket, complex_t>>> by_env;
  std::set<Ket> support;
  double norm2 = 0.0;
  for (const auto& [ket, a] : amps) {
    auto [kept, env] = split_ket(ket, pos);
    by_env[env].emplace_back(kept, a);
    support.insert(kept);
    norm2 += std::norm(a);
  }
  if (norm2 == 0.0) throw std::invalid_argument("empty pair sector: nothing to post-select");
  ConditionalDensity rho;
  rho.paths = keep;
  rho.basis.assign(support.begin(), support.end());
  const auto n = static_cast<Eigen::Index>(rho.basis.size());
  rho.matrix = MatrixXcd::Zero(n, n);
  for (const auto& [env, list] : by_env)
    for (const auto& [kr, ar] : list)
      for (const auto& [kc, ac] : list)
        rho.matrix(static_cast<Eigen::Index>(rho.index_of(kr)), static_cast<Eigen::Index>(rho.index_of(kc))) +=
            ar * std::conj(ac) / norm2;
  return rho;
}

}  // namespace detail

/// Normalized density matrix of the pair sector with every path outside
/// `keep` traced out.
inline ConditionalDensity conditional_density(const KetState& state, const std::vector<std::string>& keep) {
  return detail::reduce(kappa_sector(state), state.paths(), keep);
}

/// Further partial trace of a conditional density onto `keep`.
inline ConditionalDensity partial_trace(const ConditionalDensity& rho, const std::vector<std::string>& keep) {
  const auto pos = detail::keep_positions(rho.paths, keep);
  ConditionalDensity out;
  out.paths = keep;
  std::set<Ket> support;
  std::vector<std::pair<Ket, Ket>> split;
  for (const auto& b : rho.basis) {
    split.push_back(detail::split_ket(b, pos));
    support.insert(split.back().first);
  }
  out.basis.assign(support.begin(), support.end());
  const auto n = static_cast<Eigen::Index>(out.basis.size());
  out.matrix = MatrixXcd::Zero(n, n);
  for (std::size_t r = 0; r < split.size(); ++r)
    for (std::size_t c = 0; c < split.size(); ++c)
      if (split[r].second == split[c].second)
        out.matrix(static_cast<Eigen::Index>(out.index_of(split[r].first)),
                   static_cast<Eigen::Index>(out.index_of(split[c].first))) +=
            rho.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return out;
}

/// <psi|rho|psi> for a unit vector in the density's basis.
inline double fidelity(const ConditionalDensity& rho, const VectorXcd& psi) {
  if (psi.size() != rho.matrix.rows()) throw std::invalid_argument("state dimension does not match the density basis");
  return (psi.adjoint() * rho.matrix * psi)(0, 0).real();
}

/// Same, with the state given as ket -> amplitude over the kept paths.
/// Components outside the support contribute nothing.
inline double fidelity(const ConditionalDensity& rho, const std::map<Ket, complex_t>& psi) {
  VectorXcd v = VectorXcd::Zero(static_cast<Eigen::Index>(rho.basis.size()));
  for (const auto& [k, a] : psi) {
    if (k.size() != rho.paths.size()) throw std::invalid_argument("ket '" + k + "' does not match the kept paths");
    const auto i = rho.index_of(k);
    if (i < rho.basis.size()) v(static_cast<Eigen::Index>(i)) = a;
  }
  return fidelity(rho, v);
}

/// Probability that a photon reaches each listed path, given that a pair
/// was emitted.
inline std::vector<std::pair<std::string, double>> detector_probabilities(const KetState& state,
                                                                          const std::vector<std::string>& paths) {
  const auto amps = kappa_sector(state);
  double total = 0.0;
  for (const auto& [k, a] : amps) total += std::norm(a);
  if (total == 0.0) throw std::invalid_argument("empty pair sector: nothing to post-select");
  std::vector<std::pair<std::string, double>> out;
  for (const auto& p : paths) {
    const auto j = state.index_of(p);
    double w = 0.0;
    for (const auto& [k, a] : amps)
      if (is_occupied(k[j])) w += std::norm(a);
    out.emplace_back(p, w / total);
  }
  return out;
}

/// Final state plus the results of the circuit's probes.
struct RunResult {
  KetState state;
  double pair_coefficient = 0.0;
  std::optional<ConditionalDensity> density;                         // last trace_keep
  std::optional<std::vector<std::pair<std::string, double>>> detectors;  // last measure
};

inline RunResult run_circuit(const Circuit& c, const ParamEnv& env) {
  RunResult r;
  r.state = evolve(c, env, [&](const GateApplication& g, const KetState& s) {
    if (g.kind == GateKind::TraceKeep)
      r.density = conditional_density(s, g.targets);
    else
      r.detectors = detector_probabilities(s, g.targets);
  });
  r.pair_coefficient = pair_probability_coefficient(r.state);
  return r;
}

inline RunResult run_circuit(const Circuit& c, const std::vector<Param>& overrides = {}) {
  return run_circuit(c, resolve_params(c, overrides));
}

struct SweepRow {
  double value = 0.0;
  double pair_coefficient = 0.0;
  std::vector<std::pair<std::string, double>> detectors;
};

struct SweepTable {
  std::string param;
  std::vector<SweepRow> rows;
};

/// Evaluates `tmpl` once per grid value of parameter `name`. Rows are
/// computed concurrently and returned in grid order.
inline SweepTable sweep(const Circuit& tmpl, const std::string& name, const std::vector<double>& grid,
                        const std::vector<Param>& overrides = {}) {
  if (!tmpl.has_param(name)) throw std::invalid_argument("unknown parameter '" + name + "'");
  auto row_at = [&tmpl, &name, &overrides](double v) {
    std::vector<Param> ov = overrides;
    std::erase_if(ov, [&](const Param& p) { return p.name == name; });
    ov.push_back({name, Expr(v)});
    RunResult r = run_circuit(tmpl, ov);
    SweepRow row{v, r.pair_coefficient, {}};
    if (r.detectors) row.detectors = *r.detectors;
    return row;
  };
  SweepTable t{name, {}};
  t.rows.reserve(grid.size());
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < grid.size(); start += width) {
    std::vector<std::future<SweepRow>> jobs;
    for (std::size_t k = start; k < std::min(grid.size(), start + width); ++k)
      jobs.push_back(std::async(std::launch::async, row_at, grid[k]));
    for (auto& j : jobs) t.rows.push_back(j.get());
  }
  return t;
}

}  // namespace icnl
