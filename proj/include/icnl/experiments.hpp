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

// Builders for the canonical crystal circuits and the modular superposition
// synthesizer.

#include <Eigen/Dense>
#include <stdexcept>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "icnl/circuit.hpp"
#include "icnl/gates.hpp"

namespace icnl {

/// Two crystals with a phase shifter on the first idler and both outputs
/// aligned into the second crystal. The pair amplitude is
/// -i k (1 + e^{-i PHI}) on |00HH>.
inline Circuit build_frustrated(Expr phi = Expr::pi()) {
  Circuit c;
  c.header = {" Frustrated pair generation: two crystals with aligned outputs."};
  c.paths = {"s1", "i1", "s2", "i2"};
  c.params = {{"PHI", std::move(phi)}};
  c.add(op::nl("s1", "i1"))
      .add(op::phase("i1", Expr::param("PHI")))
      .add(op::align("s1", "s2"))
      .add(op::align("i1", "i2"))
      .add(op::nl("s2", "i2"));
  c.sweep = SweepSpec{"PHI", {}, Expr(0.0), Expr(2.0) * Expr::pi(), 64};
  return c;
}

/// Frustrated layout with half-wave plates on s1 and i1: the pair leaves the
/// second crystal in |HH> + |VV>.
inline Circuit build_bell() {
  Circuit c;
  c.header = {" Polarization Bell state from two aligned crystals."};
  c.paths = {"s1", "i1", "s2", "i2"};
  c.add(op::nl("s1", "i1"))
      .add(op::hwp("s1"))
      .add(op::hwp("i1"))
      .add(op::align("s1", "s2"))
      .add(op::align("i1", "i2"))
      .add(op::nl("s2", "i2"))
      .add(op::trace_keep({"s2", "i2"}));
  return c;
}

/// Point-like object (transmittance T, phase GAMMA) on the first idler; the
/// signals are kept, optionally interfered on a beam splitter and measured.
inline Circuit build_object_id(Expr t = 0.7, Expr gamma = Expr::pi() / 4.0, bool with_beam_splitter = true) {
  Circuit c;
  c.header = {" Identification of a point-like object with undetected photons."};
  c.paths = {"s1", "i1", "s2", "i2", "w"};
  c.params = {{"T", std::move(t)}, {"GAMMA", std::move(gamma)}};
  c.add(op::nl("s1", "i1"))
      .add(op::object("i1", "w", Expr::param("T"), Expr::param("GAMMA")))
      .add(op::align("i1", "i2"))
      .add(op::nl("s2", "i2"))
      .add(op::trace_keep({"s1", "s2"}));
  if (with_beam_splitter) c.add(op::bs("s1", "s2")).add(op::measure({"s1", "s2"}));
  return c;
}

/// Frustrated generation with a single-photon pump shared in superposition
/// between two crystals. The phase sits on i1, or on s1 when requested.
inline Circuit build_frustrated_single_pump(Expr phi = Expr::pi(), bool phase_on_signal = false) {
  Circuit c;
  c.header = {" Frustrated pair generation with a single-photon pump."};
  c.paths = {"p1", "s1", "i1", "p2", "s2", "i2"};
  c.params = {{"PHI", std::move(phi)}};
  c.init = {{std::nullopt, "H00000"}, {std::nullopt, "000H00"}};
  c.add(op::nl1p("p1", "s1", "i1"))
      .add(op::phase(phase_on_signal ? "s1" : "i1", Expr::param("PHI")))
      .add(op::align("s1", "s2"))
      .add(op::align("i1", "i2"))
      .add(op::nl1p("p2", "s2", "i2"));
  return c;
}

enum class SuperpositionMode { TwoPhoton, SinglePhotonMarginal };

struct SuperpositionSpec {
  std::vector<VectorXcd> targets;  // 4-vectors over {HH,HV,VH,VV}, or 2-vectors over {H,V}
  std::vector<int> weights;        // empty means all 1
  SuperpositionMode mode = SuperpositionMode::TwoPhoton;

  std::size_t dimension() const { return mode == SuperpositionMode::TwoPhoton ? 4 : 2; }
  int weight(std::size_t i) const { return weights.empty() ? 1 : weights.at(i); }

  void validate() const {
    if (targets.empty()) throw std::invalid_argument("superposition needs at least one target");
    if (!weights.empty() && weights.size() != targets.size())
      throw std::invalid_argument("one weight per target required");
    for (const auto& t : targets) {
      if (static_cast<std::size_t>(t.size()) != dimension())
        throw std::invalid_argument("target has the wrong dimension for the mode");
      if (std::abs(t.norm() - 1.0) > 1e-10) throw std::invalid_argument("target is not unit norm");
    }
    for (int w : weights)
      if (w < 1) throw std::invalid_argument("weights must be >= 1");
  }
};

/// U(1)|H..> = phi_1 and U(i)|H..> = U(i-1)^-1 ... U(1)^-1 phi_i, each
/// completed by a Householder reflection.
inline std::vector<MatrixXcd> solve_unitaries(const SuperpositionSpec& spec) {
  spec.validate();
  std::vector<MatrixXcd> us;
  const auto n = static_cast<Eigen::Index>(spec.dimension());
  MatrixXcd undo = MatrixXcd::Identity(n, n);  // U(i-1)^-1 ... U(1)^-1
  for (const auto& phi : spec.targets) {
    VectorXcd v = undo * phi;
    v /= v.norm();
    us.push_back(householder_completion(v));
    undo = us.back().adjoint() * undo;
  }
  return us;
}

namespace detail {

inline MatrixSpec numeric_matrix(const MatrixXcd& u) {
  std::vector<std::vector<ComplexExpr>> rows;
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    std::vector<ComplexExpr> row;
    for (Eigen::Index c = 0; c < u.cols(); ++c) row.emplace_back(Expr(u(r, c).real()), Expr(u(r, c).imag()));
    rows.push_back(std::move(row));
  }
  return MatrixSpec::explicit_rows(std::move(rows));
}

}  // namespace detail

/// Chain NL^k_N, U(N), NL^k_{N-1}, U(N-1), ..., NL^k_1, U(1) on one
/// signal/idler pair. `skip` removes the crystals of one target (0-based).
inline Circuit build_superposition(const SuperpositionSpec& spec, std::optional<std::size_t> skip = std::nullopt) {
  const auto us = solve_unitaries(spec);
  Circuit c;
  c.header = {" Modular superposition of " + std::to_string(spec.targets.size()) + " target states."};
  c.paths = {"s", "i"};
  for (std::size_t k = us.size(); k-- > 0;) {
    if (skip != k)
      for (int rep = 0; rep < spec.weight(k); ++rep) c.add(op::nl("s", "i"));
    if (spec.mode == SuperpositionMode::TwoPhoton)
      c.add(op::unitary("s", "i", detail::numeric_matrix(us[k])));
    else
      c.add(op::unitary("s", detail::numeric_matrix(us[k])));
  }
  c.add(op::trace_keep(spec.mode == SuperpositionMode::TwoPhoton ? std::vector<std::string>{"s", "i"}
                                                                  : std::vector<std::string>{"s"}));
  return c;
}

/// The four circuits written by `icnl examples`, keyed by file name.
inline std::vector<std::pair<std::string, Circuit>> golden_examples() {
  SuperpositionSpec spec;
  VectorXcd hh = VectorXcd::Zero(4), vv = VectorXcd::Zero(4);
  hh(0) = 1.0;
  vv(3) = 1.0;
  spec.targets = {hh, vv};
  return {{"frustrated.icl", build_frustrated()},
          {"bell.icl", build_bell()},
          {"object_id.icl", build_object_id()},
          {"superposition.icl", build_superposition(spec)}};
}

}  // namespace icnl
