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


#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace icnl;
using support::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

/// State with random first-order amplitudes on every non-vacuum ket.
KetState random_pair_state(const std::vector<std::string>& paths, Rng& rng, double density = 0.6) {
  std::bernoulli_distribution keep(density);
  TermAccumulator acc;
  for (const auto& k : support::all_kets(paths.size())) {
    if (k == Ket(paths.size(), '0')) {
      acc.add(k, PerturbAmp::one());
    } else if (keep(rng)) {
      acc.add(k, PerturbAmp{{}, support::gaussian(rng), support::gaussian(rng)});
    }
  }
  return std::move(acc).finish(paths);
}

/// Dense reduced density by explicit summation over every environment ket.
Eigen::MatrixXcd dense_reduced(const KetState& s, const std::vector<std::size_t>& keep) {
  const std::size_t n = s.paths().size();
  const auto dk = static_cast<Eigen::Index>(support::dim_of(keep.size()));
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
  double norm2 = 0.0;
  const Ket vac(n, '0');
  auto amp = [&](const Ket& k) { return k == vac ? complex_t{} : s.amplitude(k).ck; };
  for (const auto& a : support::all_kets(n)) {
    norm2 += std::norm(amp(a));
    for (const auto& b : support::all_kets(n)) {
      bool same_env = true;
      Ket ka, kb;
      for (std::size_t j = 0; j < n; ++j) {
        if (std::find(keep.begin(), keep.end(), j) == keep.end()) {
          same_env = same_env && a[j] == b[j];
        }
      }
      if (!same_env) continue;
      for (auto j : keep) {
        ka += a[j];
        kb += b[j];
      }
      rho(static_cast<Eigen::Index>(support::index_of(ka)), static_cast<Eigen::Index>(support::index_of(kb))) +=
          amp(a) * std::conj(amp(b));
    }
  }
  return rho / norm2;
}

TEST(PairCoefficient, Values) {
  EXPECT_EQ(pair_probability_coefficient(vacuum_state({"a", "b"})), 0.0);
  EXPECT_EQ(pair_probability_coefficient(evolve(build_bell())), 2.0);
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (int k = 0; k < 100; ++k) {
    const double phi = u(rng);
    const double a = pair_probability_coefficient(evolve(build_frustrated(phi)));
    const double b = pair_probability_coefficient(evolve(build_frustrated(phi + kPi)));
    EXPECT_NEAR(a, std::norm(1.0 + std::polar(1.0, -phi)), 1e-12);
    EXPECT_NEAR(a + b, 4.0, 1e-12);
  }
}

TEST(ConditionalDensity, MatchesDenseReduction) {
  Rng rng(11);
  const std::vector<std::string> paths = {"a", "b", "c"};
  const std::vector<std::vector<std::size_t>> keeps = {{0}, {1, 2}, {2, 0}, {0, 1, 2}};
  for (int trial = 0; trial < 40; ++trial) {
    const KetState s = random_pair_state(paths, rng);
    if (kappa_sector(s).empty()) continue;
    for (const auto& keep : keeps) {
      std::vector<std::string> names;
      for (auto j : keep) names.push_back(paths[j]);
      const ConditionalDensity rho = conditional_density(s, names);
      EXPECT_TRUE(rho.is_valid());
      const Eigen::MatrixXcd want = dense_reduced(s, keep);
      for (const auto& r : support::all_kets(keep.size()))
        for (const auto& c : support::all_kets(keep.size()))
          EXPECT_LT(std::abs(rho.element(r, c) - want(static_cast<Eigen::Index>(support::index_of(r)),
                                                      static_cast<Eigen::Index>(support::index_of(c)))),
                    1e-12);
    }
  }
}

TEST(ConditionalDensity, TraceComposes) {
  Rng rng(12);
  const std::vector<std::string> paths = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 30; ++trial) {
    const KetState s = random_pair_state(paths, rng, 0.3);
    if (kappa_sector(s).empty()) continue;
    const ConditionalDensity all = conditional_density(s, paths);
    const ConditionalDensity mid = partial_trace(all, {"d", "b", "a"});
    for (const std::vector<std::string>& keep :
         {std::vector<std::string>{"b", "d"}, std::vector<std::string>{"a"}, std::vector<std::string>{"d", "b", "a"}}) {
      const ConditionalDensity once = conditional_density(s, keep);
      for (const ConditionalDensity& twice : {partial_trace(all, keep), partial_trace(mid, keep)}) {
        ASSERT_EQ(twice.basis, once.basis);
        EXPECT_LT((twice.matrix - once.matrix).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

TEST(ConditionalDensity, PureWhenNothingTraced) {
  const KetState s = evolve(build_frustrated(1.0));
  const ConditionalDensity rho = conditional_density(s, s.paths());
  EXPECT_LT((rho.matrix * rho.matrix - rho.matrix).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
}

TEST(ConditionalDensity, Bell) {
  const RunResult r = run_circuit(build_bell());
  ASSERT_TRUE(r.density);
  EXPECT_EQ(r.density->basis, (std::vector<Ket>{"HH", "VV"}));
  EXPECT_LT((r.density->matrix - Eigen::MatrixXcd::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff(), 1e-12);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(fidelity(*r.density, {{"HH", s}, {"VV", s}}), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(*r.density, {{"HH", s}, {"VV", -s}}), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(*r.density, {{"HV", 1.0}}), 0.0, 1e-12);
}

TEST(ConditionalDensity, GoldenCircuitsValid) {
  for (const auto& [name, c] : golden_examples()) {
    const RunResult r = run_circuit(c);
    if (r.density) EXPECT_TRUE(r.density->is_valid()) << name;
  }
}

TEST(ConditionalDensity, Errors) {
  EXPECT_THROW(conditional_density(vacuum_state({"a", "b"}), {"a"}), std::invalid_argument);
  const KetState s = evolve(build_bell());
  EXPECT_THROW(conditional_density(s, {"zz"}), std::invalid_argument);
  EXPECT_THROW(conditional_density(s, {"s2", "s2"}), std::invalid_argument);
  EXPECT_THROW(conditional_density(s, {}), std::invalid_argument);
  const ConditionalDensity rho = conditional_density(s, {"s2", "i2"});
  EXPECT_THROW(fidelity(rho, Eigen::VectorXcd::Ones(3)), std::invalid_argument);
  EXPECT_THROW(fidelity(rho, std::map<Ket, complex_t>{{"H", 1.0}}), std::invalid_argument);
}

TEST(Fidelity, ProjectorAndOrthogonal) {
  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXcd psi = support::haar_vector(3, rng);
    ConditionalDensity rho;
    rho.paths = {"a"};
    rho.basis = {"0", "H", "V"};
    rho.matrix = psi * psi.adjoint();
    EXPECT_NEAR(fidelity(rho, psi), 1.0, 1e-12);
    Eigen::VectorXcd other = support::haar_vector(3, rng);
    other -= psi * psi.dot(other);
    other.normalize();
    EXPECT_NEAR(fidelity(rho, other), 0.0, 1e-12);
  }
}

TEST(Detectors, Frustrated) {
  const KetState s = evolve(build_frustrated(0.3));
  const auto d = detector_probabilities(s, {"s1", "i1", "s2", "i2"});
  EXPECT_EQ(d[0].second, 0.0);
  EXPECT_EQ(d[1].second, 0.0);
  EXPECT_NEAR(d[2].second, 1.0, 1e-15);
  EXPECT_NEAR(d[3].second, 1.0, 1e-15);
  EXPECT_THROW(detector_probabilities(vacuum_state({"a"}), {"a"}), std::invalid_argument);
}

TEST(Sweep, FrustratedFringe) {
  const SweepTable t = sweep(build_frustrated(), "PHI", {0.0, kPi / 2, kPi});
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0].pair_coefficient, 4.0);
  EXPECT_NEAR(t.rows[1].pair_coefficient, 2.0, 1e-15);
  EXPECT_EQ(t.rows[2].pair_coefficient, 0.0);
}

TEST(Sweep, ObjectDetectors) {
  std::vector<double> grid;
  for (int k = 0; k < 17; ++k) grid.push_back(2.0 * kPi * k / 16.0);
  const SweepTable t = sweep(build_object_id(0.7), "GAMMA", grid);
  ASSERT_EQ(t.rows.size(), grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    EXPECT_EQ(t.rows[k].value, grid[k]);
    ASSERT_EQ(t.rows[k].detectors.size(), 2u);
    EXPECT_NEAR(t.rows[k].detectors[0].second, 0.5 * (1 + 0.7 * std::cos(grid[k])), 1e-12);
  }
}

TEST(Sweep, OrderAndDirectRuns) {
  std::vector<double> grid;
  Rng rng(9);
  std::uniform_real_distribution<double> u(0.0, 7.0);
  for (int k = 0; k < 40; ++k) grid.push_back(u(rng));
  const Circuit c = build_frustrated();
  const SweepTable t = sweep(c, "PHI", grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    EXPECT_EQ(t.rows[k].value, grid[k]);
    EXPECT_EQ(t.rows[k].pair_coefficient, run_circuit(c, {{"PHI", Expr(grid[k])}}).pair_coefficient);
  }
  const SweepTable one = sweep(c, "PHI", {1.25});
  ASSERT_EQ(one.rows.size(), 1u);
  EXPECT_EQ(one.rows[0].pair_coefficient, run_circuit(c, {{"PHI", Expr(1.25)}}).pair_coefficient);
  EXPECT_THROW(sweep(c, "NOPE", {0.0}), std::invalid_argument);
}

TEST(Report, JsonShape) {
  RunResult r = run_circuit(build_bell());
  const auto j = to_json(r);
  EXPECT_EQ(j["paths"], (nlohmann::json{"s1", "i1", "s2", "i2"}));
  ASSERT_EQ(j["kappa_sector"].size(), 2u);
  EXPECT_EQ(j["kappa_sector"][0]["ket"], "00HH");
  EXPECT_EQ(j["kappa_sector"][0]["im"], -1.0);
  EXPECT_EQ(j["pair_coefficient"], 2.0);
  EXPECT_EQ(j["density"]["basis"], (nlohmann::json{"HH", "VV"}));
  EXPECT_EQ(j["density"]["re"][0][1], 0.5);
  EXPECT_FALSE(j.contains("detectors"));
  const std::string csv = to_csv(r);
  EXPECT_NE(csv.find("pair_coefficient,,2,0\n"), std::string::npos);
}

}  // namespace
