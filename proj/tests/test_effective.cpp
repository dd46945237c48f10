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

const complex_t I{0.0, 1.0};
const PathPair kSI{"s", "i"};

EffState single() { return EffState::vacuum({"s"}, {"i"}); }

Vector4cd random_block(Rng& rng) {
  Vector4cd v;
  for (int k = 0; k < 4; ++k) v(k) = support::gaussian(rng);
  return v;
}

TEST(Superposer, Examples) {
  const EffState one = eff_apply_nl(single(), "s", "i");
  EXPECT_EQ(one.block(kSI), Vector4cd(1, 0, 0, 0));
  EffState vv = single();
  vv.set_block(kSI, Vector4cd(0, 0, 0, 1));
  EXPECT_EQ(eff_apply_nl(vv, "s", "i").block(kSI), Vector4cd(1, 0, 0, 1));
  EXPECT_EQ(eff_apply_nl(one, "s", "i").block(kSI), Vector4cd(2, 0, 0, 0));
  EXPECT_THROW(eff_apply_nl(single(), "i", "s"), std::invalid_argument);
}

TEST(EffUnitary, Examples) {
  Rng rng(3);
  const Matrix4cd u = support::haar_unitary(4, rng);
  const EffState hh = eff_apply_nl(single(), "s", "i");
  EXPECT_EQ(eff_apply_unitary(hh, "s", "i", u).block(kSI), Vector4cd(u.col(0)));
  EXPECT_EQ(eff_apply_unitary(hh, "s", "i", Matrix4cd::Identity()), hh);
  Matrix4cd xx = Matrix4cd::Zero();
  xx(3, 0) = xx(2, 1) = xx(1, 2) = xx(0, 3) = 1.0;
  EXPECT_EQ(eff_apply_unitary(hh, "s", "i", xx).block(kSI), Vector4cd(0, 0, 0, 1));
  EXPECT_EQ(eff_apply_unitary(single(), "s", "i", u), single());
}

TEST(Translation, Examples) {
  const Matrix5cd t = translation_matrix();
  Vector5cd e0 = Vector5cd::Zero(), e1 = Vector5cd::Zero();
  e0(0) = 1.0;
  e1(1) = 1.0;
  Vector5cd expect = Vector5cd::Zero();
  expect(0) = expect(1) = 1.0;
  EXPECT_EQ(Vector5cd(t * e0), expect);
  EXPECT_EQ(Vector5cd(t * e1), e1);
}

TEST(Translation, AgreesWithSuperposer) {
  Rng rng(19);
  const Matrix5cd t = translation_matrix();
  for (int n = 0; n < 100; ++n) {
    EffState s = single();
    s.set_block(kSI, random_block(rng));
    const Vector5cd lhs = t * to_extended(s, kSI);
    ASSERT_EQ(lhs, to_extended(eff_apply_nl(s, "s", "i"), kSI));
  }
}

TEST(Witness, Examples) {
  EffState hh = single(), vv = single();
  hh.set_block(kSI, Vector4cd(1, 0, 0, 0));
  vv.set_block(kSI, Vector4cd(0, 0, 0, 1));
  EXPECT_TRUE(eff_nonlinearity_witness(hh, vv, 1.0, 1.0, kSI));
  EffState zero = single();
  zero.set_block(kSI, Vector4cd::Zero());
  EXPECT_FALSE(eff_nonlinearity_witness(hh, zero, 1.0, 0.0, kSI));
  Rng rng(29);
  for (int n = 0; n < 100; ++n) {
    EffState a = single(), b = single();
    a.set_block(kSI, random_block(rng));
    b.set_block(kSI, random_block(rng));
    EXPECT_FALSE(eff_nonlinearity_witness(a, b, 0.5, 0.5, kSI));
    const complex_t c1 = support::gaussian(rng);
    EXPECT_FALSE(eff_nonlinearity_witness(a, b, c1, 1.0 - c1, kSI));
  }
}

TEST(Conversion, Examples) {
  const std::vector<std::string> paths = {"s", "i"};
  const KetState psi1(paths, {{"00", PerturbAmp::one()}, {"HH", PerturbAmp{0.0, -I, 0.0}}});
  const EffState e = unitary_to_effective(psi1, {"s"}, {"i"});
  EXPECT_EQ(e.block(kSI), Vector4cd(1, 0, 0, 0));
  EXPECT_EQ(e.aux(), complex_t(1.0, 0.0));
  EXPECT_EQ(effective_to_unitary(single(), paths), vacuum_state(paths));
  EXPECT_EQ(effective_to_unitary(e, paths), psi1);
  for (int n = 0; n < 16; ++n) {
    const double phi = 2.0 * std::numbers::pi * n / 16.0;
    const EffState f = unitary_to_effective(evolve(build_frustrated(phi)), {"s1", "s2"}, {"i1", "i2"});
    EXPECT_LT(std::abs(f.block({"s2", "i2"})(0) - (1.0 + unit_phase(-phi))), 1e-15);
    EXPECT_EQ(f.block({"s1", "i1"}), Vector4cd::Zero());
  }
}

TEST(Conversion, Errors) {
  const std::vector<std::string> paths = {"s", "i", "w"};
  const PerturbAmp one = PerturbAmp::one(), k{0.0, 1.0, 0.0};
  EXPECT_THROW(unitary_to_effective(KetState(paths, {{"000", one}, {"HH0", PerturbAmp{0.0, 0.0, 1.0}}}), {"s"}, {"i"}),
               std::invalid_argument);
  EXPECT_THROW(unitary_to_effective(KetState(paths, {{"000", one}, {"HH0", one}}), {"s"}, {"i"}),
               std::invalid_argument);
  EXPECT_THROW(unitary_to_effective(KetState(paths, {{"HH0", k}}), {"s"}, {"i"}), std::invalid_argument);
  EXPECT_THROW(unitary_to_effective(KetState(paths, {{"000", one}, {"H0H", k}}), {"s"}, {"i"}),
               std::invalid_argument);
  EXPECT_THROW(unitary_to_effective(KetState(paths, {{"000", one}, {"0HH", k}}), {"s"}, {"i", "w"}),
               std::invalid_argument);
}

TEST(Blocks, OverlappingPairsRejected) {
  EffState s = EffState::vacuum({"s"}, {"i1", "i2"});
  s.set_block({"s", "i1"}, Vector4cd(1, 0, 0, 0));
  EXPECT_THROW(s.set_block({"s", "i2"}, Vector4cd(1, 0, 0, 0)), std::invalid_argument);
  const std::vector<std::string> paths = {"s", "i1", "i2"};
  const KetState both(paths, {{"000", PerturbAmp::one()}, {"HH0", PerturbAmp{0.0, 1.0, 0.0}},
                              {"H0H", PerturbAmp{0.0, 1.0, 0.0}}});
  EXPECT_THROW(unitary_to_effective(both, {"s"}, {"i1", "i2"}), std::invalid_argument);
  EXPECT_THROW(eff_superpose(single(), EffState::vacuum({"s"}, {"j"}), 1.0, 1.0), std::invalid_argument);
}

TEST(Blocks, LocalityOfDisjointPairs) {
  Rng rng(31);
  const PathPair p{"s1", "i1"}, q{"s2", "i2"};
  for (int n = 0; n < 50; ++n) {
    EffState s = EffState::vacuum({"s1", "s2"}, {"i1", "i2"});
    s.set_block(p, random_block(rng));
    s.set_block(q, random_block(rng));
    const Matrix4cd u = support::haar_unitary(4, rng);
    const EffState a = eff_apply_unitary(eff_apply_nl(s, p.first, p.second), q.first, q.second, u);
    const EffState b = eff_apply_nl(eff_apply_unitary(s, q.first, q.second, u), p.first, p.second);
    EXPECT_EQ(a, b);
  }
}

// Unitary picture then conversion against the effective picture directly,
// compared with ==.
TEST(PictureEquivalence, RandomCircuits) {
  Rng rng(37);
  const std::vector<std::string> paths = {"s1", "i1", "s2", "i2"};
  const std::vector<PathPair> pairs = {{"s1", "i1"}, {"s2", "i2"}};
  std::uniform_int_distribution<int> len(1, 6), coin(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    KetState u = vacuum_state(paths);
    EffState e = EffState::vacuum({"s1", "s2"}, {"i1", "i2"});
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
      const PathPair& pp = pairs[static_cast<std::size_t>(coin(rng))];
      if (coin(rng)) {
        u = apply_nl(u, pp.first, pp.second);
        e = eff_apply_nl(e, pp.first, pp.second);
      } else {
        const Matrix4cd m = support::haar_unitary(4, rng);
        u = apply_two_path_pol_unitary(u, pp.first, pp.second, m);
        e = eff_apply_unitary(e, pp.first, pp.second, m);
      }
    }
    const EffState converted = unitary_to_effective(u, {"s1", "s2"}, {"i1", "i2"});
    ASSERT_EQ(converted.max_abs_difference(e), 0.0) << "trial " << trial;
    ASSERT_EQ(effective_to_unitary(e, paths), u) << "trial " << trial;
  }
}

}  // namespace
