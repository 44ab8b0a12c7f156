// Copyright 2026 The amdi-rate Authors
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

#include <cmath>
#include <random>

#include "amdi/fock.hpp"

using namespace amdi;
using namespace amdi::fock;

namespace {

const double kHalf = 0.5;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<ModeIndex> two_modes(const std::string &a, const std::string &b) {
  return {h(a), v(a), h(b), v(b)};
}

double population(const FockOperator &rho, const std::vector<int> &counts) {
  const Occupation occ = rho.occupation(counts);
  return rho.entry(occ, occ).real();
}

// Random pure state on two polarized modes with up to `cap` photons.
FockOperator random_state(std::mt19937 &rng, int cap) {
  std::normal_distribution<double> g;
  std::vector<std::pair<std::vector<int>, Complex>> terms;
  double norm = 0.0;
  for (int a = 0; a <= cap; ++a)
    for (int b = 0; a + b <= cap; ++b)
      for (int c = 0; a + b + c <= cap; ++c) {
        const Complex amp(g(rng), g(rng));
        norm += std::norm(amp);
        terms.push_back({{a, b, c, 0}, amp});
      }
  for (auto &t : terms) t.second /= std::sqrt(norm);
  return pure_state(two_modes("a", "b"), cap, terms);
}

} // namespace

TEST(Occupation, PacksFourBitsPerMode) {
  Occupation o;
  o.set(0, 3);
  o.set(5, 15);
  EXPECT_EQ(o.get(0), 3);
  EXPECT_EQ(o.get(5), 15);
  EXPECT_EQ(o.total(), 18);
  EXPECT_THROW(o.set(1, 16), Error);
}

TEST(FockOperator, RegisterChecks) {
  EXPECT_THROW(FockOperator({h("a"), h("a")}, 2), Error);
  const FockOperator vac = FockOperator::vacuum(two_modes("a", "b"), 2);
  try {
    vac.position(h("z"));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownMode);
  }
  EXPECT_THROW(apply_beam_splitter(vac, "a", "z"), Error);
  EXPECT_THROW(apply_hadamard(vac, "z"), Error);
  EXPECT_THROW(apply_loss(vac, "z", 0.5), Error);
}

TEST(BeamSplitter, SinglePhotonSplitsEvenly) {
  const auto in = pure_state(two_modes("a", "b"), 2, {{{1, 0, 0, 0}, 1.0}});
  const auto out = apply_beam_splitter(in, "a", "b");
  EXPECT_NEAR(population(out, {1, 0, 0, 0}), kHalf, 1e-15);
  EXPECT_NEAR(population(out, {0, 0, 1, 0}), kHalf, 1e-15);
  EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
}

TEST(BeamSplitter, HongOuMandel) {
  const auto in = pure_state(two_modes("a", "b"), 2, {{{1, 0, 1, 0}, 1.0}});
  const auto out = apply_beam_splitter(in, "a", "b");
  EXPECT_NEAR(population(out, {1, 0, 1, 0}), 0.0, 1e-15);
  EXPECT_NEAR(population(out, {2, 0, 0, 0}), kHalf, 1e-15);
  EXPECT_NEAR(population(out, {0, 0, 2, 0}), kHalf, 1e-15);
}

TEST(BeamSplitter, SignConvention) {
  // a^dag -> (a^dag + b^dag)/sqrt2, b^dag -> (a^dag - b^dag)/sqrt2
  const auto in = pure_state(two_modes("a", "b"), 2, {{{0, 0, 1, 0}, 1.0}});
  const auto out = apply_beam_splitter(in, "a", "b");
  const auto a = out.occupation({1, 0, 0, 0}), b = out.occupation({0, 0, 1, 0});
  EXPECT_NEAR(out.entry(a, b).real(), -kHalf, 1e-15);
}

TEST(BeamSplitter, TwiceIsIdentity) {
  std::mt19937 rng(7);
  const auto in = random_state(rng, 3);
  const auto out = apply_beam_splitter(apply_beam_splitter(in, "a", "b"), "a", "b");
  for (const auto &[key, value] : in.entries()) {
    EXPECT_NEAR(std::abs(out.entry(key.first, key.second) - value), 0.0, 1e-12);
  }
  EXPECT_NEAR(out.trace().real(), in.trace().real(), 1e-12);
}

TEST(BeamSplitter, PreservesPhotonNumberBlocks) {
  std::mt19937 rng(11);
  const auto in = random_state(rng, 3);
  const auto out = apply_beam_splitter(in, "a", "b");
  EXPECT_LT(out.cross_block_weight(), 1e-12 + in.cross_block_weight());
  const auto before = in.block_traces(), after = out.block_traces();
  for (const auto &[n, t] : before) EXPECT_NEAR(after.at(n), t, 1e-12);
  EXPECT_LT(out.hermiticity_defect(), 1e-12);
}

TEST(Hadamard, SinglePhoton) {
  const auto in = pure_state(two_modes("x", "y"), 2, {{{1, 0, 0, 0}, 1.0}});
  const auto out = apply_hadamard(in, "x");
  EXPECT_NEAR(population(out, {1, 0, 0, 0}), kHalf, 1e-15);
  EXPECT_NEAR(population(out, {0, 1, 0, 0}), kHalf, 1e-15);
}

TEST(Hadamard, FiltersHVPair) {
  // x_H^dag x_V^dag |0> -> ((x_H^dag)^2 - (x_V^dag)^2)/2 |0>
  const auto in = pure_state(two_modes("x", "y"), 2, {{{1, 1, 0, 0}, 1.0}});
  const auto out = apply_hadamard(in, "x");
  const auto hh = out.occupation({2, 0, 0, 0}), vv = out.occupation({0, 2, 0, 0});
  EXPECT_NEAR(population(out, {1, 1, 0, 0}), 0.0, 1e-15);
  EXPECT_NEAR(out.entry(hh, hh).real(), kHalf, 1e-15);
  EXPECT_NEAR(out.entry(hh, vv).real(), -kHalf, 1e-15);
}

TEST(Hadamard, Involution) {
  std::mt19937 rng(3);
  const auto in = random_state(rng, 3);
  const auto out = apply_hadamard(apply_hadamard(in, "a"), "a");
  for (const auto &[key, value] : in.entries()) {
    EXPECT_NEAR(std::abs(out.entry(key.first, key.second) - value), 0.0, 1e-12);
  }
  EXPECT_EQ(out.entries().size(), in.entries().size());
}

TEST(Loss, UnitTransmittanceIsIdentity) {
  std::mt19937 rng(5);
  const auto in = random_state(rng, 2);
  const auto out = apply_loss(in, "a", 1.0);
  EXPECT_EQ(out.modes(), in.modes());
  for (const auto &[key, value] : in.entries()) {
    EXPECT_NEAR(std::abs(out.entry(key.first, key.second) - value), 0.0, 1e-12);
  }
}

TEST(Loss, BinomialPopulations) {
  const auto one = apply_loss(pure_state(two_modes("x", "y"), 2, {{{1, 0, 0, 0}, 1.0}}), "x", 0.3);
  EXPECT_NEAR(population(one, {1, 0, 0, 0}), 0.3, 1e-15);
  EXPECT_NEAR(population(one, {0, 0, 0, 0}), 0.7, 1e-15);

  const auto two = apply_loss(pure_state(two_modes("x", "y"), 2, {{{2, 0, 0, 0}, 1.0}}), "x", 0.5);
  EXPECT_NEAR(population(two, {2, 0, 0, 0}), 0.25, 1e-15);
  EXPECT_NEAR(population(two, {1, 0, 0, 0}), 0.5, 1e-15);
  EXPECT_NEAR(population(two, {0, 0, 0, 0}), 0.25, 1e-15);
}

TEST(Loss, PreservesTraceAndDropsEnvironment) {
  std::mt19937 rng(9);
  const auto in = random_state(rng, 3);
  const auto out = apply_loss(in, "b", 0.37);
  EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
  EXPECT_EQ(out.num_modes(), in.num_modes());
  EXPECT_LT(out.hermiticity_defect(), 1e-12);
}

TEST(Postselect, Examples) {
  const auto vac = FockOperator::vacuum(two_modes("x", "y"), 2);
  const DetectionPattern none{{{h("x"), 0}, {v("x"), 0}, {h("y"), 0}, {v("y"), 0}}, 0.4};
  EXPECT_NEAR(postselect_probability(vac, none), 1.0, 1e-15);

  const auto photon = pure_state(two_modes("x", "y"), 2, {{{1, 0, 0, 0}, 1.0}});
  EXPECT_NEAR(postselect_probability(photon, {{{h("x"), 1}}, 0.7}), 0.7, 1e-15);

  const DetectionPattern too_many{{{h("x"), 3}}, 1.0};
  const auto cond = postselect_state(photon, too_many);
  EXPECT_TRUE(cond.entries().empty());
  EXPECT_EQ(cond.trace(), Complex(0.0));
}

TEST(Postselect, TraceConsistency) {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const auto rho = apply_loss(random_state(rng, 3), "a", 0.6);
    const DetectionPattern pattern{{{h("a"), trial % 3}, {v("b"), 0}}, 0.8};
    EXPECT_NEAR(postselect_state(rho, pattern).trace().real(), postselect_probability(rho, pattern),
                1e-12);
  }
}

TEST(Postselect, CircuitPovmCompleteness) {
  // Outcomes on a_H, a_V after loss and a splitter sum to the trace.
  std::mt19937 rng(17);
  const auto rho = apply_beam_splitter(apply_loss(random_state(rng, 3), "a", 0.45), "a", "b");
  for (double eta : {0.3, 1.0}) {
    double sum = 0.0;
    for (int kh = 0; kh <= rho.photon_cap(); ++kh)
      for (int kv = 0; kh + kv <= rho.photon_cap(); ++kv)
        sum += postselect_probability(rho, {{{h("a"), kh}, {v("a"), kv}}, eta});
    EXPECT_NEAR(sum, rho.trace().real(), 1e-9);
  }
}

TEST(PairSource, PerfectEntangledPair) {
  const auto rho = build_pair_source(make_statistics({0.0, 1.0}), "x", "y", 2);
  const auto hh = rho.occupation({1, 0, 1, 0}), vv = rho.occupation({0, 1, 0, 1});
  EXPECT_NEAR(rho.entry(hh, hh).real(), kHalf, 1e-15);
  EXPECT_NEAR(rho.entry(vv, vv).real(), kHalf, 1e-15);
  EXPECT_NEAR(rho.entry(hh, vv).real(), kHalf, 1e-15);
  EXPECT_EQ(rho.entries().size(), 4u);
}

TEST(PairSource, VacuumAndTwoPairs) {
  const auto vac = build_pair_source(make_statistics({1.0}), "x", "y", 2);
  EXPECT_NEAR(vac.trace().real(), 1.0, 1e-15);
  EXPECT_EQ(vac.entries().size(), 1u);

  const auto two = build_pair_source(make_statistics({0.0, 0.0, 1.0}), "x", "y", 4);
  EXPECT_NEAR(two.trace().real(), 1.0, 1e-14);
  // |phi_2> = (|2020> + |1111> + |0202>) / sqrt3 over (xH, xV, yH, yV)
  EXPECT_NEAR(population(two, {2, 0, 2, 0}), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(population(two, {1, 1, 1, 1}), 1.0 / 3.0, 1e-14);
}

TEST(PairSource, CapExceeded) {
  try {
    build_pair_source(make_statistics({0.0, 0.0, 1.0}), "x", "y", 3);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
  }
}

TEST(PairSource, PureAndMixedShareDiagonalBlocks) {
  const auto stats = make_statistics({0.2, 0.5, 0.3});
  const auto mixed = build_pair_source(stats, "x", "y", 4, SourceMixing::Mixed);
  const auto pure = build_pair_source(stats, "x", "y", 4, SourceMixing::Pure);
  EXPECT_GT(pure.cross_block_weight(), 0.0);
  EXPECT_EQ(mixed.cross_block_weight(), 0.0);
  const auto a = mixed.block_traces(), b = pure.block_traces();
  for (const auto &[n, t] : a) EXPECT_NEAR(b.at(n), t, 1e-15);
}

TEST(Tensor, TraceMultiplies) {
  const auto a = build_pair_source(make_statistics({0.25, 0.75}), "a", "c", 2);
  const auto b = apply_loss(build_pair_source(make_statistics({0.0, 1.0}), "f", "b", 2), "b", 0.5);
  const auto ab = tensor(a, b);
  EXPECT_EQ(ab.num_modes(), 8);
  EXPECT_NEAR(ab.trace().real(), a.trace().real() * b.trace().real(), 1e-15);
}

TEST(Relabel, RenamesBothPolarizations) {
  const auto rho = build_pair_source(make_statistics({0.0, 1.0}), "x", "y", 2).relabeled("x", "z");
  EXPECT_TRUE(rho.contains(h("z")));
  EXPECT_TRUE(rho.contains(v("z")));
  EXPECT_FALSE(rho.contains(h("x")));
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-15);
}
