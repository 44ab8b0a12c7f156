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

#include "amdi/sources.hpp"

using namespace amdi;

namespace {

ErrorKind kind_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no amdi::Error thrown";
  return ErrorKind::IoError;
}

} // namespace

TEST(MakeStatistics, PerfectPairSource) {
  const auto s = make_statistics({0.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(s[1], 1.0);
  EXPECT_FALSE(s.truncated());
  EXPECT_EQ(s.n_max(), 2);
}

TEST(MakeStatistics, VacuumSource) {
  const auto s = make_statistics({1.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(s[0], 1.0);
  EXPECT_DOUBLE_EQ(tail_mass(s), 0.0);
}

TEST(MakeStatistics, Errors) {
  EXPECT_EQ(kind_of([] { make_statistics({0.5, 0.6}); }), ErrorKind::NormalizationExceeded);
  EXPECT_EQ(kind_of([] { make_statistics({0.5, -0.1}); }), ErrorKind::NegativeProbability);
  EXPECT_EQ(kind_of([] { make_statistics(std::vector<double>{}); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { make_statistics({NAN, 1.0}); }), ErrorKind::InvalidParameter);
}

TEST(MakeStatistics, SlackAndTruncationFlag) {
  EXPECT_NO_THROW(make_statistics({0.5, 0.5 + 5e-13}));
  EXPECT_TRUE(make_statistics({0.2, 0.3}).truncated());
}

TEST(MakeStatistics, Idempotent) {
  const auto s = make_statistics({0.1, 0.8, 0.1});
  const auto p = s.probs();
  EXPECT_EQ(make_statistics(std::vector<double>(p.begin(), p.end())), s);
}

TEST(MakeStatistics, ReadsZeroBeyondTruncation) {
  const auto s = make_statistics({0.0, 1.0});
  EXPECT_EQ(s[5], 0.0);
  EXPECT_EQ(s[2], 0.0);
}

TEST(PdcStatistics, SpecValues) {
  const auto s = pdc_statistics(1.0, 2);
  EXPECT_DOUBLE_EQ(s[0], 0.25);
  EXPECT_DOUBLE_EQ(s[1], 0.25);
  EXPECT_DOUBLE_EQ(s[2], 0.1875);
  EXPECT_NEAR(tail_mass(s), 0.3125, 1e-15);
  EXPECT_TRUE(s.truncated());
  EXPECT_NEAR(pdc_statistics(0.5, 1)[1], 2 * 0.5 / std::pow(1.5, 3), 1e-15);
  EXPECT_NEAR(pdc_statistics(1e-12, 2)[0], 1.0, 1e-10);
}

TEST(PdcStatistics, Errors) {
  EXPECT_EQ(kind_of([] { pdc_statistics(0.0, 2); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { pdc_statistics(-1.0, 2); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { pdc_statistics(1.0, 0); }), ErrorKind::InvalidParameter);
}

TEST(PdcStatistics, Recurrence) {
  for (double lambda : {0.01, 0.3, 1.0, 4.0}) {
    const auto s = pdc_statistics(lambda, 10);
    for (int n = 0; n < 10; ++n) {
      EXPECT_NEAR(s[n + 1] / s[n], (n + 2.0) / (n + 1.0) * lambda / (1.0 + lambda), 1e-12);
    }
  }
}

TEST(PdcStatistics, TailMassShrinksWithOrder) {
  double previous = 1.0;
  for (int n_max : {2, 4, 8, 16}) {
    const double tail = tail_mass(pdc_statistics(1.0, n_max));
    EXPECT_LT(tail, previous);
    EXPECT_GE(tail, -kNormTolerance);
    previous = tail;
  }
}

TEST(RatioStatistics, Parametrization) {
  const auto s = ratio_statistics(0.2, 0.25);
  EXPECT_DOUBLE_EQ(s[0], 0.2);
  EXPECT_DOUBLE_EQ(s[1], 0.8 / 1.25);
  EXPECT_DOUBLE_EQ(s[2], 0.25 * s[1]);
  EXPECT_NEAR(s.total(), 1.0, 1e-15);
  EXPECT_EQ(kind_of([] { ratio_statistics(1.2, 0.1); }), ErrorKind::InvalidParameter);
  EXPECT_EQ(kind_of([] { ratio_statistics(0.1, -0.1); }), ErrorKind::InvalidParameter);
}

TEST(SourceRoles, OrderIsTheLargerTruncation) {
  const SourceRoles roles{make_statistics({0.0, 1.0}), make_statistics({0.1, 0.8, 0.1})};
  EXPECT_EQ(roles.n_max(), 2);
}
