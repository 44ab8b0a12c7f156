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

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace amdi {

/// Largest n for which binomials are formed from exact 128-bit integers.
inline constexpr int kExactBinomialLimit = 60;

inline unsigned __int128 exact_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 value = 1;
  for (int j = 1; j <= k; ++j) {
    value = value * static_cast<unsigned>(n - k + j) / static_cast<unsigned>(j);
  }
  return value;
}

/// C(n, k), zero outside 0 <= k <= n.
template <typename Scalar = double> Scalar binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return Scalar(0);
  if (n <= kExactBinomialLimit) {
    const auto exact = exact_binomial(n, k);
    const auto hi = static_cast<std::uint64_t>(exact >> 64);
    const auto lo = static_cast<std::uint64_t>(exact);
    return Scalar(hi) * Scalar(18446744073709551616.0) + Scalar(lo);
  }
  using std::exp;
  using std::lgamma;
  return Scalar(exp(lgamma(double(n) + 1) - lgamma(double(k) + 1) -
                    lgamma(double(n - k) + 1)));
}

/// base^exp for exp >= 0 with 0^0 = 1.
template <typename Scalar> Scalar ipow(const Scalar &base, int exp) {
  Scalar result(1);
  Scalar b = base;
  while (exp > 0) {
    if (exp & 1) result *= b;
    b *= b;
    exp >>= 1;
  }
  return result;
}

inline int parity_sign(int exponent) { return (exponent % 2 == 0) ? 1 : -1; }

template <typename Scalar> class FactorialTable {
public:
  explicit FactorialTable(int max_n) : values_(static_cast<size_t>(max_n) + 1) {
    values_[0] = Scalar(1);
    for (int n = 1; n <= max_n; ++n) values_[n] = values_[n - 1] * Scalar(n);
  }

  const Scalar &operator()(int n) const { return values_.at(static_cast<size_t>(n)); }
  int max_n() const { return static_cast<int>(values_.size()) - 1; }

private:
  std::vector<Scalar> values_;
};

/// Neumaier-compensated running sum.
template <typename Scalar> class CompensatedSum {
public:
  void add(const Scalar &value) {
    using std::abs;
    const Scalar t = sum_ + value;
    if (abs(sum_) >= abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum &operator+=(const Scalar &value) {
    add(value);
    return *this;
  }

  Scalar value() const { return sum_ + compensation_; }

private:
  Scalar sum_{0};
  Scalar compensation_{0};
};

} // namespace amdi
