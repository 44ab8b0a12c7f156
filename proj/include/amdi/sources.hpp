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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "amdi/error.hpp"

namespace amdi {

/// Normalization slack for photon-number distributions.
inline constexpr double kNormTolerance = 1e-12;

/// Truncated photon-number-pair distribution p_0..p_nmax of one source.
///
/// A distribution whose mass falls short of one is kept as is (the missing
/// mass never produces a detection event); `truncated()` reports that case.
class PhotonStatistics {
public:
  PhotonStatistics() : probs_{0.0, 1.0} {}

  std::span<const double> probs() const { return probs_; }
  int n_max() const { return static_cast<int>(probs_.size()) - 1; }
  bool truncated() const { return truncated_; }

  /// p_n, zero beyond the truncation order.
  double operator[](int n) const {
    return (n >= 0 && n <= n_max()) ? probs_[static_cast<size_t>(n)] : 0.0;
  }

  double total() const {
    double sum = 0.0;
    for (double p : probs_) sum += p;
    return sum;
  }

  friend bool operator==(const PhotonStatistics &, const PhotonStatistics &) = default;

private:
  friend PhotonStatistics make_statistics(std::span<const double> probs);

  std::vector<double> probs_;
  bool truncated_ = false;
};

inline PhotonStatistics make_statistics(std::span<const double> probs) {
  if (probs.empty()) {
    throw Error(ErrorKind::InvalidParameter, "empty photon-number distribution");
  }
  double sum = 0.0;
  for (size_t n = 0; n < probs.size(); ++n) {
    const double p = probs[n];
    if (!std::isfinite(p)) {
      throw Error(ErrorKind::InvalidParameter,
                  "non-finite probability at n=" + std::to_string(n));
    }
    if (p < 0.0) {
      throw Error(ErrorKind::NegativeProbability,
                  "p_" + std::to_string(n) + " = " + std::to_string(p));
    }
    sum += p;
  }
  if (sum > 1.0 + kNormTolerance) {
    throw Error(ErrorKind::NormalizationExceeded,
                "sum of probabilities is " + std::to_string(sum));
  }
  PhotonStatistics stats;
  stats.probs_.assign(probs.begin(), probs.end());
  if (stats.probs_.size() < 2) stats.probs_.resize(2, 0.0);
  stats.truncated_ = sum < 1.0 - kNormTolerance;
  return stats;
}

inline PhotonStatistics make_statistics(std::initializer_list<double> probs) {
  return make_statistics(std::span<const double>(probs.begin(), probs.size()));
}

inline PhotonStatistics make_statistics(const std::vector<double> &probs) {
  return make_statistics(std::span<const double>(probs));
}

/// Type-II parametric down-conversion: p_n = (n+1) lambda^n / (1+lambda)^(n+2).
inline PhotonStatistics pdc_statistics(double lambda, int n_max) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::InvalidParameter, "PDC lambda must be positive");
  }
  if (n_max < 1) {
    throw Error(ErrorKind::InvalidParameter, "n_max must be at least 1");
  }
  std::vector<double> probs(static_cast<size_t>(n_max) + 1);
  const double ratio = lambda / (1.0 + lambda);
  double geometric = 1.0 / ((1.0 + lambda) * (1.0 + lambda));
  for (int n = 0; n <= n_max; ++n) {
    probs[static_cast<size_t>(n)] = (n + 1) * geometric;
    geometric *= ratio;
  }
  return make_statistics(probs);
}

/// Probability mass discarded by truncation.
inline double tail_mass(const PhotonStatistics &stats) { return 1.0 - stats.total(); }

/// Statistics {p0, p1, p2} from the vacuum weight and the ratio P = p2/p1.
inline PhotonStatistics ratio_statistics(double p0, double ratio) {
  if (!(p0 >= 0.0 && p0 < 1.0) || !(ratio >= 0.0) || !std::isfinite(ratio)) {
    throw Error(ErrorKind::InvalidParameter,
                "ratio parametrization needs 0 <= p0 < 1 and P >= 0");
  }
  const double p1 = (1.0 - p0) / (1.0 + ratio);
  return make_statistics({p0, p1, ratio * p1});
}

struct SourceRoles {
  PhotonStatistics alice_bob; ///< shared by S_AC and S_BC
  PhotonStatistics qnd;       ///< shared by both QND sources

  int n_max() const { return std::max(alice_bob.n_max(), qnd.n_max()); }

  friend bool operator==(const SourceRoles &, const SourceRoles &) = default;
};

} // namespace amdi
