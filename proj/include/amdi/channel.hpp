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
#include <numbers>

#include "amdi/combinatorics.hpp"
#include "amdi/error.hpp"

namespace amdi {

/// Channel, detector and feedforward parameters. Distances in km, time in s.
struct SystemParams {
  double length_km = 100.0;              ///< L, Alice to Bob
  double attenuation_length_km = 22.0;   ///< L_att
  double eta_det = 1.0;
  double tau_s = 67e-9;                  ///< feedforward time
  double c_fiber = 2e8;                  ///< m/s

  void validate() const {
    if (!(length_km >= 0.0) || !std::isfinite(length_km)) {
      throw Error(ErrorKind::InvalidParameter, "L must be >= 0");
    }
    if (!(attenuation_length_km > 0.0)) {
      throw Error(ErrorKind::InvalidParameter, "L_att must be > 0");
    }
    if (!(eta_det >= 0.0 && eta_det <= 1.0)) {
      throw Error(ErrorKind::InvalidParameter, "eta_det must lie in [0, 1]");
    }
    if (!(tau_s >= 0.0)) throw Error(ErrorKind::InvalidParameter, "tau must be >= 0");
    if (!(c_fiber > 0.0)) throw Error(ErrorKind::InvalidParameter, "c must be > 0");
  }

  friend bool operator==(const SystemParams &, const SystemParams &) = default;
};

/// L_att in km from a loss coefficient in dB/km. Never applied implicitly.
inline double attenuation_length_from_db(double alpha_db_per_km) {
  if (!(alpha_db_per_km > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "loss coefficient must be > 0");
  }
  return 10.0 / (alpha_db_per_km * std::numbers::ln10);
}

/// One-sided transmittance; Charlie sits halfway between Alice and Bob.
inline double channel_transmittance(const SystemParams &params) {
  return std::exp(-params.length_km / (2.0 * params.attenuation_length_km));
}

inline double feedforward_transmittance(const SystemParams &params) {
  const double path_m = params.tau_s * params.c_fiber;
  return std::exp(-path_m / (params.attenuation_length_km * 1e3));
}

/// Feedforward loss folded into the BSM detector efficiency.
inline double bsm_detector_efficiency(const SystemParams &params) {
  return params.eta_det * feedforward_transmittance(params);
}

/// Diagonal PNR POVM weight <n|Pi_k|n> = C(n,k) eta^k (1-eta)^(n-k).
template <typename Scalar = double>
Scalar pnr_weight(int k, int n, const Scalar &eta) {
  if (k < 0 || n < 0 || k > n) return Scalar(0);
  return binomial<Scalar>(n, k) * ipow(eta, k) * ipow(Scalar(1) - eta, n - k);
}

} // namespace amdi
