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
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "amdi/channel.hpp"
#include "amdi/closed_form.hpp"
#include "amdi/error.hpp"
#include "amdi/sources.hpp"

namespace amdi {

struct RateBreakdown {
  double p_qnd = 0, p_c_z = 0, p_nc_z = 0, p_c_x = 0, p_nc_x = 0;
  double p_s = 0;   ///< 8 p_QND
  double p_bsm = 0; ///< 2 (p_c^Z + p_nc^Z) / p_QND^2
  double e_z = 0, e_x = 0;
  double rate = 0; ///< secret bits per protocol use
  bool degenerate = false;
};

/// Sensitivity multipliers; the protocol analysis fixes both to 1.
struct RateOptions {
  double pz_squared = 1.0;
  double ec_efficiency = 1.0; ///< f
};

inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::DomainError, "binary entropy needs x in [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// Summation context for a physical parameter point.
inline SumContext<double> make_context(const SourceRoles &roles, const SystemParams &params) {
  params.validate();
  return {roles, channel_transmittance(params), params.eta_det, bsm_detector_efficiency(params),
          std::max(1, roles.n_max())};
}

inline RateBreakdown assemble_rate(const Probabilities<double> &p, const RateOptions &options = {}) {
  RateBreakdown r;
  r.p_qnd = p.p_qnd;
  r.p_c_z = p.p_c_z;
  r.p_nc_z = p.p_nc_z;
  r.p_c_x = p.p_c_x;
  r.p_nc_x = p.p_nc_x;
  r.p_s = 8.0 * p.p_qnd;
  const double z = p.p_c_z + p.p_nc_z;
  const double x = p.p_c_x + p.p_nc_x;
  if (!(p.p_qnd > 0.0) || !(z > 0.0) || !(x > 0.0)) {
    r.degenerate = true;
    return r;
  }
  r.p_bsm = 2.0 * z / (p.p_qnd * p.p_qnd);
  r.e_z = std::clamp(p.p_nc_z / z, 0.0, 1.0);
  r.e_x = std::clamp(p.p_nc_x / x, 0.0, 1.0);
  const double bracket = 1.0 - options.ec_efficiency * binary_entropy(r.e_z) - binary_entropy(r.e_x);
  r.rate = std::max(0.0, options.pz_squared * 16.0 * z / p.p_qnd * bracket);
  return r;
}

inline RateBreakdown secret_key_rate(const SumContext<double> &ctx, const RateOptions &options = {}) {
  return assemble_rate(probabilities(ctx), options);
}

inline RateBreakdown secret_key_rate(const SourceRoles &roles, const SystemParams &params,
                                     const RateOptions &options = {}) {
  return secret_key_rate(make_context(roles, params), options);
}

/// Repeaterless bound -log2(1 - eta^2).
inline double plob_bound(double eta_ch) {
  if (!(eta_ch >= 0.0 && eta_ch < 1.0)) {
    throw Error(ErrorKind::DomainError, "repeaterless bound needs eta_ch in [0, 1)");
  }
  return -std::log1p(-eta_ch * eta_ch) / std::numbers::ln2;
}

/// Largest q2 compatible with beating the bound at unit efficiency.
inline double necessary_q2_max(double p1, double q1) {
  return std::min(25.0 * p1 * q1 * q1 / 96.0, 1.0 - q1);
}

struct PdcCheck {
  double lhs = 0;
  double rhs = 36.0 / 25.0;
  bool satisfiable = false;
};

/// PDC sources with mean parameters lambda (Alice/Bob) and mu (QND).
inline PdcCheck pdc_condition_check(double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "lambda and mu must be positive");
  }
  PdcCheck c;
  c.lhs = lambda / (std::pow(1.0 + lambda, 3) * std::pow(1.0 + mu, 2));
  c.satisfiable = c.lhs >= c.rhs;
  return c;
}

inline std::vector<double> log_grid(double start, double stop, int points) {
  if (!(start > 0.0) || !(stop >= start) || points < 1) {
    throw Error(ErrorKind::InvalidParameter, "log grid needs 0 < start <= stop and points >= 1");
  }
  std::vector<double> grid(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    grid[static_cast<size_t>(i)] = start * std::pow(stop / start, t);
  }
  return grid;
}

inline std::vector<double> linear_grid(double start, double stop, int points) {
  if (!(stop >= start) || points < 1) {
    throw Error(ErrorKind::InvalidParameter, "linear grid needs start <= stop and points >= 1");
  }
  std::vector<double> grid(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    grid[static_cast<size_t>(i)] = start + (stop - start) * t;
  }
  return grid;
}

inline std::vector<double> default_length_grid() { return log_grid(1.0, 1000.0, 200); }

struct BeatsResult {
  bool beats = false;
  std::optional<double> witness_L;
  double margin = -std::numeric_limits<double>::infinity(); ///< max of rate - bound over the grid
};

/// Compares the key rate with the repeaterless bound on a distance grid.
/// params.length_km is ignored; each grid point sets it.
inline BeatsResult beats_bound(const SourceRoles &roles, const SystemParams &params,
                               const std::vector<double> &grid, const RateOptions &options = {}) {
  if (grid.empty()) throw Error(ErrorKind::InvalidParameter, "empty distance grid");
  BeatsResult result;
  for (double L : grid) {
    SystemParams at = params;
    at.length_km = L;
    const auto ctx = make_context(roles, at);
    const double margin = secret_key_rate(ctx, options).rate - plob_bound(ctx.eta_ch);
    result.margin = std::max(result.margin, margin);
    if (margin > 0.0 && !result.beats) {
      result.beats = true;
      result.witness_L = L;
    }
  }
  return result;
}

/// Early-exit variant: only answers whether the bound is beaten somewhere.
/// Scans from the longest distance, where the rate-to-bound ratio is largest.
inline bool beats_somewhere(const SourceRoles &roles, const SystemParams &params,
                            const std::vector<double> &grid, const RateOptions &options = {}) {
  for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
    SystemParams at = params;
    at.length_km = *it;
    const auto ctx = make_context(roles, at);
    if (secret_key_rate(ctx, options).rate > plob_bound(ctx.eta_ch)) return true;
  }
  return false;
}

/// Sources parametrized as in the quality study: p1 = (1-p0)/(1+P), p2 = P p1.
inline SourceRoles ratio_roles(double p0, double P, double q0, double Q) {
  return {ratio_statistics(p0, P), ratio_statistics(q0, Q)};
}

struct QmaxOptions {
  std::vector<double> grid = default_length_grid();
  double tol = 1e-10;
  double q_hi = 1.0;     ///< initial upper bracket, doubled while still beating
  int precheck_points = 8;
  int scan_points = 80;  ///< fine scan used when the pre-check finds non-monotone behaviour
};

struct QmaxResult {
  double q_max = 0.0;
  bool beatable = false;
  bool monotone = true; ///< pre-check outcome; false means the fine scan was used
};

inline QmaxResult q_max_search(double p0, double P, double q0, const SystemParams &params,
                               const QmaxOptions &options = {}) {
  ratio_roles(p0, P, q0, 0.0); // validates the fixed sources
  if (!(options.tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "tolerance must be positive");
  auto beats = [&](double Q) {
    return beats_somewhere(ratio_roles(p0, P, q0, Q), params, options.grid);
  };
  QmaxResult result;
  if (!beats(0.0)) return result;
  result.beatable = true;

  double hi = options.q_hi;
  while (beats(hi)) {
    hi *= 2.0;
    if (hi > 1e6) throw Error(ErrorKind::DomainError, "bound beaten for arbitrarily large Q");
  }

  // Beating must switch off once as Q grows; otherwise bisection is unsafe.
  double lo = 0.0, first_false = hi;
  for (int i = 1; i < options.precheck_points; ++i) {
    const double Q = hi * i / options.precheck_points;
    if (beats(Q)) {
      if (first_false < hi) result.monotone = false;
      else lo = Q;
    } else if (first_false == hi) {
      first_false = Q;
    }
  }
  if (result.monotone) {
    hi = first_false;
  } else {
    lo = 0.0;
    for (int i = 1; i <= options.scan_points; ++i) {
      const double Q = hi * i / options.scan_points;
      if (beats(Q)) lo = Q;
    }
    hi = std::min(hi, lo + hi / options.scan_points);
  }
  while (hi - lo > options.tol) {
    const double mid = 0.5 * (lo + hi);
    (beats(mid) ? lo : hi) = mid;
  }
  result.q_max = lo;
  return result;
}

} // namespace amdi
