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
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "amdi/combinatorics.hpp"
#include "amdi/error.hpp"
#include "amdi/probabilities.hpp"
#include "amdi/sources.hpp"

// Closed-form post-selected probabilities of the AMDI-QKD full-mode model:
// p_QND, p_c^Z, p_nc^Z, p_c^X, p_nc^X as finite nested sums over photon
// numbers. Every sum runs over admissible index tuples only, so a range whose
// upper limit is below its lower limit contributes nothing.
//
// The efficiency-independent combinatorial factors are tabulated once per
// truncation order; efficiencies enter as monomials eta^a (1-eta)^b at
// evaluation time.

namespace amdi {

template <typename Scalar = double> struct SumContext {
  SourceRoles roles;
  Scalar eta_ch = Scalar(1);
  Scalar eta_det = Scalar(1);
  Scalar eta_det_bsm = Scalar(1); ///< eta'_det = eta_det * eta_f
  int n_max = 2;

  void validate() const {
    auto in_unit = [](const Scalar &x) { return x >= Scalar(0) && x <= Scalar(1); };
    if (!(eta_ch > Scalar(0)) || !(eta_ch <= Scalar(1))) {
      throw Error(ErrorKind::InvalidParameter, "eta_ch must lie in (0, 1]");
    }
    if (!in_unit(eta_det) || !in_unit(eta_det_bsm)) {
      throw Error(ErrorKind::InvalidParameter, "detector efficiencies must lie in [0, 1]");
    }
    if (n_max < 1) throw Error(ErrorKind::InvalidParameter, "n_max must be >= 1");
  }
};

namespace detail {

template <typename Scalar> class Factorials {
public:
  explicit Factorials(int max_n) : table_(max_n) {}

  Scalar operator()(int n) const {
    if (n < 0) throw std::logic_error("factorial of a negative index");
    return table_(n);
  }
  /// 1/n!, zero for negative n.
  Scalar inv(int n) const { return n < 0 ? Scalar(0) : Scalar(1) / table_(n); }

private:
  FactorialTable<Scalar> table_;
};

template <typename Scalar> const Factorials<Scalar> &factorials() {
  static const Factorials<Scalar> table(64);
  return table;
}

template <typename Scalar> Scalar binom(int n, int k) {
  if (n < 0 || k < 0 || k > n) return Scalar(0);
  const auto &f = factorials<Scalar>();
  return f(n) * f.inv(k) * f.inv(n - k);
}

template <typename Scalar> Scalar pow2(int e) {
  return e >= 0 ? ipow(Scalar(2), e) : Scalar(1) / ipow(Scalar(2), -e);
}

// Dense array over D indices, each in [0, extent).
template <typename Scalar, size_t D> class Table {
public:
  Table() = default;
  explicit Table(int extent) : extent_(extent) {
    size_t size = 1;
    for (size_t d = 0; d < D; ++d) size *= static_cast<size_t>(extent);
    values_.assign(size, Scalar(0));
  }

  Scalar &at(const std::array<int, D> &idx) { return values_[offset(idx)]; }
  const Scalar &at(const std::array<int, D> &idx) const { return values_[offset(idx)]; }

  bool in_range(const std::array<int, D> &idx) const {
    return std::all_of(idx.begin(), idx.end(), [this](int i) { return i >= 0 && i < extent_; });
  }

  Scalar get(const std::array<int, D> &idx) const {
    return in_range(idx) ? values_[offset(idx)] : Scalar(0);
  }

private:
  size_t offset(const std::array<int, D> &idx) const {
    size_t off = 0;
    for (size_t d = 0; d < D; ++d) off = off * static_cast<size_t>(extent_) + static_cast<size_t>(idx[d]);
    return off;
  }

  int extent_ = 0;
  std::vector<Scalar> values_;
};

// Lambda of the QND + Z heralding without its efficiency monomials
// eta_det^3 (1-eta_det)^(2n+m-x-y-3) eta_ch^(n-x-y) (1-eta_ch)^(x+y).
template <typename Scalar>
Scalar lambda_combinatorial(int n, int m, int k, int x, int y, int o, int s, int t, int u, int v,
                            int up, int vp) {
  const auto &f = factorials<Scalar>();
  Scalar num = Scalar(s) * Scalar(t) * Scalar(k) * f(k) * f(n - k) * f(o) * f(m - o) * f(s) *
               f(t) * f(o + k - x - s) * f(n - k - y + m - o - t);
  Scalar den_inv = f.inv(x) * f.inv(y) * f.inv(k - x + u - s) * f.inv(k - x + up - s) *
                   f.inv(s - u) * f.inv(s - up) * f.inv(n - k - y + v - t) * f.inv(t - v) *
                   f.inv(n - k - y + vp - t) * f.inv(t - vp) * f.inv(o - u) * f.inv(u) *
                   f.inv(o - up) * f.inv(up) * f.inv(m - o - v) * f.inv(v) * f.inv(m - o - vp) *
                   f.inv(vp);
  const Scalar sign(parity_sign(u + v + up + vp));
  return sign * num * den_inv / (Scalar(n + 1) * Scalar(m + 1) * pow2<Scalar>(n + m - x - y));
}

// Visits every admissible (s, t, u, v, u', v') for fixed (n, m, k, x, y, o).
template <typename Fn> void for_each_lambda_inner(int n, int m, int k, int x, int y, int o, Fn &&fn) {
  for (int s = 1; s <= o + k - x; ++s) {
    for (int t = 1; t <= m - o + n - k - y; ++t) {
      const int u_lo = std::max(0, s - (k - x)), u_hi = std::min(o, s);
      const int v_lo = std::max(0, t - (n - k - y)), v_hi = std::min(m - o, t);
      for (int u = u_lo; u <= u_hi; ++u)
        for (int v = v_lo; v <= v_hi; ++v)
          for (int up = u_lo; up <= u_hi; ++up)
            for (int vp = v_lo; vp <= v_hi; ++vp) fn(s, t, u, v, up, vp);
    }
  }
}

// Index tuple (i, l, q, alpha, phi) of one side of the G product.
struct GHalf {
  int i, l, q, alpha, phi;
};

template <typename Fn>
void for_each_g_half(int m, int o, int M, int O, int I, int Omega, int omega, Fn &&fn) {
  const int total = m + M;
  for (int i = std::max(0, I + o + O - total); i <= std::min(I, o + O); ++i)
    for (int l = std::max(0, i - O); l <= std::min(i, o); ++l)
      for (int q = std::max(0, I + O - i - M); q <= std::min(I - i, m - o); ++q)
        for (int alpha = std::max(0, omega + i - I); alpha <= std::min(omega, i); ++alpha)
          for (int phi = std::max(0, Omega + O + I + o - omega - i - total);
               phi <= std::min(Omega - omega, o + O - i); ++phi)
            fn(GHalf{i, l, q, alpha, phi});
}

// omega range of the Z-basis BSM kernel for the given outcome.
inline std::pair<int, int> omega_range(Outcome outcome, int total, int I, int Omega) {
  if (outcome == Outcome::Correct) {
    return {std::max(1, Omega + I - total), std::min(Omega, I - 1)};
  }
  return {std::max(1, 1 + Omega + I - total), std::min(Omega, I)};
}

inline int outcome_weight(Outcome outcome, int total, int I, int Omega, int omega) {
  return outcome == Outcome::Correct ? omega * (I - omega) : omega * (total + omega - I - Omega);
}

} // namespace detail

/// Lambda(n,m,k,x,y,o,s,t,u,v,u',v'): weight of one admissible term of the
/// heralded output state of Alice's QND module (QND and Z both successful).
template <typename Scalar>
Scalar lambda_term(const std::array<int, 12> &idx, const SumContext<Scalar> &ctx) {
  const auto [n, m, k, x, y, o, s, t, u, v, up, vp] = idx;
  return detail::lambda_combinatorial<Scalar>(n, m, k, x, y, o, s, t, u, v, up, vp) *
         ipow(ctx.eta_det, 3) * ipow(Scalar(1) - ctx.eta_det, 2 * n + m - x - y - 3) *
         ipow(ctx.eta_ch, n - x - y) * ipow(Scalar(1) - ctx.eta_ch, x + y);
}

/// G(m,o,M,O,I,Omega,i,omega,l,q,alpha,phi,i',l',q',alpha',phi') of the Z-basis BSM.
template <typename Scalar = double> Scalar g_term(const std::array<int, 17> &idx) {
  const auto [m, o, M, O, I, Omega, i, omega, l, q, alpha, phi, ip, lp, qp, alphap, phip] = idx;
  const auto &f = detail::factorials<Scalar>();
  using detail::binom;
  const int total = m + M;
  auto half = [&](int ii, int ll, int qq, int aa, int pp) {
    return binom<Scalar>(o, ll) * binom<Scalar>(O, ii - ll) * binom<Scalar>(m - o, qq) *
           binom<Scalar>(M - O, I - ii - qq) * binom<Scalar>(ii, aa) *
           binom<Scalar>(I - ii, omega - aa) * binom<Scalar>(o + O - ii, pp) *
           binom<Scalar>(total + ii - o - O - I, Omega - omega - pp);
  };
  const Scalar prefactor = f(omega) * f(I - omega) * f(Omega - omega) *
                           f(total + omega - I - Omega) * f.inv(o) * f.inv(m - o) * f.inv(O) *
                           f.inv(M - O) / ipow(Scalar(4), total);
  const Scalar sign(parity_sign(phi + alpha + phip + alphap - l - q - lp - qp));
  return sign * prefactor * half(i, l, q, alpha, phi) * half(ip, lp, qp, alphap, phip);
}

/// Lambda_QND(n,m,k,x,y,o,k'): coefficient of |k,n-k,o,m-o><k',n-k',o+k-k',m-o-k+k'|
/// in the state Alice keeps after a successful QND (no local measurement yet).
template <typename Scalar>
Scalar lambda_qnd_combinatorial(int n, int m, int k, int x, int y, int o, int kp) {
  using std::sqrt;
  const auto &f = detail::factorials<Scalar>();
  const int o2 = o + k - kp; // bra H photons in the outgoing mode
  if (o2 < 0 || m - o2 < 0 || kp < 0 || n - kp < 0) return Scalar(0);
  CompensatedSum<Scalar> inner;
  for (int u = 0; u <= o; ++u)
    for (int v = 0; v <= m - o; ++v)
      for (int w = std::max(0, 1 - u); w <= k - x; ++w)
        for (int z = std::max(0, 1 - v); z <= n - k - y; ++z)
          for (int up = std::max(0, u + w + x - kp); up <= std::min(u + w, o2); ++up)
            for (int vp = std::max(0, v + z + y + kp - n); vp <= std::min(v + z, m - o2); ++vp) {
              const Scalar num = Scalar((u + w) * (v + z)) * f(u + w) * f(v + z) *
                                 f(o - u + k - x - w) * f(n - k - y - z + m - o - v);
              const Scalar den_inv =
                  f.inv(u) * f.inv(v) * f.inv(w) * f.inv(z) * f.inv(up) * f.inv(vp) *
                  f.inv(k - x - w) * f.inv(n - k - y - z) * f.inv(o - u) * f.inv(m - o - v) *
                  f.inv(u + w - up) * f.inv(kp - x - u - w + up) * f.inv(v + z - vp) *
                  f.inv(n - kp - y - v - z + vp) * f.inv(o2 - up) * f.inv(m - o2 - vp);
              inner += Scalar(parity_sign(up + vp - u - v)) * num * den_inv;
            }
  const Scalar root = sqrt(f(k) * f(n - k) * f(kp) * f(n - kp) * f(o) * f(m - o)) *
                      sqrt(f(o2) * f(m - o2));
  return root * inner.value() * f.inv(x) * f.inv(y) /
         (Scalar(n + 1) * Scalar(m + 1) * detail::pow2<Scalar>(n + m - x - y));
}

template <typename Scalar>
Scalar lambda_qnd_x(const std::array<int, 7> &idx, const SumContext<Scalar> &ctx) {
  const auto [n, m, k, x, y, o, kp] = idx;
  if (n + m - x - y < 2) return Scalar(0);
  return lambda_qnd_combinatorial<Scalar>(n, m, k, x, y, o, kp) * ipow(ctx.eta_det, 2) *
         ipow(Scalar(1) - ctx.eta_det, n + m - x - y - 2) * ipow(ctx.eta_ch, n - x - y) *
         ipow(Scalar(1) - ctx.eta_ch, x + y);
}

/// g(n,N,k,K,k',K'): Fock normalization of a ket/bra pair of two-mode states.
template <typename Scalar> Scalar g_norm(int n, int N, int k, int K, int kp, int Kp) {
  using std::sqrt;
  const auto &f = detail::factorials<Scalar>();
  return Scalar(1) / sqrt(f(k) * f(n - k) * f(K) * f(N - K)) /
         sqrt(f(kp) * f(n - kp) * f(Kp) * f(N - Kp));
}

/// sqrt(2)^e.
template <typename Scalar> Scalar sqrt_pow2(int e) {
  using std::sqrt;
  Scalar value = detail::pow2<Scalar>(e / 2);
  if (e % 2 != 0) value *= sqrt(Scalar(2));
  return value;
}

/// f_H(n,N,k,K,tau,nu,chi,omega): amplitude picked up by Hadamard gates (or a
/// 50:50 splitter) acting on H/V occupations (k, n-k) and (K, N-K).
template <typename Scalar> Scalar f_h(int n, int N, int k, int K, int tau, int nu, int chi, int omega) {
  using detail::binom;
  return Scalar(parity_sign(k + K + nu + omega)) / sqrt_pow2<Scalar>(n + N) *
         binom<Scalar>(k, tau) * binom<Scalar>(n - k, nu) * binom<Scalar>(K, chi) *
         binom<Scalar>(N - K, omega);
}

/// d(m,M,x,y,eta) = x y eta^2 (1-eta)^(m+M-2): PNR weight of a one-H-one-V pattern.
template <typename Scalar> Scalar d_weight(int m, int M, int x, int y, const Scalar &eta) {
  if (x <= 0 || y <= 0) return Scalar(0);
  return Scalar(x) * Scalar(y) * eta * eta * ipow(Scalar(1) - eta, m + M - 2);
}

} // namespace amdi
