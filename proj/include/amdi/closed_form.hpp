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

#include <array>
#include <map>
#include <memory>
#include <mutex>

#include "amdi/closed_form_terms.hpp"
#include "amdi/probabilities.hpp"

namespace amdi {

namespace detail {

// Z-basis BSM kernel for inputs |o,m-o>_c |O,M-O>_d, without the
// eta'^2 (1-eta')^(m+M-2) monomial. G is a prefactor times a product of two
// mirror halves, so the primed sum is the square of the unprimed one.
template <typename Scalar> Scalar bsm_z_kernel(Outcome outcome, int m, int o, int M, int O) {
  const auto &f = factorials<Scalar>();
  const int total = m + M;
  CompensatedSum<Scalar> acc;
  for (int I = 1; I <= total; ++I) {
    for (int Omega = 1; Omega <= total; ++Omega) {
      const auto [lo, hi] = omega_range(outcome, total, I, Omega);
      for (int omega = lo; omega <= hi; ++omega) {
        CompensatedSum<Scalar> half;
        for_each_g_half(m, o, M, O, I, Omega, omega, [&](const GHalf &h) {
          half += Scalar(parity_sign(h.phi + h.alpha - h.l - h.q)) * binom<Scalar>(o, h.l) *
                  binom<Scalar>(O, h.i - h.l) * binom<Scalar>(m - o, h.q) *
                  binom<Scalar>(M - O, I - h.i - h.q) * binom<Scalar>(h.i, h.alpha) *
                  binom<Scalar>(I - h.i, omega - h.alpha) * binom<Scalar>(o + O - h.i, h.phi) *
                  binom<Scalar>(total + h.i - o - O - I, Omega - omega - h.phi);
        });
        const Scalar h = half.value();
        const Scalar prefactor = f(omega) * f(I - omega) * f(Omega - omega) *
                                 f(total + omega - I - Omega) * f.inv(o) * f.inv(m - o) *
                                 f.inv(O) * f.inv(M - O) / ipow(Scalar(4), total);
        acc += Scalar(outcome_weight(outcome, total, I, Omega, omega)) * prefactor * h * h;
      }
    }
  }
  return acc.value();
}

// X-basis BSM kernel: Charlie's BSM (correct pattern) on the off-diagonal
// inputs |o,m-o><o2,m-o2|_c (x) |O,M-O><O2,M-O2|_d, without the eta' monomial.
// Includes g(m,M,o,O,o2,O2).
template <typename Scalar> Scalar bsm_x_kernel(int m, int M, int o, int O, int o2, int O2) {
  const auto &f = factorials<Scalar>();
  const int total = m + M;
  CompensatedSum<Scalar> acc;
  for (int l = 0; l <= o; ++l)
    for (int q = 0; q <= m - o; ++q)
      for (int L = 0; L <= O; ++L)
        for (int Q = 0; Q <= M - O; ++Q) {
          const int I = l + L + q + Q; // photons reaching output g
          if (I < 2) continue;
          const Scalar ket = f_h<Scalar>(m, M, o, O, l, q, L, Q);
          for (int lp = 0; lp <= o2; ++lp)
            for (int qp = 0; qp <= m - o2; ++qp)
              for (int Lp = std::max(0, I - qp - lp - M + O2); Lp <= std::min(O2, I - qp - lp);
                   ++Lp) {
                const Scalar bra = f_h<Scalar>(m, M, o2, O2, lp, qp, Lp, I - qp - lp - Lp);
                const int fb = lp + Lp; // bra H photons reaching g
                for (int ap = 0; ap <= fb; ++ap)
                  for (int bp = std::max(0, 1 - ap); bp <= I - fb - std::max(0, 1 + ap - fb);
                       ++bp) {
                    const int gh = ap + bp;
                    const Scalar bra_g = binom<Scalar>(fb, ap) * binom<Scalar>(I - fb, bp);
                    for (int a = std::max(0, gh - q - Q); a <= std::min(l + L, gh); ++a) {
                      const Scalar ket_g = binom<Scalar>(l + L, a) * binom<Scalar>(q + Q, gh - a);
                      for (int phi = 0; phi <= o - l + O - L; ++phi)
                        for (int eps = 0; eps <= m - o - q + M - O - Q; ++eps) {
                          const int hh = phi + eps;
                          const Scalar ket_h = binom<Scalar>(o - l + O - L, phi) *
                                               binom<Scalar>(m - o - q + M - O - Q, eps);
                          const Scalar out = f(gh) * f(hh) * f(I - gh) * f(total - I - hh);
                          const int bra_v = m - o2 + M - O2 - I + fb;
                          const int bra_h = o2 - lp + O2 - Lp;
                          for (int php = std::max(0, hh - bra_v); php <= std::min(hh, bra_h);
                               ++php) {
                            const int sign = parity_sign(L - Lp - qp - q + a - ap - php - phi);
                            acc += Scalar(sign) * Scalar(gh * (I - gh)) * out * ket * bra *
                                   ket_g * bra_g * ket_h * binom<Scalar>(bra_v, hh - php) *
                                   binom<Scalar>(bra_h, php);
                          }
                        }
                    }
                  }
              }
        }
  return acc.value() * g_norm<Scalar>(m, M, o, O, o2, O2) / pow2<Scalar>(total);
}

// Final Hadamards and local detections of the X basis on the off-diagonal
// inputs |k,n-k><k',n-k'|_a' (x) |K,N-K><K',N-K'|_b', without the
// eta_det^2 (1-eta_det)^(n+N-2) monomial. Includes g(n,N,k,K,k',K').
template <typename Scalar>
Scalar local_x_kernel(Outcome outcome, int n, int N, int k, int K, int kp, int Kp) {
  const auto &f = factorials<Scalar>();
  CompensatedSum<Scalar> acc;
  for (int tau = 0; tau <= k; ++tau)
    for (int nu = std::max(0, 1 - tau); nu <= n - k; ++nu)
      for (int chi = 0; chi <= K; ++chi) {
        const int w_lo = outcome == Outcome::Correct ? 0 : std::max(0, 1 - chi);
        const int w_hi = outcome == Outcome::Correct ? N - std::max(K, 1 + chi) : N - K;
        for (int omega = w_lo; omega <= w_hi; ++omega) {
          const int a = tau + nu, b = omega + chi;
          const Scalar ket = f_h<Scalar>(n, N, k, K, tau, nu, chi, omega) * f(a) * f(n - a) *
                             f(b) * f(N - b);
          const int weight = outcome == Outcome::Correct ? a * (N - b) : a * b;
          for (int taup = std::max(0, a - n + kp); taup <= std::min(kp, a); ++taup)
            for (int chip = std::max(0, b - N + Kp); chip <= std::min(Kp, b); ++chip) {
              acc += Scalar(weight) * ket * f_h<Scalar>(n, N, kp, Kp, taup, a - taup, chip, b - chip);
            }
        }
      }
  return acc.value() * g_norm<Scalar>(n, N, k, K, kp, Kp);
}

// Efficiency-independent coefficients for one truncation order.
template <typename Scalar> struct KernelTables {
  int n_max = 0;
  Table<Scalar, 6> qnd_z;   // [n][m][k][x][y][o]
  Table<Scalar, 4> bsm_z_c; // [m][o][M][O]
  Table<Scalar, 4> bsm_z_nc;
  Table<Scalar, 7> qnd_x;   // [n][m][k][x][y][o][k']
  Table<Scalar, 6> bsm_x;   // [m][M][o][O][o2][O2]
  Table<Scalar, 6> local_c; // [n][N][k][K][k'][K']
  Table<Scalar, 6> local_nc;

  explicit KernelTables(int order)
      : n_max(order), qnd_z(order + 1), bsm_z_c(order + 1), bsm_z_nc(order + 1),
        qnd_x(order + 1), bsm_x(order + 1), local_c(order + 1), local_nc(order + 1) {
    const int e = order;
    for (int n = 1; n <= e; ++n)
      for (int m = 0; m <= e; ++m)
        for (int k = 1; k <= n; ++k)
          for (int x = 0; x <= k; ++x)
            for (int y = 0; y <= n - k; ++y)
              for (int o = 0; o <= m; ++o) {
                CompensatedSum<Scalar> acc;
                for_each_lambda_inner(n, m, k, x, y, o, [&](int s, int t, int u, int v, int up, int vp) {
                  acc += lambda_combinatorial<Scalar>(n, m, k, x, y, o, s, t, u, v, up, vp);
                });
                qnd_z.at({n, m, k, x, y, o}) = acc.value();
              }
    for (int m = 0; m <= e; ++m)
      for (int o = 0; o <= m; ++o)
        for (int M = 0; M <= e; ++M)
          for (int O = 0; O <= M; ++O) {
            bsm_z_c.at({m, o, M, O}) = bsm_z_kernel<Scalar>(Outcome::Correct, m, o, M, O);
            bsm_z_nc.at({m, o, M, O}) = bsm_z_kernel<Scalar>(Outcome::NonCorrect, m, o, M, O);
          }
    for (int n = 0; n <= e; ++n)
      for (int m = 0; m <= e; ++m)
        for (int k = 0; k <= n; ++k)
          for (int x = 0; x <= k; ++x)
            for (int y = 0; y <= n - k; ++y)
              for (int o = 0; o <= m; ++o)
                for (int kp = std::max(x, o + k - m); kp <= std::min(n - y, o + k); ++kp) {
                  qnd_x.at({n, m, k, x, y, o, kp}) =
                      lambda_qnd_combinatorial<Scalar>(n, m, k, x, y, o, kp);
                }
    for (int m = 0; m <= e; ++m)
      for (int M = 0; M <= e; ++M)
        for (int o = 0; o <= m; ++o)
          for (int O = 0; O <= M; ++O)
            for (int o2 = 0; o2 <= m; ++o2)
              for (int O2 = 0; O2 <= M; ++O2)
                bsm_x.at({m, M, o, O, o2, O2}) = bsm_x_kernel<Scalar>(m, M, o, O, o2, O2);
    for (int n = 0; n <= e; ++n)
      for (int N = 0; N <= e; ++N)
        for (int k = 0; k <= n; ++k)
          for (int K = 0; K <= N; ++K)
            for (int kp = 0; kp <= n; ++kp)
              for (int Kp = 0; Kp <= N; ++Kp) {
                local_c.at({n, N, k, K, kp, Kp}) =
                    local_x_kernel<Scalar>(Outcome::Correct, n, N, k, K, kp, Kp);
                local_nc.at({n, N, k, K, kp, Kp}) =
                    local_x_kernel<Scalar>(Outcome::NonCorrect, n, N, k, K, kp, Kp);
              }
  }
};

/// Built once per truncation order and shared; the tables are immutable.
template <typename Scalar> std::shared_ptr<const KernelTables<Scalar>> kernel_tables(int n_max) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const KernelTables<Scalar>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n_max);
  if (it == cache.end()) {
    it = cache.emplace(n_max, std::make_shared<const KernelTables<Scalar>>(n_max)).first;
  }
  return it->second;
}

template <typename Scalar> struct Monomials {
  const SumContext<Scalar> &ctx;

  Scalar channel(int kept, int lost) const {
    return ipow(ctx.eta_ch, kept) * ipow(Scalar(1) - ctx.eta_ch, lost);
  }
  Scalar det(int clicks, int dark) const {
    return ipow(ctx.eta_det, clicks) * ipow(Scalar(1) - ctx.eta_det, dark);
  }
  Scalar bsm(int photons) const {
    return ipow(ctx.eta_det_bsm, 2) * ipow(Scalar(1) - ctx.eta_det_bsm, photons - 2);
  }
};

template <typename Scalar> Scalar source_prob(const PhotonStatistics &stats, int n) {
  return Scalar(stats[n]);
}

// Diagonal weights w(m,o) of the heralded state Gamma on |o,m-o>.
template <typename Scalar>
Table<Scalar, 2> heralded_weights(const SumContext<Scalar> &ctx, const KernelTables<Scalar> &t) {
  const int e = ctx.n_max;
  const Monomials<Scalar> mono{ctx};
  Table<Scalar, 2> w(e + 1);
  for (int m = 0; m <= e; ++m)
    for (int o = 0; o <= m; ++o) {
      CompensatedSum<Scalar> acc;
      for (int n = 1; n <= e; ++n) {
        const Scalar pq = source_prob<Scalar>(ctx.roles.alice_bob, n) *
                          source_prob<Scalar>(ctx.roles.qnd, m);
        if (pq == Scalar(0)) continue;
        for (int k = 1; k <= n; ++k)
          for (int x = 0; x <= k; ++x)
            for (int y = 0; y <= n - k; ++y) {
              const Scalar c = t.qnd_z.at({n, m, k, x, y, o});
              if (c == Scalar(0)) continue;
              acc += pq * c * mono.det(3, 2 * n + m - x - y - 3) * mono.channel(n - x - y, x + y);
            }
      }
      w.at({m, o}) = acc.value();
    }
  return w;
}

// Off-diagonal weights W(n,m,k,o,k') of sigma_AC, summed over the lost photons.
template <typename Scalar>
Table<Scalar, 5> qnd_weights(const SumContext<Scalar> &ctx, const KernelTables<Scalar> &t) {
  const int e = ctx.n_max;
  const Monomials<Scalar> mono{ctx};
  Table<Scalar, 5> w(e + 1);
  for (int n = 0; n <= e; ++n)
    for (int m = 0; m <= e; ++m) {
      const Scalar pq =
          source_prob<Scalar>(ctx.roles.alice_bob, n) * source_prob<Scalar>(ctx.roles.qnd, m);
      if (pq == Scalar(0)) continue;
      for (int k = 0; k <= n; ++k)
        for (int o = 0; o <= m; ++o)
          for (int kp = std::max(0, o + k - m); kp <= std::min(n, o + k); ++kp) {
            CompensatedSum<Scalar> acc;
            for (int x = 0; x <= std::min(k, kp); ++x)
              for (int y = 0; y <= std::min(n - k, n - kp); ++y) {
                if (n + m - x - y < 2) continue;
                const Scalar c = t.qnd_x.at({n, m, k, x, y, o, kp});
                if (c == Scalar(0)) continue;
                acc += c * mono.det(2, n + m - x - y - 2) * mono.channel(n - x - y, x + y);
              }
            w.at({n, m, k, o, kp}) = pq * acc.value();
          }
    }
  return w;
}

} // namespace detail

/// Evaluates all five probabilities with shared intermediate weights.
template <typename Scalar> Probabilities<Scalar> probabilities(const SumContext<Scalar> &ctx) {
  ctx.validate();
  const auto tables = detail::kernel_tables<Scalar>(ctx.n_max);
  const auto &t = *tables;
  const int e = ctx.n_max;
  const detail::Monomials<Scalar> mono{ctx};
  Probabilities<Scalar> out;

  const auto w = detail::heralded_weights(ctx, t);
  CompensatedSum<Scalar> qnd, cz, ncz;
  for (int m = 0; m <= e; ++m)
    for (int o = 0; o <= m; ++o) {
      const Scalar wa = w.at({m, o});
      qnd += wa;
      if (wa == Scalar(0)) continue;
      for (int M = 0; M <= e; ++M)
        for (int O = 0; O <= M; ++O) {
          const Scalar wb = w.at({M, O});
          if (wb == Scalar(0) || m + M < 2) continue;
          const Scalar pair = wa * wb * mono.bsm(m + M);
          cz += pair * t.bsm_z_c.at({m, o, M, O});
          ncz += pair * t.bsm_z_nc.at({m, o, M, O});
        }
    }
  out.p_qnd = qnd.value();
  out.p_c_z = cz.value();
  out.p_nc_z = ncz.value();

  const auto wx = detail::qnd_weights(ctx, t);
  struct Entry {
    int n, m, k, o, kp;
    Scalar w;
  };
  std::vector<Entry> entries;
  for (int n = 0; n <= e; ++n)
    for (int m = 0; m <= e; ++m)
      for (int k = 0; k <= n; ++k)
        for (int o = 0; o <= m; ++o)
          for (int kp = std::max(0, o + k - m); kp <= std::min(n, o + k); ++kp) {
            const Scalar v = wx.at({n, m, k, o, kp});
            if (v != Scalar(0)) entries.push_back({n, m, k, o, kp, v});
          }
  CompensatedSum<Scalar> cx, ncx;
  for (const Entry &a : entries)
    for (const Entry &b : entries) {
      if (a.m + b.m < 2 || a.n + b.n < 2) continue;
      const Scalar mid = t.bsm_x.at({a.m, b.m, a.o, b.o, a.o + a.k - a.kp, b.o + b.k - b.kp});
      if (mid == Scalar(0)) continue;
      const Scalar common = a.w * b.w * mid * mono.bsm(a.m + b.m) * mono.det(2, a.n + b.n - 2);
      cx += common * t.local_c.at({a.n, b.n, a.k, b.k, a.kp, b.kp});
      ncx += common * t.local_nc.at({a.n, b.n, a.k, b.k, a.kp, b.kp});
    }
  out.p_c_x = cx.value();
  out.p_nc_x = ncx.value();
  return out;
}

template <typename Scalar> Scalar p_qnd(const SumContext<Scalar> &ctx) { return probabilities(ctx).p_qnd; }
template <typename Scalar> Scalar p_c_z(const SumContext<Scalar> &ctx) { return probabilities(ctx).p_c_z; }
template <typename Scalar> Scalar p_nc_z(const SumContext<Scalar> &ctx) { return probabilities(ctx).p_nc_z; }
template <typename Scalar> Scalar p_c_x(const SumContext<Scalar> &ctx) { return probabilities(ctx).p_c_x; }
template <typename Scalar> Scalar p_nc_x(const SumContext<Scalar> &ctx) { return probabilities(ctx).p_nc_x; }

namespace literal {

// Table-free evaluation that calls the published term functions inside the
// nested sums. Only distributivity is used to hoist factors that do not depend
// on inner indices. Slow; intended for cross-checking the tabulated path.

template <typename Scalar> Scalar p_qnd(const SumContext<Scalar> &ctx) {
  CompensatedSum<Scalar> acc;
  const int e = ctx.n_max;
  for (int n = 1; n <= e; ++n)
    for (int m = 0; m <= e; ++m) {
      const Scalar pq = detail::source_prob<Scalar>(ctx.roles.alice_bob, n) *
                        detail::source_prob<Scalar>(ctx.roles.qnd, m);
      for (int k = 1; k <= n; ++k)
        for (int x = 0; x <= k; ++x)
          for (int y = 0; y <= n - k; ++y)
            for (int o = 0; o <= m; ++o)
              detail::for_each_lambda_inner(n, m, k, x, y, o, [&](int s, int t, int u, int v, int up, int vp) {
                acc += pq * lambda_term<Scalar>({n, m, k, x, y, o, s, t, u, v, up, vp}, ctx);
              });
    }
  return acc.value();
}

/// Z-basis probability for one outcome, summing G term by term.
template <typename Scalar> Scalar p_z(Outcome outcome, const SumContext<Scalar> &ctx) {
  const int e = ctx.n_max;
  // Gamma weights per (m, o), each a literal Lambda sum.
  std::vector<std::vector<Scalar>> w(e + 1, std::vector<Scalar>(e + 1, Scalar(0)));
  for (int m = 0; m <= e; ++m)
    for (int o = 0; o <= m; ++o) {
      CompensatedSum<Scalar> acc;
      for (int n = 1; n <= e; ++n) {
        const Scalar pq = detail::source_prob<Scalar>(ctx.roles.alice_bob, n) *
                          detail::source_prob<Scalar>(ctx.roles.qnd, m);
        for (int k = 1; k <= n; ++k)
          for (int x = 0; x <= k; ++x)
            for (int y = 0; y <= n - k; ++y)
              detail::for_each_lambda_inner(n, m, k, x, y, o, [&](int s, int t, int u, int v, int up, int vp) {
                acc += pq * lambda_term<Scalar>({n, m, k, x, y, o, s, t, u, v, up, vp}, ctx);
              });
      }
      w[m][o] = acc.value();
    }
  CompensatedSum<Scalar> total_acc;
  for (int m = 0; m <= e; ++m)
    for (int o = 0; o <= m; ++o)
      for (int M = 0; M <= e; ++M)
        for (int O = 0; O <= M; ++O) {
          const int total = m + M;
          CompensatedSum<Scalar> kernel;
          for (int I = 1; I <= total; ++I)
            for (int Omega = 1; Omega <= total; ++Omega) {
              const auto [lo, hi] = detail::omega_range(outcome, total, I, Omega);
              for (int omega = lo; omega <= hi; ++omega) {
                const Scalar weight = Scalar(detail::outcome_weight(outcome, total, I, Omega, omega)) *
                                      ipow(ctx.eta_det_bsm, 2) *
                                      ipow(Scalar(1) - ctx.eta_det_bsm, total - 2);
                detail::for_each_g_half(m, o, M, O, I, Omega, omega, [&](const detail::GHalf &a) {
                  detail::for_each_g_half(m, o, M, O, I, Omega, omega, [&](const detail::GHalf &b) {
                    kernel += weight * g_term<Scalar>({m, o, M, O, I, Omega, a.i, omega, a.l, a.q, a.alpha,
                                                       a.phi, b.i, b.l, b.q, b.alpha, b.phi});
                  });
                });
              }
            }
          total_acc += w[m][o] * w[M][O] * kernel.value();
        }
  return total_acc.value();
}

/// X-basis probability for one outcome. Lambda_QND factors are hoisted out of
/// the BSM and local sums they multiply.
template <typename Scalar> Scalar p_x(Outcome outcome, const SumContext<Scalar> &ctx) {
  const int e = ctx.n_max;
  struct Side {
    int n, m, k, o, kp;
    Scalar weight;
  };
  std::vector<Side> sides;
  for (int n = 0; n <= e; ++n)
    for (int m = 0; m <= e; ++m) {
      const Scalar pq = detail::source_prob<Scalar>(ctx.roles.alice_bob, n) *
                        detail::source_prob<Scalar>(ctx.roles.qnd, m);
      for (int k = 0; k <= n; ++k)
        for (int x = 0; x <= k; ++x)
          for (int y = 0; y <= n - k; ++y)
            for (int o = 0; o <= m; ++o)
              for (int kp = std::max(x, o + k - m); kp <= std::min(n - y, o + k); ++kp) {
                const Scalar lam = lambda_qnd_x<Scalar>({n, m, k, x, y, o, kp}, ctx);
                if (lam != Scalar(0)) sides.push_back({n, m, k, o, kp, pq * lam});
              }
    }
  CompensatedSum<Scalar> acc;
  for (const Side &a : sides)
    for (const Side &b : sides) {
      if (a.m + b.m < 2 || a.n + b.n < 2) continue;
      const Scalar mid = detail::bsm_x_kernel<Scalar>(a.m, b.m, a.o, b.o, a.o + a.k - a.kp,
                                                      b.o + b.k - b.kp) *
                         ipow(ctx.eta_det_bsm, 2) *
                         ipow(Scalar(1) - ctx.eta_det_bsm, a.m + b.m - 2);
      if (mid == Scalar(0)) continue;
      const Scalar local = detail::local_x_kernel<Scalar>(outcome, a.n, b.n, a.k, b.k, a.kp, b.kp) *
                           ipow(ctx.eta_det, 2) * ipow(Scalar(1) - ctx.eta_det, a.n + b.n - 2);
      acc += a.weight * b.weight * mid * local;
    }
  return acc.value();
}

template <typename Scalar> Probabilities<Scalar> probabilities(const SumContext<Scalar> &ctx) {
  ctx.validate();
  Probabilities<Scalar> out;
  out.p_qnd = literal::p_qnd(ctx);
  out.p_c_z = p_z(Outcome::Correct, ctx);
  out.p_nc_z = p_z(Outcome::NonCorrect, ctx);
  out.p_c_x = p_x(Outcome::Correct, ctx);
  out.p_nc_x = p_x(Outcome::NonCorrect, ctx);
  return out;
}

} // namespace literal

/// Unit-efficiency closed forms (eta_det = eta'_det = 1), truncated at two pairs.
template <typename Scalar = double> struct UnitEfficiency {
  static Scalar p_qnd(const Scalar &p1, const Scalar &q1, const Scalar &q2, const Scalar &eta) {
    return p1 * (Scalar(2) * q2 * (Scalar(1) - eta) + Scalar(3) * q1 * eta) / Scalar(48);
  }
  static Scalar p_c(const Scalar &p1, const Scalar &q1, const Scalar &eta) {
    return p1 * p1 * q1 * q1 * eta * eta / Scalar(1024);
  }
  static Scalar p_nc() { return Scalar(0); }
};

/// R at eta_det = 1, tau = 0.
inline double unit_efficiency_rate(const SourceRoles &roles, double eta_ch) {
  if (!(eta_ch > 0.0) || eta_ch > 1.0) {
    throw Error(ErrorKind::InvalidParameter, "eta_ch must lie in (0, 1]");
  }
  const double p1 = roles.alice_bob[1];
  const double q1 = roles.qnd[1];
  const double q2 = roles.qnd[2];
  const double den = 8.0 * q2 + 4.0 * (3.0 * q1 - 2.0 * q2) * eta_ch;
  if (!(den > 0.0)) {
    throw Error(ErrorKind::DegenerateDenominator, "8 q2 + 4 (3 q1 - 2 q2) eta_ch must be positive");
  }
  return 3.0 * p1 * q1 * q1 * eta_ch * eta_ch / den;
}

} // namespace amdi
