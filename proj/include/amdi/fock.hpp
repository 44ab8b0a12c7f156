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
#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "amdi/channel.hpp"
#include "amdi/combinatorics.hpp"
#include "amdi/error.hpp"
#include "amdi/sources.hpp"

// Brute-force density-operator simulation of polarized linear optics over a
// photon-number-bounded Fock space. Every operator is a sparse map from
// (ket occupation, bra occupation) to a complex amplitude.

namespace amdi::fock {

using Complex = std::complex<double>;

enum class Polarization : std::uint8_t { H, V };

struct ModeIndex {
  std::string label;
  Polarization pol = Polarization::H;

  auto operator<=>(const ModeIndex &) const = default;
};

inline ModeIndex h(std::string label) { return {std::move(label), Polarization::H}; }
inline ModeIndex v(std::string label) { return {std::move(label), Polarization::V}; }

inline std::string to_string(const ModeIndex &mode) {
  return mode.label + (mode.pol == Polarization::H ? "_H" : "_V");
}

/// Occupation numbers of up to 16 modes, 4 bits each.
class Occupation {
public:
  static constexpr int kMaxModes = 16;
  static constexpr int kMaxPerMode = 15;

  constexpr Occupation() = default;
  constexpr explicit Occupation(std::uint64_t bits) : bits_(bits) {}

  int get(int pos) const { return static_cast<int>((bits_ >> (4 * pos)) & 0xF); }

  void set(int pos, int count) {
    if (count < 0 || count > kMaxPerMode) {
      throw Error(ErrorKind::CapExceeded,
                  "mode occupation " + std::to_string(count) + " out of range");
    }
    const std::uint64_t mask = std::uint64_t{0xF} << (4 * pos);
    bits_ = (bits_ & ~mask) | (static_cast<std::uint64_t>(count) << (4 * pos));
  }

  int total() const {
    int sum = 0;
    for (std::uint64_t b = bits_; b != 0; b >>= 4) sum += static_cast<int>(b & 0xF);
    return sum;
  }

  /// Removes position `pos`, shifting higher modes down.
  Occupation erased(int pos) const {
    const std::uint64_t low_mask = (pos == 0) ? 0 : ((std::uint64_t{1} << (4 * pos)) - 1);
    const std::uint64_t low = bits_ & low_mask;
    const std::uint64_t high = (pos + 1 >= kMaxModes) ? 0 : (bits_ >> (4 * (pos + 1)));
    return Occupation(low | (high << (4 * pos)));
  }

  std::uint64_t bits() const { return bits_; }

  auto operator<=>(const Occupation &) const = default;

private:
  std::uint64_t bits_ = 0;
};

class FockOperator {
public:
  using Key = std::pair<Occupation, Occupation>; // (ket, bra)
  using Entries = std::map<Key, Complex>;

  FockOperator() = default;

  FockOperator(std::vector<ModeIndex> modes, int photon_cap)
      : modes_(std::move(modes)), photon_cap_(photon_cap) {
    if (static_cast<int>(modes_.size()) > Occupation::kMaxModes) {
      throw Error(ErrorKind::CapExceeded, "register holds more than 16 modes");
    }
    auto sorted = modes_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorKind::InvalidParameter, "duplicate mode in register");
    }
  }

  /// |0><0| on the given modes.
  static FockOperator vacuum(std::vector<ModeIndex> modes, int photon_cap) {
    FockOperator op(std::move(modes), photon_cap);
    op.entries_[{Occupation{}, Occupation{}}] = 1.0;
    return op;
  }

  const std::vector<ModeIndex> &modes() const { return modes_; }
  int num_modes() const { return static_cast<int>(modes_.size()); }
  int photon_cap() const { return photon_cap_; }
  const Entries &entries() const { return entries_; }

  bool contains(const ModeIndex &mode) const {
    return std::find(modes_.begin(), modes_.end(), mode) != modes_.end();
  }

  int position(const ModeIndex &mode) const {
    const auto it = std::find(modes_.begin(), modes_.end(), mode);
    if (it == modes_.end()) {
      throw Error(ErrorKind::UnknownMode, to_string(mode));
    }
    return static_cast<int>(it - modes_.begin());
  }

  Complex entry(Occupation ket, Occupation bra) const {
    const auto it = entries_.find({ket, bra});
    return it == entries_.end() ? Complex{} : it->second;
  }

  /// Accumulates into an entry; respects the photon cap.
  void add(Occupation ket, Occupation bra, Complex value) {
    if (value == Complex{}) return;
    if (ket.total() > photon_cap_ || bra.total() > photon_cap_) {
      throw Error(ErrorKind::CapExceeded, "occupation exceeds photon cap " +
                                              std::to_string(photon_cap_));
    }
    entries_[{ket, bra}] += value;
  }

  /// Occupation vector from per-mode counts in register order.
  Occupation occupation(const std::vector<int> &counts) const {
    if (static_cast<int>(counts.size()) != num_modes()) {
      throw Error(ErrorKind::InvalidParameter, "occupation length mismatch");
    }
    Occupation occ;
    for (int i = 0; i < num_modes(); ++i) occ.set(i, counts[static_cast<size_t>(i)]);
    return occ;
  }

  Complex trace() const {
    CompensatedSum<double> re, im;
    for (const auto &[key, value] : entries_) {
      if (key.first == key.second) {
        re += value.real();
        im += value.imag();
      }
    }
    return {re.value(), im.value()};
  }

  /// Trace restricted to each total-photon-number block.
  std::map<int, double> block_traces() const {
    std::map<int, double> blocks;
    for (const auto &[key, value] : entries_) {
      if (key.first == key.second) blocks[key.first.total()] += value.real();
    }
    return blocks;
  }

  /// Largest |rho(K,B) - conj(rho(B,K))|.
  double hermiticity_defect() const {
    double worst = 0.0;
    for (const auto &[key, value] : entries_) {
      worst = std::max(worst, std::abs(value - std::conj(entry(key.second, key.first))));
    }
    return worst;
  }

  /// Largest |rho(K,B)| with differing total photon numbers on ket and bra.
  double cross_block_weight() const {
    double worst = 0.0;
    for (const auto &[key, value] : entries_) {
      if (key.first.total() != key.second.total()) worst = std::max(worst, std::abs(value));
    }
    return worst;
  }

  /// Copy with every mode of `from` renamed to `to`.
  FockOperator relabeled(const std::string &from, const std::string &to) const {
    auto modes = modes_;
    bool found = false;
    for (auto &mode : modes) {
      if (mode.label == from) {
        mode.label = to;
        found = true;
      }
    }
    if (!found) throw Error(ErrorKind::UnknownMode, from);
    FockOperator out(std::move(modes), photon_cap_);
    out.entries_ = entries_;
    return out;
  }

  void prune(double threshold) {
    std::erase_if(entries_, [threshold](const auto &kv) { return std::abs(kv.second) <= threshold; });
  }

private:
  std::vector<ModeIndex> modes_;
  int photon_cap_ = 0;
  Entries entries_;
};

/// Required detected photon counts on a set of modes, read out by PNR
/// detectors sharing one efficiency.
struct DetectionPattern {
  std::map<ModeIndex, int> requirements;
  double efficiency = 1.0;
};

namespace detail {

// Image of one restricted occupation under a linear mode map.
using Expansion = std::vector<std::pair<Occupation, Complex>>;

inline double sqrt_factorial(int n) {
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= j;
  return std::sqrt(f);
}

// Monomials of creation operators over r local modes, keyed by exponent vector.
using Polynomial = std::map<Occupation, Complex>;

inline Polynomial multiply_linear(const Polynomial &poly,
                                  const std::vector<Complex> &coefficients) {
  Polynomial out;
  for (const auto &[mono, c] : poly) {
    for (size_t j = 0; j < coefficients.size(); ++j) {
      if (coefficients[j] == Complex{}) continue;
      Occupation next = mono;
      next.set(static_cast<int>(j), mono.get(static_cast<int>(j)) + 1);
      out[next] += c * coefficients[j];
    }
  }
  return out;
}

// Fock amplitudes of a creation polynomial acting on vacuum.
inline Expansion to_fock(const Polynomial &poly, int r) {
  Expansion out;
  for (const auto &[mono, c] : poly) {
    double norm = 1.0;
    for (int j = 0; j < r; ++j) norm *= sqrt_factorial(mono.get(j));
    const Complex amp = c * norm;
    if (amp != Complex{}) out.emplace_back(mono, amp);
  }
  return out;
}

// matrix[j][i]: amplitude of output mode j in the image of input mode i.
using ModeMatrix = std::vector<std::vector<Complex>>;

inline Expansion transform_occupation(Occupation local, const ModeMatrix &matrix) {
  const int r = static_cast<int>(matrix.size());
  Polynomial poly{{Occupation{}, 1.0}};
  double norm = 1.0;
  for (int i = 0; i < r; ++i) {
    std::vector<Complex> column(static_cast<size_t>(r));
    for (int j = 0; j < r; ++j) column[static_cast<size_t>(j)] = matrix[static_cast<size_t>(j)][static_cast<size_t>(i)];
    const int n = local.get(i);
    for (int c = 0; c < n; ++c) poly = multiply_linear(poly, column);
    norm *= sqrt_factorial(n);
  }
  for (auto &[mono, c] : poly) c /= norm;
  return to_fock(poly, r);
}

inline Occupation extract(Occupation occ, const std::vector<int> &positions) {
  Occupation local;
  for (size_t j = 0; j < positions.size(); ++j) local.set(static_cast<int>(j), occ.get(positions[j]));
  return local;
}

inline Occupation implant(Occupation occ, const std::vector<int> &positions, Occupation local) {
  for (size_t j = 0; j < positions.size(); ++j) occ.set(positions[j], local.get(static_cast<int>(j)));
  return occ;
}

inline constexpr double kPruneThreshold = 1e-30;

} // namespace detail

/// Applies the passive linear map input_i^dag -> sum_j matrix[j][i] output_j^dag
/// on the listed modes (conjugating both ket and bra sides).
inline FockOperator apply_mode_transform(const FockOperator &state,
                                         const std::vector<ModeIndex> &modes,
                                         const detail::ModeMatrix &matrix) {
  std::vector<int> positions;
  for (const auto &m : modes) positions.push_back(state.position(m));

  std::map<Occupation, detail::Expansion> cache;
  auto image = [&](Occupation local) -> const detail::Expansion & {
    auto it = cache.find(local);
    if (it == cache.end()) it = cache.emplace(local, detail::transform_occupation(local, matrix)).first;
    return it->second;
  };

  FockOperator out(state.modes(), state.photon_cap());
  for (const auto &[key, value] : state.entries()) {
    const auto &ket_image = image(detail::extract(key.first, positions));
    const auto &bra_image = image(detail::extract(key.second, positions));
    for (const auto &[ket_local, a] : ket_image) {
      const Occupation ket = detail::implant(key.first, positions, ket_local);
      for (const auto &[bra_local, b] : bra_image) {
        out.add(ket, detail::implant(key.second, positions, bra_local), value * a * std::conj(b));
      }
    }
  }
  out.prune(detail::kPruneThreshold);
  return out;
}

/// Polarization-preserving 50:50 beam splitter: a^dag -> (a^dag + b^dag)/sqrt2,
/// b^dag -> (a^dag - b^dag)/sqrt2. Output ports keep the input labels.
inline FockOperator apply_beam_splitter(const FockOperator &state, const std::string &a,
                                        const std::string &b) {
  const double s = 1.0 / std::sqrt(2.0);
  const detail::ModeMatrix matrix{{s, s}, {s, -s}};
  FockOperator out = apply_mode_transform(state, {h(a), h(b)}, matrix);
  return apply_mode_transform(out, {v(a), v(b)}, matrix);
}

/// Polarization Hadamard: H^dag -> (H^dag + V^dag)/sqrt2, V^dag -> (H^dag - V^dag)/sqrt2.
inline FockOperator apply_hadamard(const FockOperator &state, const std::string &x) {
  const double s = 1.0 / std::sqrt(2.0);
  return apply_mode_transform(state, {h(x), v(x)}, {{s, s}, {s, -s}});
}

/// Partial trace over the listed modes.
inline FockOperator trace_out(const FockOperator &state, const std::vector<ModeIndex> &modes) {
  std::vector<int> positions;
  for (const auto &m : modes) positions.push_back(state.position(m));
  std::sort(positions.rbegin(), positions.rend());

  std::vector<ModeIndex> kept;
  for (int i = 0; i < state.num_modes(); ++i) {
    if (std::find(positions.begin(), positions.end(), i) == positions.end()) {
      kept.push_back(state.modes()[static_cast<size_t>(i)]);
    }
  }
  FockOperator out(kept, state.photon_cap());
  for (const auto &[key, value] : state.entries()) {
    Occupation ket = key.first, bra = key.second;
    bool diagonal = true;
    for (int pos : positions) {
      if (ket.get(pos) != bra.get(pos)) {
        diagonal = false;
        break;
      }
      ket = ket.erased(pos);
      bra = bra.erased(pos);
    }
    if (diagonal) out.add(ket, bra, value);
  }
  return out;
}

/// Pure-loss channel of transmittance eta on both polarizations of `x`: the
/// mode is mixed with a fresh vacuum environment which is then traced out.
inline FockOperator apply_loss(const FockOperator &state, const std::string &x, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "loss transmittance must lie in [0, 1]");
  }
  state.position(h(x));
  state.position(v(x));
  const double t = std::sqrt(eta), r = std::sqrt(1.0 - eta);
  const detail::ModeMatrix matrix{{t, r}, {r, -t}};

  FockOperator current = state;
  for (auto pol : {Polarization::H, Polarization::V}) {
    const ModeIndex env{"__env", pol};
    auto modes = current.modes();
    modes.push_back(env);
    // The fresh environment mode sits in the top (zero) nibble.
    FockOperator extended(modes, current.photon_cap());
    for (const auto &[key, value] : current.entries()) extended.add(key.first, key.second, value);
    extended = apply_mode_transform(extended, {{x, pol}, env}, matrix);
    current = trace_out(extended, {env});
  }
  return current;
}

/// Unnormalized conditional operator tr_measured(Pi rho) on the unmeasured modes.
inline FockOperator postselect_state(const FockOperator &state, const DetectionPattern &pattern) {
  std::vector<std::pair<int, int>> measured; // (position, required count)
  for (const auto &[mode, count] : pattern.requirements) {
    if (count < 0) throw Error(ErrorKind::InvalidParameter, "negative detection count");
    measured.emplace_back(state.position(mode), count);
  }
  std::sort(measured.begin(), measured.end(), std::greater<>());

  std::vector<ModeIndex> kept;
  for (int i = 0; i < state.num_modes(); ++i) {
    const bool is_measured = std::any_of(measured.begin(), measured.end(),
                                         [i](const auto &mp) { return mp.first == i; });
    if (!is_measured) kept.push_back(state.modes()[static_cast<size_t>(i)]);
  }
  FockOperator out(kept, state.photon_cap());
  for (const auto &[key, value] : state.entries()) {
    Occupation ket = key.first, bra = key.second;
    double weight = 1.0;
    for (const auto &[pos, required] : measured) {
      const int n = ket.get(pos);
      if (n != bra.get(pos)) {
        weight = 0.0;
        break;
      }
      weight *= pnr_weight(required, n, pattern.efficiency);
      if (weight == 0.0) break;
      ket = ket.erased(pos);
      bra = bra.erased(pos);
    }
    if (weight != 0.0) out.add(ket, bra, value * weight);
  }
  return out;
}

inline double postselect_probability(const FockOperator &state, const DetectionPattern &pattern) {
  return postselect_state(state, pattern).trace().real();
}

/// Joint operator on the concatenated registers.
inline FockOperator tensor(const FockOperator &a, const FockOperator &b) {
  auto modes = a.modes();
  modes.insert(modes.end(), b.modes().begin(), b.modes().end());
  FockOperator out(modes, a.photon_cap() + b.photon_cap());
  const int shift = 4 * a.num_modes();
  for (const auto &[ka, va] : a.entries()) {
    for (const auto &[kb, vb] : b.entries()) {
      out.add(Occupation(ka.first.bits() | (kb.first.bits() << shift)),
              Occupation(ka.second.bits() | (kb.second.bits() << shift)), va * vb);
    }
  }
  return out;
}

enum class SourceMixing {
  Mixed, ///< sum_n p_n |phi_n><phi_n|
  Pure,  ///< |psi><psi| with |psi> = sum_n sqrt(p_n) |phi_n>
};

/// Fock amplitudes of |phi_n> = (x_H^dag y_H^dag + x_V^dag y_V^dag)^n |0> / (n! sqrt(n+1))
/// over the local register (x_H, x_V, y_H, y_V).
inline detail::Expansion pair_state(int n) {
  detail::Polynomial poly{{Occupation{}, 1.0}};
  for (int j = 0; j < n; ++j) {
    detail::Polynomial next;
    for (const auto &[mono, c] : poly) {
      for (int pol = 0; pol < 2; ++pol) {
        Occupation m = mono;
        m.set(pol, m.get(pol) + 1);
        m.set(pol + 2, m.get(pol + 2) + 1);
        next[m] += c;
      }
    }
    poly = std::move(next);
  }
  double n_fact = 1.0;
  for (int j = 2; j <= n; ++j) n_fact *= j;
  const double prefactor = 1.0 / (n_fact * std::sqrt(n + 1.0));
  for (auto &[mono, c] : poly) c *= prefactor;
  return detail::to_fock(poly, 4);
}

/// Entanglement source emitting photon pairs into modes x and y.
inline FockOperator build_pair_source(const PhotonStatistics &stats, const std::string &x,
                                      const std::string &y, int photon_cap,
                                      SourceMixing mixing = SourceMixing::Mixed) {
  if (2 * stats.n_max() > photon_cap) {
    throw Error(ErrorKind::CapExceeded, "source needs " + std::to_string(2 * stats.n_max()) +
                                            " photons, cap is " + std::to_string(photon_cap));
  }
  FockOperator out({h(x), v(x), h(y), v(y)}, photon_cap);
  if (mixing == SourceMixing::Mixed) {
    for (int n = 0; n <= stats.n_max(); ++n) {
      if (stats[n] == 0.0) continue;
      const auto phi = pair_state(n);
      for (const auto &[ket, a] : phi) {
        for (const auto &[bra, b] : phi) out.add(ket, bra, stats[n] * a * std::conj(b));
      }
    }
  } else {
    detail::Expansion psi;
    for (int n = 0; n <= stats.n_max(); ++n) {
      if (stats[n] == 0.0) continue;
      for (const auto &[ket, a] : pair_state(n)) psi.emplace_back(ket, std::sqrt(stats[n]) * a);
    }
    for (const auto &[ket, a] : psi) {
      for (const auto &[bra, b] : psi) out.add(ket, bra, a * std::conj(b));
    }
  }
  return out;
}

/// |psi><psi| for a pure state given as (per-mode counts, amplitude) terms.
inline FockOperator pure_state(std::vector<ModeIndex> modes, int photon_cap,
                               const std::vector<std::pair<std::vector<int>, Complex>> &terms) {
  FockOperator out(std::move(modes), photon_cap);
  std::vector<std::pair<Occupation, Complex>> ket;
  for (const auto &[counts, amp] : terms) ket.emplace_back(out.occupation(counts), amp);
  for (const auto &[k, a] : ket) {
    for (const auto &[b, c] : ket) out.add(k, b, a * std::conj(c));
  }
  return out;
}

} // namespace amdi::fock
