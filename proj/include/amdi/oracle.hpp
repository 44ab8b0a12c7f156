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

#include <string>

#include "amdi/channel.hpp"
#include "amdi/fock.hpp"
#include "amdi/probabilities.hpp"
#include "amdi/sources.hpp"

// Brute-force density-operator simulation of the full AMDI-QKD circuit.
//
// Per side: the pair source S_AC fills (a, c), S_QND fills (f, b). Mode c
// crosses the lossy half channel, then meets f on Charlie's QND splitter whose
// outputs are g (from f) and h (from c). A QND success is one H and one V
// click in g and nothing in h. Charlie's BSM mixes Bob's mode d with Alice's
// mode c, applies Hadamards to both outputs and reads them as g (from d) and
// h (from c).

namespace amdi::fock {

inline constexpr int kOracleMaxOrder = 3;

struct OracleOptions {
  SourceMixing mixing = SourceMixing::Mixed;
  bool bsm_hadamards = true;
};

/// Charlie's BSM detection pattern on outputs g, h.
inline DetectionPattern bsm_pattern(Outcome outcome, double eta) {
  if (outcome == Outcome::Correct) {
    return {{{h("g"), 1}, {v("g"), 1}, {h("h"), 0}, {v("h"), 0}}, eta};
  }
  return {{{h("g"), 1}, {v("h"), 1}, {v("g"), 0}, {h("h"), 0}}, eta};
}

inline DetectionPattern qnd_pattern(double eta) {
  return {{{h("g"), 1}, {v("g"), 1}, {h("h"), 0}, {v("h"), 0}}, eta};
}

/// Unnormalized state on (a, b) after a successful QND, before any local measurement.
inline FockOperator qnd_heralded_state(const SourceRoles &roles, double eta_ch, double eta_det,
                                       const OracleOptions &options = {}) {
  if (roles.n_max() > kOracleMaxOrder) {
    throw Error(ErrorKind::CapExceeded, "oracle supports truncation orders up to " +
                                            std::to_string(kOracleMaxOrder));
  }
  const int cap = 2 * (roles.alice_bob.n_max() + roles.qnd.n_max());
  FockOperator rho = tensor(build_pair_source(roles.alice_bob, "a", "c", cap, options.mixing),
                            build_pair_source(roles.qnd, "f", "b", cap, options.mixing));
  rho = apply_loss(rho, "c", eta_ch);
  rho = apply_beam_splitter(rho, "f", "c");
  rho = rho.relabeled("f", "g").relabeled("c", "h");
  return postselect_state(rho, qnd_pattern(eta_det));
}

/// Charlie's linear-optics BSM on inputs c (Alice) and d (Bob); outputs g, h.
inline FockOperator bsm_optics(const FockOperator &state, bool hadamards = true) {
  FockOperator out = apply_beam_splitter(state, "d", "c");
  if (hadamards) {
    out = apply_hadamard(out, "d");
    out = apply_hadamard(out, "c");
  }
  return out.relabeled("d", "g").relabeled("c", "h");
}

inline Probabilities<double> oracle_probabilities(const SourceRoles &roles, double eta_ch,
                                                  double eta_det, double eta_det_bsm,
                                                  const OracleOptions &options = {}) {
  Probabilities<double> out;
  const FockOperator sigma = qnd_heralded_state(roles, eta_ch, eta_det, options);

  // Z basis: Alice's local detector reads H (a_H = 1, a_V = 0).
  const DetectionPattern z_click{{{h("a"), 1}, {v("a"), 0}}, eta_det};
  const FockOperator gamma = postselect_state(sigma, z_click);
  out.p_qnd = gamma.trace().real();
  const FockOperator z_in = tensor(gamma.relabeled("b", "c"), gamma.relabeled("b", "d"));
  const FockOperator z_out = bsm_optics(z_in, options.bsm_hadamards);
  out.p_c_z = postselect_probability(z_out, bsm_pattern(Outcome::Correct, eta_det_bsm));
  out.p_nc_z = postselect_probability(z_out, bsm_pattern(Outcome::NonCorrect, eta_det_bsm));

  // X basis, measured after a correct BSM.
  const FockOperator x_in = tensor(sigma.relabeled("a", "alice").relabeled("b", "c"),
                                   sigma.relabeled("a", "bob").relabeled("b", "d"));
  FockOperator x_out = postselect_state(bsm_optics(x_in, options.bsm_hadamards),
                                        bsm_pattern(Outcome::Correct, eta_det_bsm));
  x_out = apply_hadamard(apply_hadamard(x_out, "alice"), "bob");
  const DetectionPattern x_c{{{h("alice"), 1}, {v("alice"), 0}, {h("bob"), 0}, {v("bob"), 1}}, eta_det};
  const DetectionPattern x_nc{{{h("alice"), 1}, {v("alice"), 0}, {h("bob"), 1}, {v("bob"), 0}}, eta_det};
  out.p_c_x = postselect_probability(x_out, x_c);
  out.p_nc_x = postselect_probability(x_out, x_nc);
  return out;
}

/// Oracle values of the five probabilities for a physical parameter point.
inline Probabilities<double> oracle_pipeline(const SourceRoles &roles, const SystemParams &params,
                                             const OracleOptions &options = {}) {
  params.validate();
  return oracle_probabilities(roles, channel_transmittance(params), params.eta_det,
                              bsm_detector_efficiency(params), options);
}

} // namespace amdi::fock
