// Copyright 2026 The quditsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUDITSUM_CHANNELS_HPP
#define QUDITSUM_CHANNELS_HPP

#include <string>
#include <vector>

#include "quditsum/tensor.hpp"

namespace quditsum {

enum class ChannelKind { None, PDC, ADC, CDPC };

std::string to_string(ChannelKind k);
// Accepts none, pdc, adc, cdpc (case-insensitive).
ChannelKind parse_channel(const std::string& s);

struct Placement {
  bool after_qft_rotations = true;
  bool after_sum_rotations = true;
  // Also expose the control qudit of each noisy rotation.
  bool on_control = false;
};

struct NoiseSpec {
  ChannelKind kind = ChannelKind::None;
  double p = 0.0;
  Placement placement;

  bool active() const { return kind != ChannelKind::None && p > 0.0; }
  // Throws DomainError when p is outside the channel's domain for dimension d.
  void validate(int d) const;
};

// Largest admissible strength for the channel in dimension d.
double max_strength(ChannelKind k, int d);

struct KrausSet {
  int d = 0;
  ChannelKind kind = ChannelKind::None;
  double p = 0.0;
  std::vector<CMatrix> operators;

  // max |sum_E M_E^dagger M_E - I|
  double completeness_defect() const;
};

KrausSet kraus_pdc(int d, double p);
KrausSet kraus_adc(int d, double p);
// Weyl-operator form of the depolarizing map.
KrausSet kraus_cdpc(int d, double p);
KrausSet make_kraus(ChannelKind k, int d, double p);

// Kraus sum; the depolarizing channel is applied as p I/d + (1-p) rho.
QuditState apply_channel(const QuditState& state, const KrausSet& ch);
CMatrix apply_channel(const CMatrix& rho, const KrausSet& ch);

// Same channel on one site of an n-qudit joint density matrix, in place.
void apply_channel_site(CMatrix& rho, int d, int n, int site, const KrausSet& ch);

// (1-p)^{t(1 - delta_kl)}
RMatrix element_scaling_pdc(int t_exposures, int d, double p);

// sqrt((1-kp)(1-lp)) + p (d-1-max(k,l)); unguarded.
RMatrix element_scaling_adc(int d, double p);

// Guarded form: throws ContractError unless rho_kl = rho_{(k+m)(l+m)}
// within 1e-9 for all admissible shifts.
RMatrix element_scaling_adc(const QuditState& state, double p);

bool has_shift_invariant_coherences(const CMatrix& rho, double eps = 1e-9);

}  // namespace quditsum

#endif  // QUDITSUM_CHANNELS_HPP
