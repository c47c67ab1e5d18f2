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

#ifndef QUDITSUM_BANDING_HPP
#define QUDITSUM_BANDING_HPP

#include <optional>
#include <utility>
#include <vector>

#include "quditsum/channels.hpp"
#include "quditsum/closed_form.hpp"

namespace quditsum {

struct BandingBound {
  double raw = 0.0;     // 1/2 log_d((n-1)(d^2-1) pi^2 / (3 eps)); 0 when n = 1
  int q_min = 1;        // max(1, ceil(raw))
  int q_effective = 1;  // min(q_min, n)
};

BandingBound min_banding_order(int d, int n, double epsilon);

struct InputPolicy {
  enum class Kind { Worst, Uniform, Explicit };
  Kind kind = Kind::Worst;
  int digit = 0;       // Uniform: every digit equals this value
  DigitString digits;  // Explicit: fixed string, requires matching n

  static InputPolicy worst() { return {}; }
  static InputPolicy uniform(int digit) { return {Kind::Uniform, digit, {}}; }
  static InputPolicy explicit_digits(DigitString b) { return {Kind::Explicit, 0, std::move(b)}; }
  DigitString resolve(int d, int n) const;
  std::string describe() const;
};

struct QBestCell {
  int d = 2;
  int n = 1;
  double p = 0.0;
  ChannelKind channel = ChannelKind::PDC;
  int q_best = 1;
  double f_max = 1.0;
  std::vector<double> curve;  // fidelity at q = 1..n
};

// Exhaustive scan of q = 1..n; ties go to the smaller q. Phase damping,
// depolarizing and noiseless cells use closed forms; amplitude damping runs
// the product backend up to the end of the sum stage.
QBestCell qbest_search(int d, int n, double p, ChannelKind channel, const InputPolicy& input);

struct SweepGrid {
  std::vector<int> d;
  std::vector<int> n;
  std::vector<double> p;
  ChannelKind channel = ChannelKind::PDC;
  InputPolicy input;
};

struct Saturation {
  int d = 2;
  double p = 0.0;
  int n0 = 1;      // smallest n with q_best constant over every scanned n >= n0
  int q_best = 1;  // that constant value
};

struct QBestMap {
  std::vector<QBestCell> cells;  // order: d, then p, then n
  std::vector<Saturation> saturation;
};

QBestMap qbest_map(const SweepGrid& grid, int jobs = 1);

// (q, f) for q = 1..n without noise.
std::vector<std::pair<int, double>> noiseless_banding_curve(int d, int n, const InputPolicy& input);

}  // namespace quditsum

#endif  // QUDITSUM_BANDING_HPP
