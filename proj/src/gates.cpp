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

#include "quditsum/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace quditsum {

std::size_t GateSchedule::rotation_count() const {
  return static_cast<std::size_t>(
      std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.is_rotation(); }));
}

bool GateSchedule::noisy_after(std::size_t i) const {
  return std::binary_search(noise_after.begin(), noise_after.end(), i);
}

std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::Hadamard: return "H";
    case GateKind::ControlledRotation: return "R";
    case GateKind::InverseHadamard: return "Hdg";
    case GateKind::InverseControlledRotation: return "Rdg";
  }
  return "?";
}

std::string to_string(Stage s) {
  switch (s) {
    case Stage::Qft: return "qft";
    case Stage::Sum: return "sum";
    case Stage::Iqft: return "iqft";
  }
  return "?";
}

CMatrix hadamard_d(int d) {
  if (d < 2) throw DomainError("hadamard_d requires d >= 2");
  CMatrix h(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int m = 0; m < d; ++m)
    for (int k = 0; k < d; ++k) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>((m * k) % d) / d;
      h(m, k) = norm * Complex(std::cos(ang), std::sin(ang));
    }
  return h;
}

double rotation_angle(int d, int order, long long m, long long n) {
  if (d < 2) throw DomainError("rotation requires d >= 2");
  if (order < 1) throw DomainError("rotation order must be >= 1");
  double frac = static_cast<double>(m * n) / std::pow(static_cast<double>(d), order);
  frac -= std::floor(frac);
  return 2.0 * std::numbers::pi * frac;
}

CMatrix controlled_rotation(int d, int order) {
  if (d < 2) throw DomainError("rotation requires d >= 2");
  if (order < 1) throw DomainError("rotation order must be >= 1");
  CMatrix r = CMatrix::Zero(d * d, d * d);
  for (int m = 0; m < d; ++m)
    for (int k = 0; k < d; ++k) r(m * d + k, m * d + k) = std::polar(1.0, rotation_angle(d, order, m, k));
  return r;
}

CMatrix reduced_rotation(int d, int order, int b) {
  if (d < 2) throw DomainError("rotation requires d >= 2");
  if (order < 1) throw DomainError("rotation order must be >= 1");
  if (b < 0 || b >= d) throw DomainError("control digit out of range");
  CMatrix r = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) r(k, k) = std::polar(1.0, rotation_angle(d, order, b, k));
  return r;
}

GateSchedule qft_schedule(int n) {
  if (n < 1) throw DomainError("register length must be >= 1");
  GateSchedule s;
  for (int t = n - 1; t >= 0; --t) {
    Gate h;
    h.kind = GateKind::Hadamard;
    h.stage = Stage::Qft;
    h.target = t;
    h.layer = static_cast<int>(s.gates.size());
    s.gates.push_back(h);
    for (int j = t - 1; j >= 0; --j) {
      Gate r;
      r.kind = GateKind::ControlledRotation;
      r.stage = Stage::Qft;
      r.target = t;
      r.control = j;
      r.control_register = Register::Augend;
      r.order = t - j + 1;
      r.layer = static_cast<int>(s.gates.size());
      s.noise_after.push_back(s.gates.size());
      s.gates.push_back(r);
    }
  }
  s.depth = static_cast<int>(s.gates.size());
  return s;
}

GateSchedule sum_schedule(int n, int q, int n_control) {
  if (n < 1) throw DomainError("register length must be >= 1");
  if (n_control < 0) n_control = n;
  if (q < 1 || q > n) throw DomainError("banding order must lie in 1..n");
  GateSchedule s;
  int max_layer = -1;
  for (int t = 0; t < n; ++t) {
    const int m = std::min(q, t + 1);
    for (int o = 1; o <= m; ++o) {
      const int c = t - o + 1;
      if (c >= n_control) continue;
      Gate r;
      r.kind = GateKind::ControlledRotation;
      r.stage = Stage::Sum;
      r.target = t;
      r.control = c;
      r.control_register = Register::Addend;
      r.order = o;
      r.layer = o - 1;
      max_layer = std::max(max_layer, r.layer);
      s.noise_after.push_back(s.gates.size());
      s.gates.push_back(r);
    }
  }
  s.depth = max_layer + 1;
  return s;
}

GateSchedule iqft_schedule(int n) {
  const GateSchedule fwd = qft_schedule(n);
  GateSchedule s;
  for (auto it = fwd.gates.rbegin(); it != fwd.gates.rend(); ++it) {
    Gate g = *it;
    g.kind = g.kind == GateKind::Hadamard ? GateKind::InverseHadamard
                                          : GateKind::InverseControlledRotation;
    g.stage = Stage::Iqft;
    g.layer = static_cast<int>(s.gates.size());
    s.gates.push_back(g);
  }
  s.depth = static_cast<int>(s.gates.size());
  return s;
}

GateSchedule concat(const GateSchedule& a, const GateSchedule& b) {
  GateSchedule s = a;
  const std::size_t off = a.gates.size();
  s.gates.insert(s.gates.end(), b.gates.begin(), b.gates.end());
  for (auto i : b.noise_after) s.noise_after.push_back(i + off);
  s.depth = a.depth + b.depth;
  return s;
}

}  // namespace quditsum
