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

#include "quditsum/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace quditsum {

namespace {

void check_common(int d, int n) {
  if (d < 2) throw DomainError("local dimension must be >= 2");
  if (n < 1) throw DomainError("register length must be >= 1");
}

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("noise strength must lie in [0,1]");
}

void check_q(int q, int n) {
  if (q < 1 || q > n) throw DomainError("banding order must lie in 1..n");
}

void check_b(const DigitString& b, int d, int n) {
  if (static_cast<int>(b.size()) != n) throw DomainError("digit string length differs from n");
  for (int x : b)
    if (x < 0 || x >= d) throw DomainError("digit out of range");
}

}  // namespace

int band_width(int q, int t) { return std::min(q, t + 1); }

double truncated_phase(const DigitString& b, int d, int t, int m) {
  double delta = 0.0;
  for (int j = 0; j <= t - m; ++j) delta += b[j] * std::pow(static_cast<double>(d), j - t - 1);
  return delta;
}

double qudit_overlap(int d, double c, double delta) {
  double s = 0.0;
  for (int r = 1; r < d; ++r) s += 2.0 * (d - r) * std::cos(2.0 * std::numbers::pi * delta * r);
  return (1.0 + c * s / d) / d;
}

double closed_form_banded_fidelity(const DigitString& b, int d, int n, int q) {
  return closed_form_banded_pdc_fidelity(b, d, n, q, 0.0);
}

double closed_form_pdc_fidelity(int d, int n, double p, SumStage stage) {
  check_common(d, n);
  check_p(p);
  double f = 1.0;
  for (int t = 0; t < n; ++t) {
    const int e = stage == SumStage::In ? t : 2 * t + 1;
    f *= (1.0 + (d - 1) * std::pow(1.0 - p, e)) / d;
  }
  return f;
}

double closed_form_banded_pdc_fidelity(const DigitString& b, int d, int n, int q, double p) {
  check_common(d, n);
  check_q(q, n);
  check_p(p);
  check_b(b, d, n);
  double f = 1.0;
  for (int t = 0; t < n; ++t) {
    const int m = band_width(q, t);
    f *= qudit_overlap(d, std::pow(1.0 - p, t + m), truncated_phase(b, d, t, m));
  }
  return f;
}

double closed_form_worst(int d, int n, int q, double p) {
  check_common(d, n);
  check_q(q, n);
  check_p(p);
  double f = 1.0;
  for (int i = 0; i < n; ++i) {
    if (i < q) {
      f *= (1.0 + (d - 1) * std::pow(1.0 - p, 2 * i + 1)) / d;
      continue;
    }
    double delta = 0.0;
    for (int c = 1; c <= i - q + 1; ++c) delta += (d - 1) / std::pow(static_cast<double>(d), q + c);
    f *= qudit_overlap(d, std::pow(1.0 - p, q + i), delta);
  }
  return f;
}

double closed_form_pdc_coherence(int d, int n, int q, double p, SumStage stage) {
  check_common(d, n);
  check_q(q, n);
  check_p(p);
  double prod = 1.0;
  for (int t = 0; t < n; ++t) {
    const int e = stage == SumStage::In ? t : t + band_width(q, t);
    prod *= 1.0 + (d - 1) * std::pow(1.0 - p, e);
  }
  return prod - 1.0;
}

int digits_for_value(unsigned long long v, int d) {
  if (d < 2) throw DomainError("local dimension must be >= 2");
  if (v < 1) throw DomainError("value must be >= 1");
  int n = 1;
  unsigned long long cap = static_cast<unsigned long long>(d);
  while (cap < v) {
    cap *= static_cast<unsigned long long>(d);
    ++n;
  }
  return n;
}

double dimension_fixed_value_fidelity(unsigned long long v, int d, double p, bool inclusive_upper) {
  check_p(p);
  const int n = digits_for_value(v, d);
  return closed_form_pdc_fidelity(d, inclusive_upper ? n + 1 : n, p, SumStage::Out);
}

double coherence_from_fidelity(double f, double total_dim) {
  if (!(total_dim > 1.0)) throw DomainError("total dimension must exceed 1");
  return (total_dim * f - 1.0) / (total_dim - 1.0);
}

double scaled_overlap(const std::vector<RMatrix>& scaling, const std::vector<double>& delta) {
  if (scaling.size() != delta.size()) throw ContractError("scaling and phase lists differ in length");
  double f = 1.0;
  for (std::size_t t = 0; t < scaling.size(); ++t) {
    const auto& s = scaling[t];
    const auto d = s.rows();
    double acc = 0.0;
    for (Eigen::Index k = 0; k < d; ++k)
      for (Eigen::Index l = 0; l < d; ++l)
        acc += s(k, l) * std::cos(2.0 * std::numbers::pi * delta[t] * static_cast<double>(k - l));
    f *= acc / static_cast<double>(d * d);
  }
  return f;
}

}  // namespace quditsum
