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

#ifndef QUDITSUM_CLOSED_FORM_HPP
#define QUDITSUM_CLOSED_FORM_HPP

// Closed-form fidelities of the adder register. All are products over qudits
// of single-qudit overlaps and are independent of the augend.

#include <cstdint>
#include <vector>

#include "quditsum/tensor.hpp"

namespace quditsum {

using DigitString = std::vector<int>;

DigitString encode_digits(std::uint64_t v, int d, int n);
// Throws ResourceError when the value does not fit in 64 bits.
std::uint64_t decode_digits(const DigitString& digits, int d);

enum class SumStage { In, Out };

// m(q,t) = min(q, t+1)
int band_width(int q, int t);

// Phase deficit of qudit t when rotations above order m are dropped:
// sum_{j=0}^{t-m} b_j d^{j-t-1}.
double truncated_phase(const DigitString& b, int d, int t, int m);

// (1/d) (1 + c/d sum_{r=1}^{d-1} 2(d-r) cos(2 pi delta r))
double qudit_overlap(int d, double c, double delta);

// Noiseless banded fidelity after the sum stage.
double closed_form_banded_fidelity(const DigitString& b, int d, int n, int q);

// Phase damping, unbanded: stage In is before the sum stage, Out after.
double closed_form_pdc_fidelity(int d, int n, double p, SumStage stage);

// Phase damping with banding, after the sum stage.
double closed_form_banded_pdc_fidelity(const DigitString& b, int d, int n, int q, double p);

// Worst input b_i = d-1, written in terms of the geometric tail of the
// dropped phases.
double closed_form_worst(int d, int n, int q, double p);

// Coherence of the phase-damped register: C + 1 = prod_t (1 + (d-1)(1-p)^{e_t})
// with e_t the exposure count of qudit t.
double closed_form_pdc_coherence(int d, int n, int q, double p, SumStage stage);

// Smallest n >= 1 with d^n >= v.
int digits_for_value(unsigned long long v, int d);

// Unbanded phase-damped output fidelity of the register holding v. With
// `inclusive_upper`, the product runs over t = 0..n (n+1 factors).
double dimension_fixed_value_fidelity(unsigned long long v, int d, double p,
                                      bool inclusive_upper = false);

// Normalized coherence implied by a fidelity f for total dimension D:
// (D f - 1) / (D - 1).
double coherence_from_fidelity(double f, double total_dim);

// prod_t (1/d^2) sum_{k,l} S_{t,kl} exp(i 2 pi delta_t (k-l)), the overlap of
// an entrywise-scaled circuit state with its ideal counterpart.
double scaled_overlap(const std::vector<RMatrix>& scaling, const std::vector<double>& delta);

}  // namespace quditsum

#endif  // QUDITSUM_CLOSED_FORM_HPP
