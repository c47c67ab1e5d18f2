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

#ifndef QUDITSUM_SPIN_CHAIN_HPP
#define QUDITSUM_SPIN_CHAIN_HPP

#include <optional>
#include <vector>

#include "quditsum/closed_form.hpp"
#include "quditsum/tensor.hpp"

namespace quditsum {

struct HamiltonianTerm {
  enum class Kind { HadamardField, ControlledRotationCoupling };
  Kind kind = Kind::HadamardField;
  double coupling = 0.0;  // field strength or J (hbar = 1)
  int order = 0;          // coupling terms only
  CMatrix matrix;
};

// -(pi/sqrt 8)(sigma_x + sigma_z). Spin-1/2 only.
HamiltonianTerm hadamard_hamiltonian(int d = 2);

// -J (I - sigma_z) (x) (I - sigma_z) with J = pi / 2^{q+1}; `inverse` flips
// the sign of J.
HamiltonianTerm controlled_rotation_hamiltonian(int q, bool inverse = false);

// exp(-i H tau) by Hermitian eigendecomposition.
CMatrix evolve(const CMatrix& h, double tau);

// Integer m with exp(-i H_q tau) = diag(1,1,1,exp(i m 2 pi / 2^q)), read off
// the evolved unitary; m in [0, 2^q).
int effective_scaling(int tau, int q);

// The digit-expansion formula tau = 2^q r + sum 2^{q-z_i},
// m = r + sum (z_i + 1). Kept for comparison only.
int combinatorial_scaling(int tau, int q);

struct SpinPoint {
  double tau = 0.0;
  double f_out = 0.0;
  // Largest normalized coherence of the augend over the sum-stage gates.
  double c_sum_max = 0.0;
};

// Qubit adder with every gate replaced by its Hamiltonian evolved for tau.
// The sum stage keeps rotations of order <= q_band.
SpinPoint run_spin_adder(std::uint64_t a, std::uint64_t b, int n, double tau, int q_band);

std::vector<SpinPoint> spin_trace(std::uint64_t a, std::uint64_t b, int n, int q_band,
                                  const std::vector<double>& taus, int jobs = 1);

// Smallest shift P = k * step (1 <= k <= values/3) with |v[i+k] - v[i]| <= tol
// for every valid i; nullopt when none exists.
std::optional<double> detect_period(const std::vector<double>& values, double step, double tol);

}  // namespace quditsum

#endif  // QUDITSUM_SPIN_CHAIN_HPP
