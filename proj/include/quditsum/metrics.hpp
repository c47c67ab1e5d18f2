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

#ifndef QUDITSUM_METRICS_HPP
#define QUDITSUM_METRICS_HPP

#include <string>

#include "quditsum/tensor.hpp"

namespace quditsum {

// sum_{i != j} |rho_ij|
template <typename Derived>
double l1_coherence(const Eigen::MatrixBase<Derived>& rho) {
  const double c = rho.cwiseAbs().sum() - rho.diagonal().cwiseAbs().sum();
  return c > 0.0 ? c : 0.0;
}

// Sum of all |rho_ij|, diagonal included. For a product state this
// factorizes over qudits.
template <typename Derived>
double scaled_sum(const Eigen::MatrixBase<Derived>& rho) {
  return rho.cwiseAbs().sum();
}

double l1_coherence(const QuditState& s);
double l1_coherence(const JointState& s);
// Product rule per branch. A non-orthogonal mixture is joined first
// (ResourceError above `cap`).
double l1_coherence(const RegisterState& reg, std::size_t cap = kDefaultJointCap);

// c / (D - 1)
double normalized_coherence(double c_l1, double total_dim);
double normalized_coherence(const QuditState& s);
double normalized_coherence(const JointState& s);
double normalized_coherence(const RegisterState& reg, std::size_t cap = kDefaultJointCap);

struct FlattenResult {
  CMatrix unitary;    // diag(exp(-i theta_j))
  CMatrix flattened;  // unitary * rho * unitary^dagger, entries |rho_kl|
  // Equal to l1 coherence for circuit-form states.
  double robustness = 0.0;
};

// Removes the phases of a state rho_kl = C_kl exp(i(theta_k - theta_l)),
// C_kl >= 0. Throws ContractError when rho is not of that form within eps.
FlattenResult flatten_phases(const CMatrix& rho, double eps = 1e-10);
FlattenResult flatten_phases(const QuditState& s, double eps = 1e-10);

// Re Tr(ref rho) with a rank-one reference (overlap form, no square root).
double fidelity_pure(const RegisterState& reference, const RegisterState& rho);
double fidelity_pure(const JointState& reference, const JointState& rho);
double fidelity_pure(const CMatrix& reference, const CMatrix& rho);

struct MetricSample {
  std::string label;
  std::string stage;
  int index = -1;
  double fidelity = 1.0;
  double c_l1 = 0.0;
  double c_l1_norm = 0.0;
};

struct MetricDelta {
  double fidelity = 0.0;
  double c_l1 = 0.0;
  double c_l1_norm = 0.0;
};

// pre - post, componentwise.
MetricDelta delta_metric(const MetricSample& pre, const MetricSample& post);

}  // namespace quditsum

#endif  // QUDITSUM_METRICS_HPP
