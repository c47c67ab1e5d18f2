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

#include "quditsum/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace quditsum {

double l1_coherence(const QuditState& s) { return l1_coherence(s.rho()); }
double l1_coherence(const JointState& s) { return l1_coherence(s.rho()); }

double l1_coherence(const RegisterState& reg, std::size_t cap) {
  if (!reg.orthogonal_branches()) return l1_coherence(join_full(reg, cap));
  double total = 0.0;
  for (const auto& b : reg.branches()) {
    double prod = b.prob;
    for (const auto& q : b.qudits) prod *= scaled_sum(q.rho());
    total += prod;
  }
  return std::max(0.0, total - reg.total_probability());
}

double normalized_coherence(double c_l1, double total_dim) {
  if (!(total_dim > 1.0)) throw DomainError("normalized coherence needs dimension > 1");
  return c_l1 / (total_dim - 1.0);
}

double normalized_coherence(const QuditState& s) {
  return normalized_coherence(l1_coherence(s), s.dim());
}

double normalized_coherence(const JointState& s) {
  return normalized_coherence(l1_coherence(s), static_cast<double>(s.dim()));
}

double normalized_coherence(const RegisterState& reg, std::size_t cap) {
  return normalized_coherence(l1_coherence(reg, cap), std::pow(reg.dim(), reg.size()));
}

FlattenResult flatten_phases(const CMatrix& rho, double eps) {
  const Eigen::Index n = rho.rows();
  if (n != rho.cols()) throw ContractError("flatten_phases needs a square matrix");
  // Phases propagate along a maximum spanning tree of |rho_kl| so that no
  // phase is read from a negligible entry.
  std::vector<double> theta(n, 0.0);
  std::vector<char> done(n, 0);
  std::vector<double> best(n, -1.0);
  std::vector<Eigen::Index> parent(n, -1);
  for (Eigen::Index root = 0; root < n; ++root) {
    if (done[root]) continue;
    best[root] = std::numeric_limits<double>::infinity();
    for (;;) {
      Eigen::Index u = -1;
      for (Eigen::Index k = 0; k < n; ++k)
        if (!done[k] && best[k] >= 0.0 && (u < 0 || best[k] > best[u])) u = k;
      if (u < 0) break;
      done[u] = 1;
      if (parent[u] >= 0) theta[u] = theta[parent[u]] - std::arg(rho(parent[u], u));
      for (Eigen::Index k = 0; k < n; ++k) {
        const double w = std::abs(rho(u, k));
        if (!done[k] && w > 0.0 && w > best[k]) {
          best[k] = w;
          parent[k] = u;
        }
      }
    }
  }
  FlattenResult r;
  CVector phase(n);
  for (Eigen::Index k = 0; k < n; ++k) phase(k) = std::polar(1.0, -theta[k]);
  r.unitary = phase.asDiagonal();
  r.flattened = phase.asDiagonal() * rho * phase.conjugate().asDiagonal();
  const Eigen::MatrixXd mag = rho.cwiseAbs();
  if ((r.flattened - mag.cast<Complex>()).cwiseAbs2().maxCoeff() > eps * eps)
    throw ContractError("state is not of circuit form");
  r.robustness = l1_coherence(r.flattened);
  return r;
}

FlattenResult flatten_phases(const QuditState& s, double eps) { return flatten_phases(s.rho(), eps); }

double fidelity_pure(const CMatrix& reference, const CMatrix& rho) {
  if (reference.rows() != rho.rows() || reference.cols() != rho.cols())
    throw ContractError("fidelity arguments differ in shape");
  const double purity = (reference.cwiseAbs2()).sum();
  if (std::abs(purity - 1.0) > 1e-10) throw ContractError("fidelity reference is not pure");
  // Tr(A B) = sum_ij A_ij B_ji = sum_ij conj(A_ji) B_ji for Hermitian A.
  return (reference.conjugate().cwiseProduct(rho)).sum().real();
}

double fidelity_pure(const JointState& reference, const JointState& rho) {
  return fidelity_pure(reference.rho(), rho.rho());
}

double fidelity_pure(const RegisterState& reference, const RegisterState& rho) {
  if (reference.dim() != rho.dim() || reference.size() != rho.size())
    throw ContractError("fidelity registers differ in shape");
  const auto& ref = reference.qudits();
  for (const auto& q : ref)
    if (!q.is_pure()) throw ContractError("fidelity reference is not pure");
  double f = 0.0;
  for (const auto& b : rho.branches()) {
    double prod = b.prob;
    for (std::size_t t = 0; t < ref.size() && prod != 0.0; ++t)
      prod *= (ref[t].rho().conjugate().cwiseProduct(b.qudits[t].rho())).sum().real();
    f += prod;
  }
  return f;
}

MetricDelta delta_metric(const MetricSample& pre, const MetricSample& post) {
  return {pre.fidelity - post.fidelity, pre.c_l1 - post.c_l1, pre.c_l1_norm - post.c_l1_norm};
}

}  // namespace quditsum
