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

#include "quditsum/spin_chain.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "quditsum/gates.hpp"
#include "quditsum/metrics.hpp"

namespace quditsum {

HamiltonianTerm hadamard_hamiltonian(int d) {
  if (d != 2) throw UnsupportedError("the Hamiltonian construction is defined for qubits only");
  HamiltonianTerm h;
  h.kind = HamiltonianTerm::Kind::HadamardField;
  h.coupling = std::numbers::pi / std::sqrt(8.0);
  h.matrix.resize(2, 2);
  h.matrix << 1.0, 1.0, 1.0, -1.0;
  h.matrix *= -h.coupling;
  return h;
}

HamiltonianTerm controlled_rotation_hamiltonian(int q, bool inverse) {
  if (q < 1) throw DomainError("rotation order must be >= 1");
  HamiltonianTerm h;
  h.kind = HamiltonianTerm::Kind::ControlledRotationCoupling;
  h.order = q;
  h.coupling = std::numbers::pi / std::pow(2.0, q + 1) * (inverse ? -1.0 : 1.0);
  const CMatrix iz = (CMatrix(2, 2) << 0.0, 0.0, 0.0, 2.0).finished();
  h.matrix = -h.coupling * kron(iz, iz);
  return h;
}

CMatrix evolve(const CMatrix& h, double tau) {
  if (!is_hermitian(h)) throw ContractError("Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector ph(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) ph(i) = std::polar(1.0, -es.eigenvalues()(i) * tau);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

int effective_scaling(int tau, int q) {
  if (tau < 1) throw DomainError("tau must be a positive integer");
  const CMatrix u = evolve(controlled_rotation_hamiltonian(q).matrix, tau);
  const double phi = 2.0 * std::numbers::pi / std::pow(2.0, q);
  double arg = std::arg(u(3, 3));
  if (arg < 0) arg += 2.0 * std::numbers::pi;
  const long long period = 1LL << q;
  long long m = std::llround(arg / phi) % period;
  return static_cast<int>(m);
}

int combinatorial_scaling(int tau, int q) {
  if (tau < 1) throw DomainError("tau must be a positive integer");
  const int period = 1 << q;
  const int r = tau / period;
  const int z = tau % period;
  int m = r;
  for (int zi = 1; zi <= q; ++zi)
    if (z & (1 << (q - zi))) m += zi + 1;
  return m;
}

SpinPoint run_spin_adder(std::uint64_t a, std::uint64_t b, int n, double tau, int q_band) {
  if (n < 1) throw DomainError("register length must be >= 1");
  const DigitString ad = encode_digits(a, 2, n);
  const DigitString bd = encode_digits(b, 2, n);
  GateSchedule sched = concat(concat(qft_schedule(n), sum_schedule(n, q_band, n)), iqft_schedule(n));
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix rho = CMatrix::Zero(dim, dim);
  const auto ai = static_cast<Eigen::Index>(a);
  rho(ai, ai) = 1.0;
  const CMatrix uh = evolve(hadamard_hamiltonian().matrix, tau);
  SpinPoint pt;
  pt.tau = tau;
  for (const Gate& g : sched.gates) {
    if (!g.is_rotation()) {
      joint::apply_local_unitary(rho, 2, n, g.target, uh);
    } else {
      const CMatrix u = evolve(controlled_rotation_hamiltonian(g.order, g.is_inverse()).matrix, tau);
      CVector ph(dim);
      for (Eigen::Index x = 0; x < dim; ++x) {
        const int k = digit_at(static_cast<std::size_t>(x), 2, g.target);
        const int m = g.control_register == Register::Augend
                          ? digit_at(static_cast<std::size_t>(x), 2, *g.control)
                          : bd[*g.control];
        ph(x) = u(m * 2 + k, m * 2 + k);
      }
      joint::apply_diagonal(rho, ph);
    }
    if (g.stage == Stage::Sum)
      pt.c_sum_max = std::max(pt.c_sum_max, normalized_coherence(l1_coherence(rho), static_cast<double>(dim)));
  }
  const auto s = static_cast<Eigen::Index>((a + b) % (std::uint64_t{1} << n));
  pt.f_out = rho(s, s).real();
  return pt;
}

std::vector<SpinPoint> spin_trace(std::uint64_t a, std::uint64_t b, int n, int q_band,
                                  const std::vector<double>& taus, int jobs) {
  encode_digits(a, 2, n);
  encode_digits(b, 2, n);
  if (q_band < 1 || q_band > n) throw DomainError("banding order must lie in 1..n");
  std::vector<SpinPoint> out(taus.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < taus.size();)
      out[i] = run_spin_adder(a, b, n, taus[i], q_band);
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(taus.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

std::optional<double> detect_period(const std::vector<double>& values, double step, double tol) {
  const std::size_t n = values.size();
  for (std::size_t k = 1; 3 * k <= n; ++k) {
    bool ok = true;
    for (std::size_t i = 0; i + k < n && ok; ++i) ok = std::abs(values[i + k] - values[i]) <= tol;
    if (ok) return static_cast<double>(k) * step;
  }
  return std::nullopt;
}

}  // namespace quditsum
