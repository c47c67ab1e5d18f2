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

#include <map>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "quditsum/adder.hpp"
#include "quditsum/gates.hpp"
#include "quditsum/spin_chain.hpp"

using namespace quditsum;

namespace {

// |Tr(A^dagger B)| / dim: 1 iff A and B agree up to a global phase.
double phase_overlap(const CMatrix& a, const CMatrix& b) {
  return std::abs((a.adjoint() * b).trace()) / double(a.rows());
}

}  // namespace

TEST_CASE("hadamard field") {
  const auto h = hadamard_hamiltonian();
  CHECK(h.coupling == doctest::Approx(std::numbers::pi / std::sqrt(8.0)));
  CHECK(is_hermitian(h.matrix));
  const CMatrix u1 = evolve(h.matrix, 1.0);
  CHECK((u1 - Complex(0, 1) * hadamard_d(2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(phase_overlap(u1, hadamard_d(2)) == doctest::Approx(1.0).epsilon(1e-10));
  const CMatrix u2 = evolve(h.matrix, 2.0);
  CHECK(phase_overlap(u2, CMatrix::Identity(2, 2)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(phase_overlap(evolve(h.matrix, 3.0), hadamard_d(2)) == doctest::Approx(1.0).epsilon(1e-10));
  // State overlap |<psi_H|psi(1)>|^2 from |0>.
  const CVector e0 = CVector::Unit(2, 0);
  CHECK(std::norm((hadamard_d(2) * e0).dot(u1 * e0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(hadamard_hamiltonian(3), UnsupportedError);
}

TEST_CASE("controlled rotation coupling") {
  for (int q = 1; q <= 4; ++q) {
    const auto h = controlled_rotation_hamiltonian(q);
    CHECK(h.coupling == doctest::Approx(std::numbers::pi / std::pow(2.0, q + 1)));
    for (int s = 0; s <= 3; ++s) {
      const double tau = std::pow(2.0, q) * s + 1;
      CHECK((evolve(h.matrix, tau) - controlled_rotation(2, q)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  CMatrix cz = CMatrix::Identity(4, 4);
  cz(3, 3) = -1;
  CHECK((evolve(controlled_rotation_hamiltonian(1).matrix, 1) - cz).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(evolve(controlled_rotation_hamiltonian(2).matrix, 1)(3, 3) - Complex(0, 1)) < 1e-12);
  CHECK(std::abs(evolve(controlled_rotation_hamiltonian(2).matrix, 5)(3, 3) - Complex(0, 1)) < 1e-12);
  const CMatrix inv = evolve(controlled_rotation_hamiltonian(3, true).matrix, 1);
  CHECK((inv - controlled_rotation(2, 3).adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("evolve") {
  std::mt19937 rng(31);
  const CMatrix a = oracle::random_density(4, rng);
  CHECK(evolve(a, 0.0).isIdentity(1e-12));
  for (double t1 : {0.3, 1.7})
    for (double t2 : {0.4, 2.9}) CHECK((evolve(a, t1) * evolve(a, t2) - evolve(a, t1 + t2)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(unitarity_defect(evolve(a, 5.5)) < 1e-10);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(evolve(bad, 1.0), ContractError);
}

TEST_CASE("effective scaling") {
  for (int q = 1; q <= 5; ++q) CHECK(effective_scaling(1, q) == 1);
  CHECK(effective_scaling(3, 2) == 3);
  CHECK(effective_scaling(9, 3) == 1);
  for (int q = 1; q <= 4; ++q)
    for (int tau = 1; tau <= 40; ++tau) CHECK(effective_scaling(tau, q) == tau % (1 << q));
  CHECK(combinatorial_scaling(3, 2) == 5);
}

TEST_CASE("spin adder") {
  const auto p = run_spin_adder(7, 7, 4, 1.0, 4);
  CHECK(p.f_out == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.c_sum_max == doctest::Approx(1.0).epsilon(1e-9));

  // tau = 0: the raw input against the ideal output.
  const auto z = run_spin_adder(7, 7, 4, 0.0, 4);
  CHECK(z.f_out == doctest::Approx(0.0).epsilon(1e-12));
  const auto z2 = run_spin_adder(3, 0, 2, 0.0, 2);
  CHECK(z2.f_out == doctest::Approx(1.0).epsilon(1e-12));

  // Every revival of the whole circuit reproduces the gate-based adder.
  for (int n = 1; n <= 4; ++n) {
    const std::uint64_t D = 1u << n;
    for (std::uint64_t a = 0; a < D; ++a)
      for (std::uint64_t b = 0; b < D; ++b)
        for (double tau : {1.0, 33.0}) CHECK(run_spin_adder(a, b, n, tau, n).f_out == doctest::Approx(1.0).epsilon(1e-9));
  }

  // Banded runs at the revival times equal the noiseless banded closed form.
  for (int q = 1; q < 4; ++q) {
    auto cfg = AdderConfig::from_integers(7, 7, 2, 4);
    cfg.q = q;
    const double gate = run_adder(cfg).at("post_sum").fidelity;
    const double cf = closed_form_banded_fidelity(encode_digits(7, 2, 4), 2, 4, q);
    CHECK(gate == doctest::Approx(cf).epsilon(1e-9));
    for (double tau : {1.0, 17.0, 33.0}) CHECK(run_spin_adder(7, 7, 4, tau, q).f_out == doctest::Approx(cf).epsilon(1e-9));
    double best = 0;
    for (int tau = 0; tau <= 32; ++tau) best = std::max(best, run_spin_adder(7, 7, 4, tau, q).f_out);
    // For q >= 2 the best integer time is a revival; with q = 1 a scaled
    // circuit at tau = 7 does better than the revival.
    if (q >= 2) CHECK(best == doctest::Approx(cf).epsilon(1e-9));
    else CHECK(best > cf);
  }
}

TEST_CASE("trace periodicity") {
  std::vector<double> taus;
  for (int i = 0; i <= 96; ++i) taus.push_back(i * 0.5);
  const std::map<int, double> fundamental = {{2, 16.0}, {3, 16.0}, {4, 2.0}};
  for (int q : {2, 3, 4}) {
    const auto tr = spin_trace(7, 7, 4, q, taus, 2);
    REQUIRE(tr.size() == taus.size());
    std::vector<double> f;
    for (const auto& p : tr) f.push_back(p.f_out);
    const auto per = detect_period(f, 0.5, 1e-9);
    REQUIRE(per);
    CHECK(*per == fundamental.at(q));
    // 16 is a common period of every band.
    for (std::size_t i = 0; i + 32 < f.size(); ++i) CHECK(std::abs(f[i + 32] - f[i]) < 1e-9);
    // Coherence is maximal where the fidelity peaks.
    std::size_t fi = 0;
    double cmax = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      if (tr[i].f_out > tr[fi].f_out + 1e-12) fi = i;
      cmax = std::max(cmax, tr[i].c_sum_max);
    }
    CHECK(tr[fi].c_sum_max == doctest::Approx(cmax).epsilon(1e-9));
  }
  CHECK_FALSE(detect_period({0.1, 0.5, 0.9, 0.2}, 1.0, 1e-9));
  CHECK(*detect_period({0, 1, 0, 1, 0, 1, 0, 1}, 0.25, 1e-12) == doctest::Approx(0.5));
}
