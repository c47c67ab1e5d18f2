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

#include "quditsum/tensor.hpp"

#include <cmath>
#include <utility>

namespace quditsum {

std::size_t checked_power(int d, int n, std::size_t cap) {
  if (d < 2) throw DomainError("local dimension must be >= 2");
  if (n < 0) throw DomainError("register size must be >= 0");
  std::size_t p = 1;
  for (int i = 0; i < n; ++i) {
    if (p > cap / static_cast<std::size_t>(d))
      throw ResourceError("d^n = " + std::to_string(d) + "^" + std::to_string(n) +
                          " exceeds cap " + std::to_string(cap));
    p *= static_cast<std::size_t>(d);
  }
  if (p > cap) throw ResourceError("dimension exceeds cap " + std::to_string(cap));
  return p;
}

DensityReport check_density(const CMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) return {false, "not square"};
  if (!all_finite(rho)) return {false, "non-finite entry"};
  const double tr_err = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (tr_err > tol::kTrace) return {false, "trace differs from 1 by " + std::to_string(tr_err)};
  if (hermitian_defect(rho) > tol::kHermitian) return {false, "not Hermitian"};
  if (min_eigenvalue(rho) < -tol::kPsd) return {false, "negative eigenvalue"};
  return {true, {}};
}

QuditState::QuditState(int d, CMatrix rho) : d_(d), rho_(std::move(rho)) {
  if (d < 2) throw DomainError("local dimension must be >= 2");
  if (rho_.rows() != d || rho_.cols() != d) throw ContractError("density matrix is not d x d");
  if (!all_finite(rho_)) throw ContractError("density matrix has non-finite entries");
  if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > tol::kTrace)
    throw ContractError("density matrix trace is not 1");
  if (hermitian_defect(rho_) > tol::kHermitian)
    throw ContractError("density matrix is not Hermitian");
  if (min_eigenvalue(rho_) < -tol::kPsdHard)
    throw ContractError("density matrix has a negative eigenvalue");
}

QuditState::QuditState(Trusted, CMatrix rho) : d_(static_cast<int>(rho.rows())), rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || d_ < 2) throw ContractError("density matrix is not square");
}

QuditState QuditState::trusted(CMatrix rho) { return QuditState(Trusted{}, std::move(rho)); }

bool QuditState::is_pure(double eps) const {
  return std::abs((rho_ * rho_).trace().real() - 1.0) <= eps;
}

bool QuditState::is_diagonal(double eps) const {
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      if (i != j && std::abs(rho_(i, j)) > eps) return false;
  return true;
}

bool QuditState::is_basis_state(int* digit, double eps) const {
  if (!is_diagonal(eps)) return false;
  for (int k = 0; k < d_; ++k) {
    if (std::abs(rho_(k, k) - Complex(1.0, 0.0)) <= eps) {
      if (digit) *digit = k;
      return true;
    }
  }
  return false;
}

RegisterState::RegisterState(std::vector<QuditState> qudits)
    : RegisterState(std::vector<Branch>{Branch{1.0, std::move(qudits)}}, true) {}

RegisterState::RegisterState(std::vector<Branch> branches, bool orthogonal)
    : orthogonal_(orthogonal), branches_(std::move(branches)) {
  if (branches_.empty()) throw ContractError("register has no branches");
  n_ = static_cast<int>(branches_.front().qudits.size());
  d_ = n_ > 0 ? branches_.front().qudits.front().dim() : 0;
  for (const auto& b : branches_) {
    if (!(b.prob >= 0.0)) throw ContractError("branch probability is negative");
    if (static_cast<int>(b.qudits.size()) != n_) throw ContractError("branch size mismatch");
    for (const auto& q : b.qudits)
      if (q.dim() != d_) throw ContractError("mixed local dimensions in register");
  }
}

const std::vector<QuditState>& RegisterState::qudits() const {
  if (!is_product()) throw ContractError("register is a mixture of products");
  return branches_.front().qudits;
}

double RegisterState::total_probability() const {
  double s = 0.0;
  for (const auto& b : branches_) s += b.prob;
  return s;
}

JointState::JointState(int d, int n, CMatrix rho) : d_(d), n_(n), rho_(std::move(rho)) {
  const std::size_t dim = checked_power(d, n, static_cast<std::size_t>(-1));
  if (static_cast<std::size_t>(rho_.rows()) != dim || rho_.rows() != rho_.cols())
    throw ContractError("joint density matrix has the wrong shape");
  const auto rep = check_density(rho_);
  if (!rep.ok && rep.reason != "negative eigenvalue") throw ContractError(rep.reason);
  if (min_eigenvalue(rho_) < -tol::kPsdHard)
    throw ContractError("joint density matrix has a negative eigenvalue");
}

JointState::JointState(Trusted, int d, int n, CMatrix rho) : d_(d), n_(n), rho_(std::move(rho)) {
  const std::size_t dim = checked_power(d, n, static_cast<std::size_t>(-1));
  if (static_cast<std::size_t>(rho_.rows()) != dim || rho_.rows() != rho_.cols())
    throw ContractError("joint density matrix has the wrong shape");
}

JointState JointState::trusted(int d, int n, CMatrix rho) {
  return JointState(Trusted{}, d, n, std::move(rho));
}

QuditState pure_digit_state(int k, int d) {
  if (d < 2) throw DomainError("local dimension must be >= 2");
  if (k < 0 || k >= d) throw DomainError("digit out of range");
  CMatrix rho = CMatrix::Zero(d, d);
  rho(k, k) = 1.0;
  return QuditState::trusted(std::move(rho));
}

QuditState apply_unitary(const QuditState& state, const CMatrix& u) {
  if (u.rows() != state.dim() || u.cols() != state.dim())
    throw ContractError("unitary dimension mismatch");
  if (!is_unitary(u)) throw ContractError("matrix is not unitary");
  return QuditState::trusted(u * state.rho() * u.adjoint());
}

JointState join_full(const RegisterState& reg, std::size_t cap) {
  const int d = reg.dim();
  const int n = reg.size();
  const std::size_t dim = checked_power(d, n, cap);
  CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& b : reg.branches()) {
    if (b.prob == 0.0) continue;
    CMatrix acc = CMatrix::Identity(1, 1);
    for (int t = n - 1; t >= 0; --t) acc = kron(acc, b.qudits[t].rho());
    rho += b.prob * acc;
  }
  return JointState::trusted(d, n, std::move(rho));
}

CMatrix embed_local(const CMatrix& op, int site, int d, int n) {
  if (site < 0 || site >= n) throw DomainError("site out of range");
  if (op.rows() != d || op.cols() != d) throw ContractError("local operator dimension mismatch");
  CMatrix acc = CMatrix::Identity(1, 1);
  for (int t = n - 1; t >= 0; --t) acc = kron(acc, t == site ? op : CMatrix::Identity(d, d).eval());
  return acc;
}

namespace joint {
namespace {

struct SiteLayout {
  Eigen::Index stride;  // d^site
  Eigen::Index block;   // d^(site+1)
  Eigen::Index dim;     // d^n
};

SiteLayout layout(const CMatrix& rho, int d, int n, int site) {
  if (site < 0 || site >= n) throw DomainError("site out of range");
  SiteLayout l{1, 0, rho.rows()};
  for (int s = 0; s < site; ++s) l.stride *= d;
  l.block = l.stride * d;
  Eigen::Index expect = 1;
  for (int s = 0; s < n; ++s) expect *= d;
  if (expect != rho.rows() || rho.rows() != rho.cols())
    throw ContractError("joint matrix shape does not match d^n");
  return l;
}

// m <- op_site * m
void left_apply(CMatrix& m, int d, const SiteLayout& l, const CMatrix& op) {
  std::vector<Complex> buf(static_cast<std::size_t>(d));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index hi = 0; hi < l.dim; hi += l.block)
      for (Eigen::Index lo = 0; lo < l.stride; ++lo) {
        const Eigen::Index base = hi + lo;
        for (int k = 0; k < d; ++k) buf[k] = m(base + k * l.stride, c);
        for (int k = 0; k < d; ++k) {
          Complex s = 0.0;
          for (int j = 0; j < d; ++j) s += op(k, j) * buf[j];
          m(base + k * l.stride, c) = s;
        }
      }
}

// m <- m * op_site^dagger
void right_apply_adjoint(CMatrix& m, int d, const SiteLayout& l, const CMatrix& op) {
  std::vector<Complex> buf(static_cast<std::size_t>(d));
  for (Eigen::Index hi = 0; hi < l.dim; hi += l.block)
    for (Eigen::Index lo = 0; lo < l.stride; ++lo) {
      const Eigen::Index base = hi + lo;
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (int k = 0; k < d; ++k) buf[k] = m(r, base + k * l.stride);
        for (int k = 0; k < d; ++k) {
          Complex s = 0.0;
          for (int j = 0; j < d; ++j) s += buf[j] * std::conj(op(k, j));
          m(r, base + k * l.stride) = s;
        }
      }
    }
}

}  // namespace

void apply_local_unitary(CMatrix& rho, int d, int n, int site, const CMatrix& u) {
  const auto l = layout(rho, d, n, site);
  if (u.rows() != d || u.cols() != d) throw ContractError("local operator dimension mismatch");
  left_apply(rho, d, l, u);
  right_apply_adjoint(rho, d, l, u);
}

CMatrix local_sandwich(const CMatrix& rho, int d, int n, int site, const CMatrix& left,
                       const CMatrix& right) {
  const auto l = layout(rho, d, n, site);
  if (left.rows() != d || left.cols() != d || right.rows() != d || right.cols() != d)
    throw ContractError("local operator dimension mismatch");
  CMatrix out = rho;
  left_apply(out, d, l, left);
  right_apply_adjoint(out, d, l, right);
  return out;
}

void apply_diagonal(CMatrix& rho, const CVector& phase) {
  if (phase.size() != rho.rows()) throw ContractError("diagonal length mismatch");
  for (Eigen::Index j = 0; j < rho.cols(); ++j) {
    const Complex cj = std::conj(phase(j));
    for (Eigen::Index i = 0; i < rho.rows(); ++i) rho(i, j) *= phase(i) * cj;
  }
}

void depolarize_site(CMatrix& rho, int d, int n, int site, double p) {
  const auto l = layout(rho, d, n, site);
  const double keep = 1.0 - p;
  const double inv_d = 1.0 / d;
  for (Eigen::Index chi = 0; chi < l.dim; chi += l.block)
    for (Eigen::Index clo = 0; clo < l.stride; ++clo) {
      const Eigen::Index cb = chi + clo;
      for (Eigen::Index rhi = 0; rhi < l.dim; rhi += l.block)
        for (Eigen::Index rlo = 0; rlo < l.stride; ++rlo) {
          const Eigen::Index rb = rhi + rlo;
          Complex tr = 0.0;
          for (int k = 0; k < d; ++k) tr += rho(rb + k * l.stride, cb + k * l.stride);
          const Complex mixed = p * inv_d * tr;
          for (int k = 0; k < d; ++k)
            for (int kk = 0; kk < d; ++kk) {
              Complex& e = rho(rb + k * l.stride, cb + kk * l.stride);
              e *= keep;
              if (k == kk) e += mixed;
            }
        }
    }
}

void dephase_site(CMatrix& rho, int d, int n, int site) {
  const auto l = layout(rho, d, n, site);
  for (Eigen::Index j = 0; j < rho.cols(); ++j) {
    const Eigen::Index kj = (j / l.stride) % d;
    for (Eigen::Index i = 0; i < rho.rows(); ++i)
      if ((i / l.stride) % d != kj) rho(i, j) = 0.0;
  }
}

CMatrix reduce_to_site(const CMatrix& rho, int d, int n, int site) {
  const auto l = layout(rho, d, n, site);
  CMatrix r = CMatrix::Zero(d, d);
  for (Eigen::Index hi = 0; hi < l.dim; hi += l.block)
    for (Eigen::Index lo = 0; lo < l.stride; ++lo) {
      const Eigen::Index base = hi + lo;
      for (int k = 0; k < d; ++k)
        for (int kk = 0; kk < d; ++kk) r(k, kk) += rho(base + k * l.stride, base + kk * l.stride);
    }
  return r;
}

}  // namespace joint
}  // namespace quditsum
