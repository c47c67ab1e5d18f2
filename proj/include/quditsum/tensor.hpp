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

#ifndef QUDITSUM_TENSOR_HPP
#define QUDITSUM_TENSOR_HPP

// Complex small-matrix arithmetic and the qudit / register state model.
//
// Index convention: a register of n qudits with local dimension d is indexed
// by i = sum_t k_t d^t, so qudit t = 0 is the least-significant digit. The
// Kronecker product A (x) B places A in the more significant position, hence
// a product register is joined as rho_{n-1} (x) ... (x) rho_1 (x) rho_0.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quditsum/errors.hpp"

namespace quditsum {

using Complex = std::complex<double>;

template <typename Real>
using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using CMatrix = CMatrixT<double>;
using CVector = CVectorT<double>;
using RMatrix = Eigen::MatrixXd;

namespace tol {
inline constexpr double kTrace = 1e-10;
inline constexpr double kHermitian = 1e-12;
inline constexpr double kPsd = 1e-10;
// Eigenvalues below this are a hard failure rather than roundoff.
inline constexpr double kPsdHard = 1e-8;
inline constexpr double kUnitary = 1e-10;
}  // namespace tol

inline constexpr std::size_t kDefaultJointCap = 4096;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto z = m(i, j);
      if (!std::isfinite(std::real(z)) || !std::isfinite(std::imag(z))) return false;
    }
  return true;
}

template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double eps = tol::kHermitian) {
  return m.rows() == m.cols() && hermitian_defect(m) <= eps;
}

// max |U^dagger U - I| entrywise.
template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  const auto n = u.rows();
  return (u.adjoint() * u - Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n))
      .cwiseAbs()
      .maxCoeff();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double eps = tol::kUnitary) {
  return u.rows() == u.cols() && unitarity_defect(u) <= eps;
}

template <typename A, typename B>
Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                                       a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Smallest eigenvalue of a Hermitian matrix.
template <typename Derived>
double min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Plain> es(Plain(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// d^n, throwing ResourceError when it exceeds cap.
std::size_t checked_power(int d, int n, std::size_t cap);

// Digit of `index` at position `site` in base d.
inline int digit_at(std::size_t index, int d, int site) {
  for (int s = 0; s < site; ++s) index /= static_cast<std::size_t>(d);
  return static_cast<int>(index % static_cast<std::size_t>(d));
}

struct DensityReport {
  bool ok = true;
  std::string reason;
};

// Soft validity check with the documented tolerances (trace 1e-10,
// Hermitian 1e-12, eigenvalues >= -1e-10).
DensityReport check_density(const CMatrix& rho);

class QuditState {
 public:
  // Validates; throws ContractError on malformed input.
  QuditState(int d, CMatrix rho);

  // For states produced by CPTP maps of valid states: shape and trace are
  // checked, the eigenvalue test is skipped.
  static QuditState trusted(CMatrix rho);

  int dim() const { return d_; }
  const CMatrix& rho() const { return rho_; }
  bool is_valid() const { return check_density(rho_).ok; }
  bool is_pure(double eps = 1e-10) const;
  // True when rho is exactly a computational-basis projector |k><k| (within
  // eps); writes k.
  bool is_basis_state(int* digit, double eps = 1e-12) const;
  bool is_diagonal(double eps = 1e-12) const;

 private:
  struct Trusted {};
  QuditState(Trusted, CMatrix rho);
  int d_;
  CMatrix rho_;
};

struct Branch {
  double prob;
  std::vector<QuditState> qudits;
};

// An ordered product of qudit states, or a classical mixture of such
// products. `orthogonal` asserts that distinct branches have orthogonal
// supports (they differ in the basis value of at least one qudit), which lets
// entrywise sums factor branch by branch.
class RegisterState {
 public:
  explicit RegisterState(std::vector<QuditState> qudits);
  explicit RegisterState(std::vector<Branch> branches, bool orthogonal = false);

  int dim() const { return d_; }
  int size() const { return n_; }
  bool is_product() const { return branches_.size() == 1; }
  bool orthogonal_branches() const { return orthogonal_ || is_product(); }
  // Product form only; throws ContractError for a mixture.
  const std::vector<QuditState>& qudits() const;
  const std::vector<Branch>& branches() const { return branches_; }
  double total_probability() const;

 private:
  int d_ = 0;
  int n_ = 0;
  bool orthogonal_ = false;
  std::vector<Branch> branches_;
};

class JointState {
 public:
  JointState(int d, int n, CMatrix rho);
  static JointState trusted(int d, int n, CMatrix rho);

  int local_dim() const { return d_; }
  int size() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const CMatrix& rho() const { return rho_; }
  bool is_valid() const { return check_density(rho_).ok; }

 private:
  struct Trusted {};
  JointState(Trusted, int d, int n, CMatrix rho);
  int d_;
  int n_;
  CMatrix rho_;
};

// |k><k| in dimension d.
QuditState pure_digit_state(int k, int d);

// U rho U^dagger. U must be unitary within 1e-10 and match the dimension.
QuditState apply_unitary(const QuditState& state, const CMatrix& u);

// sum_b p_b (x)_t rho_{b,t}; throws ResourceError when d^n > cap.
JointState join_full(const RegisterState& reg, std::size_t cap = kDefaultJointCap);

// I (x) .. (x) op (x) .. (x) I with op on `site`. Dense; for small registers.
CMatrix embed_local(const CMatrix& op, int site, int d, int n);

// In-place local operations on a joint density matrix of n qudits.
namespace joint {

// rho <- U_site rho U_site^dagger
void apply_local_unitary(CMatrix& rho, int d, int n, int site, const CMatrix& u);

// Returns L_site rho R_site^dagger.
CMatrix local_sandwich(const CMatrix& rho, int d, int n, int site, const CMatrix& left,
                       const CMatrix& right);

// rho_ij <- phase_i conj(phase_j) rho_ij, i.e. conjugation by diag(phase).
void apply_diagonal(CMatrix& rho, const CVector& phase);

// rho <- (1-p) rho + p (I/d on site) (x) Tr_site(rho)
void depolarize_site(CMatrix& rho, int d, int n, int site, double p);

// Removes all coherence of `site` in the computational basis.
void dephase_site(CMatrix& rho, int d, int n, int site);

// Reduced density matrix of one site.
CMatrix reduce_to_site(const CMatrix& rho, int d, int n, int site);

}  // namespace joint

}  // namespace quditsum

#endif  // QUDITSUM_TENSOR_HPP
