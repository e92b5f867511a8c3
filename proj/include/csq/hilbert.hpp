// Copyright 2026 The csq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace csq {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Operator = CMatrix<double>;
using StateVector = CVector<double>;

class InvalidDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidSpin : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Spin quantum number stored as 2j so half-integers are exact.
class Spin {
 public:
  static Spin from_twice(int two_j) {
    if (two_j < 1) throw InvalidSpin("2j must be a positive integer");
    return Spin(two_j);
  }
  static Spin from_value(double j) {
    const double twice = 2.0 * j;
    const double rounded = std::round(twice);
    if (std::abs(twice - rounded) > 1e-12 || rounded < 1.0)
      throw InvalidSpin("spin must be a positive half-integer, got " + std::to_string(j));
    return Spin(static_cast<int>(rounded));
  }

  int twice() const { return two_j_; }
  double value() const { return 0.5 * two_j_; }
  Eigen::Index dim() const { return two_j_ + 1; }

  friend bool operator==(Spin a, Spin b) { return a.two_j_ == b.two_j_; }

 private:
  explicit Spin(int two_j) : two_j_(two_j) {}
  int two_j_;
};

namespace detail {
inline void require_dim(Eigen::Index dim) {
  if (dim < 2) throw InvalidDimension("dimension must be at least 2, got " + std::to_string(dim));
}
template <typename A, typename B>
void require_same_shape(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("operator dimensions differ");
}
}  // namespace detail

/// Truncated annihilation operator: entry (n-1, n) = sqrt(n).
template <typename Real = double>
CMatrix<Real> annihilation_op(Eigen::Index dim) {
  detail::require_dim(dim);
  CMatrix<Real> a = CMatrix<Real>::Zero(dim, dim);
  for (Eigen::Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<Real>(n));
  return a;
}

template <typename Real = double>
CMatrix<Real> creation_op(Eigen::Index dim) {
  return annihilation_op<Real>(dim).adjoint();
}

template <typename Real = double>
CMatrix<Real> number_op(Eigen::Index dim) {
  detail::require_dim(dim);
  CMatrix<Real> n = CMatrix<Real>::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) n(k, k) = static_cast<Real>(k);
  return n;
}

/// Parity diag((-1)^n).
template <typename Real = double>
CMatrix<Real> parity_op(Eigen::Index dim) {
  CMatrix<Real> p = CMatrix<Real>::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) p(k, k) = (k % 2 == 0) ? Real(1) : Real(-1);
  return p;
}

template <typename Derived>
auto matrix_exp(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  return Plain(m.derived().exp());
}

/// exp(alpha a^dag - conj(alpha) a) in the truncated basis. Unitary only away
/// from the truncation edge.
template <typename Real = double>
CMatrix<Real> displacement(Eigen::Index dim, std::complex<Real> alpha) {
  const CMatrix<Real> a = annihilation_op<Real>(dim);
  const CMatrix<Real> generator = alpha * a.adjoint() - std::conj(alpha) * a;
  return matrix_exp(generator);
}

/// Matrix elements <m|D(alpha)|n> of the untruncated displacement operator for
/// m < rows, n < cols. Built column by column from D|n> = (a^dag - conj(alpha)) D|n-1> / sqrt(n)
/// in a padded basis, so the block is free of truncation artifacts.
template <typename Real = double>
CMatrix<Real> displacement_elements(Eigen::Index rows, Eigen::Index cols, std::complex<Real> alpha) {
  if (rows < 1 || cols < 1) throw InvalidDimension("displacement block must be non-empty");
  const Real mod = std::abs(alpha);
  const Eigen::Index pad =
      40 + static_cast<Eigen::Index>(std::ceil(2.0 * mod * mod + 12.0 * mod));
  const Eigen::Index len = std::max(rows, cols) + pad;
  CVector<Real> column(len);
  // Coherent state |alpha> = D|0>.
  column(0) = std::exp(-Real(0.5) * mod * mod);
  for (Eigen::Index m = 1; m < len; ++m)
    column(m) = column(m - 1) * alpha / std::sqrt(static_cast<Real>(m));

  CMatrix<Real> out(rows, cols);
  out.col(0) = column.head(rows);
  CVector<Real> next(len);
  for (Eigen::Index n = 1; n < cols; ++n) {
    const Real inv = Real(1) / std::sqrt(static_cast<Real>(n));
    next(0) = -std::conj(alpha) * column(0) * inv;
    for (Eigen::Index m = 1; m < len; ++m)
      next(m) = (std::sqrt(static_cast<Real>(m)) * column(m - 1) - std::conj(alpha) * column(m)) * inv;
    column.swap(next);
    out.col(n) = column.head(rows);
  }
  return out;
}

template <typename Real = double>
struct SpinOperators {
  CMatrix<Real> jx, jy, jz;
};

/// Spin-j generators in the basis |j,m>, m = j, j-1, ..., -j (index k holds m = j - k).
template <typename Real = double>
SpinOperators<Real> spin_operators(Spin spin) {
  const Eigen::Index dim = spin.dim();
  const Real j = static_cast<Real>(spin.value());
  CMatrix<Real> jplus = CMatrix<Real>::Zero(dim, dim);
  CMatrix<Real> jz = CMatrix<Real>::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Real m = j - static_cast<Real>(k);
    jz(k, k) = m;
    if (k > 0) jplus(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const CMatrix<Real> jminus = jplus.adjoint();
  const std::complex<Real> half_i(0, Real(0.5));
  return {Real(0.5) * (jplus + jminus), -half_i * (jplus - jminus), jz};
}

/// exp(-i phi Jz) exp(-i theta Jy).
template <typename Real = double>
CMatrix<Real> rotation(Spin spin, Real theta, Real phi) {
  const auto ops = spin_operators<Real>(spin);
  const std::complex<Real> i(0, 1);
  const CMatrix<Real> about_y = matrix_exp(CMatrix<Real>(-i * theta * ops.jy));
  CMatrix<Real> about_z = CMatrix<Real>::Zero(spin.dim(), spin.dim());
  for (Eigen::Index k = 0; k < spin.dim(); ++k)
    about_z(k, k) = std::exp(-i * phi * ops.jz(k, k).real());
  return about_z * about_y;
}

template <typename A, typename B>
auto commutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  detail::require_same_shape(a, b);
  using Plain = typename A::PlainObject;
  return Plain(a * b - b * a);
}

/// U A U^dag.
template <typename U, typename A>
auto conjugate_by(const Eigen::MatrixBase<U>& u, const Eigen::MatrixBase<A>& a) {
  detail::require_same_shape(u, a);
  using Plain = typename A::PlainObject;
  return Plain(u * a * u.adjoint());
}

/// Entrywise max |A - B| over the top-left block (whole matrix when absent).
template <typename A, typename B>
double defect_norm(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                   std::optional<Eigen::Index> block = std::nullopt) {
  detail::require_same_shape(a, b);
  const Eigen::Index r = block ? *block : a.rows();
  const Eigen::Index c = block ? *block : a.cols();
  if (r > a.rows() || c > a.cols() || r < 0) throw DimensionMismatch("block exceeds dimension");
  if (r == 0) return 0.0;
  return static_cast<double>((a.topLeftCorner(r, c) - b.topLeftCorner(r, c)).cwiseAbs().maxCoeff());
}

template <typename A, typename B>
double frobenius_defect(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                        std::optional<Eigen::Index> block = std::nullopt) {
  detail::require_same_shape(a, b);
  const Eigen::Index r = block ? *block : a.rows();
  const Eigen::Index c = block ? *block : a.cols();
  return static_cast<double>((a.topLeftCorner(r, c) - b.topLeftCorner(r, c)).norm());
}

template <typename A>
double hermiticity_defect(const Eigen::MatrixBase<A>& a) {
  return defect_norm(a, a.adjoint());
}

/// Smallest eigenvalue of the Hermitian part.
template <typename A>
double smallest_eigenvalue(const Eigen::MatrixBase<A>& a) {
  using Plain = typename A::PlainObject;
  const Plain h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Plain> solver(h, Eigen::EigenvaluesOnly);
  return static_cast<double>(solver.eigenvalues().minCoeff());
}

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityMatrix {
 public:
  static DensityMatrix from_operator(Operator op) {
    if (op.rows() != op.cols()) throw DimensionMismatch("density matrix must be square");
    if (!op.allFinite()) throw std::invalid_argument("density matrix has non-finite entries");
    if (hermiticity_defect(op) > 1e-12) throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(op.trace() - Complex(1.0)) > 1e-10) throw std::invalid_argument("density matrix trace is not 1");
    if (smallest_eigenvalue(op) < -1e-10) throw std::invalid_argument("density matrix is not positive semidefinite");
    return DensityMatrix(std::move(op));
  }
  static DensityMatrix pure(const StateVector& v) {
    const StateVector u = v / v.norm();
    Operator op = u * u.adjoint();
    op = (op + op.adjoint()).eval() / 2.0;
    return from_operator(std::move(op));
  }

  const Operator& op() const { return op_; }
  Eigen::Index dim() const { return op_.rows(); }

 private:
  explicit DensityMatrix(Operator op) : op_(std::move(op)) {}
  Operator op_;
};

}  // namespace csq
