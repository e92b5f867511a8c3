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

#include "csq/coherent.hpp"

#include <cmath>
#include <limits>

namespace csq {

namespace {

Eigen::Matrix3d rotation_matrix(double theta, double phi) {
  Eigen::Matrix3d rz = Eigen::AngleAxisd(phi, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  Eigen::Matrix3d ry = Eigen::AngleAxisd(theta, Eigen::Vector3d::UnitY()).toRotationMatrix();
  return rz * ry;
}

}  // namespace

PhasePoint GroupElement::act(PhasePoint x) const {
  if (kind == ManifoldKind::plane) return plane_point(plane_z(x) + alpha);
  return sphere_point(rotation_matrix(theta, phi) * sphere_direction(x));
}

PhasePoint GroupElement::act_inverse(PhasePoint x) const {
  if (kind == ManifoldKind::plane) return plane_point(plane_z(x) - alpha);
  return sphere_point(rotation_matrix(theta, phi).transpose() * sphere_direction(x));
}

CoherentStateSystem CoherentStateSystem::plane(Eigen::Index truncation) {
  detail::require_dim(truncation);
  return CoherentStateSystem(ManifoldKind::plane, truncation, 0);
}

CoherentStateSystem CoherentStateSystem::sphere(Spin spin) {
  return CoherentStateSystem(ManifoldKind::sphere, spin.dim(), spin.twice());
}

StateVector CoherentStateSystem::fiducial() const {
  StateVector v = StateVector::Zero(dim_);
  v(0) = 1.0;
  return v;
}

StateVector CoherentStateSystem::vector(PhasePoint x) const {
  StateVector v(dim_);
  if (kind_ == ManifoldKind::plane) {
    const Complex z = plane_z(x);
    v(0) = std::exp(-0.5 * std::norm(z));
    for (Eigen::Index n = 1; n < dim_; ++n) v(n) = v(n - 1) * z / std::sqrt(static_cast<double>(n));
    return v;
  }
  // Rotated highest weight: d^j_{m j}(theta) e^{-i m phi}, with k = j - m.
  const double c = std::cos(0.5 * x.c1);
  const double s = std::sin(0.5 * x.c1);
  const int two_j = two_j_;
  for (int k = 0; k <= two_j; ++k) {
    const double log_binom = std::lgamma(two_j + 1.0) - std::lgamma(k + 1.0) - std::lgamma(two_j - k + 1.0);
    const double amp = std::exp(0.5 * log_binom) * std::pow(c, two_j - k) * std::pow(s, k);
    const double m = 0.5 * two_j - k;
    v(k) = amp * std::exp(Complex(0.0, -m * x.c2));
  }
  return v;
}

Complex CoherentStateSystem::kernel(PhasePoint x, PhasePoint y) const { return vector(x).dot(vector(y)); }

Operator CoherentStateSystem::projector(PhasePoint x) const {
  const StateVector v = vector(x);
  return v * v.adjoint();
}

Operator CoherentStateSystem::group_action(const GroupElement& a) const {
  if (a.kind != kind_) throw std::invalid_argument("group element does not act on this system");
  if (kind_ == ManifoldKind::plane) return displacement_elements<double>(dim_, dim_, a.alpha);
  return csq::rotation<double>(spin(), a.theta, a.phi);
}

Frame::Frame(CoherentStateSystem sys, GridPtr grid) : sys_(sys), grid_(std::move(grid)) {
  if (grid_->kind() != sys_.kind()) throw GridMismatch("coherent system and grid live on different manifolds");
  if (sys_.kind() == ManifoldKind::sphere && grid_->manifold().two_j != sys_.spin().twice())
    throw GridMismatch("sphere grid was built for a different spin");
  const Eigen::Index n = grid_->size();
  embedding_.resize(n, sys_.dim());
  for (Eigen::Index i = 0; i < n; ++i)
    embedding_.row(i) = sys_.vector(grid_->nodes()[static_cast<size_t>(i)]).adjoint();

  const Eigen::MatrixXcd gram = embedding_.adjoint() * grid_->weights().asDiagonal() * embedding_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram);
  const Eigen::VectorXd lambda = solver.eigenvalues();
  gram_condition_ = lambda.minCoeff() > 0.0 ? lambda.maxCoeff() / lambda.minCoeff()
                                            : std::numeric_limits<double>::infinity();
  // Diagnostics such as the resolution of identity stay usable; basis() refuses.
  if (gram_condition_ > 1e8) return;
  const Eigen::MatrixXcd inv_sqrt =
      solver.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * solver.eigenvectors().adjoint();
  basis_ = embedding_ * inv_sqrt;
}

const Eigen::MatrixXcd& Frame::basis() const {
  if (basis_.size() == 0) throw std::runtime_error("embedded Gram matrix is too ill-conditioned");
  return basis_;
}

Frame Frame::with_kernel_scale(double scale) const {
  Frame copy = *this;
  copy.kernel_scale_ = scale;
  return copy;
}

Complex Frame::kernel(Eigen::Index i, Eigen::Index j) const {
  return kernel_scale_ * (embedding_.row(i) * embedding_.row(j).adjoint())(0, 0);
}

Eigen::VectorXcd Frame::kernel_diagonal() const {
  return kernel_scale_ * embedding_.rowwise().squaredNorm().cast<Complex>();
}

Eigen::MatrixXcd Frame::kernel_matrix(Eigen::Index max_nodes) const {
  if (grid_->size() > max_nodes) throw std::length_error("kernel matrix too large to materialize");
  return kernel_scale_ * embedding_ * embedding_.adjoint();
}

double Frame::kernel_min_weighted_eigenvalue() const {
  // Nonzero spectrum of (W^1/2 E)(W^1/2 E)^dag equals that of E^dag W E.
  const Eigen::MatrixXcd gram = embedding_.adjoint() * grid_->weights().asDiagonal() * embedding_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
  double smallest = kernel_scale_ * solver.eigenvalues().minCoeff();
  if (grid_->size() > sys_.dim()) smallest = std::min(smallest, 0.0);
  return smallest;
}

Operator Frame::compress(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& op) const {
  const Eigen::MatrixXcd& b = basis();
  Eigen::MatrixXcd image(b.rows(), b.cols());
  for (Eigen::Index n = 0; n < b.cols(); ++n) image.col(n) = op(b.col(n));
  return b.adjoint() * grid_->weights().asDiagonal() * image;
}

GridFunction apply_P0(const Frame& frame, const GridFunction& psi) {
  if (!psi.grid || psi.grid->id() != frame.grid()->id()) throw GridMismatch("function is not on the frame grid");
  const Eigen::MatrixXcd& e = frame.embedding();
  const Eigen::VectorXcd coeffs = e.adjoint() * frame.weights().cast<Complex>().cwiseProduct(psi.values);
  return {frame.grid(), frame.kernel_scale() * (e * coeffs)};
}

GridFunction embed_state(const Frame& frame, const StateVector& v) {
  if (v.size() != frame.system().dim()) throw DimensionMismatch("state dimension does not match the system");
  return {frame.grid(), frame.embedding() * v};
}

Operator resolution_of_identity(const Frame& frame) {
  const Eigen::MatrixXcd& e = frame.embedding();
  // sum_i w_i omega_i omega_i^dag with omega_i = E(i, .)^dag.
  return e.adjoint() * frame.weights().asDiagonal() * e;
}

double husimi(const CoherentStateSystem& sys, const DensityMatrix& rho, PhasePoint x) {
  if (rho.dim() != sys.dim()) throw DimensionMismatch("density matrix dimension does not match the system");
  const StateVector v = sys.vector(x);
  return v.dot(rho.op() * v).real();
}

Eigen::VectorXd husimi_on_grid(const Frame& frame, const DensityMatrix& rho) {
  if (rho.dim() != frame.system().dim()) throw DimensionMismatch("density matrix dimension does not match the system");
  const Eigen::MatrixXcd& e = frame.embedding();
  // <omega_i|rho|omega_i> = sum_mn E(i,m) rho_mn conj(E(i,n)).
  return (e * rho.op()).cwiseProduct(e.conjugate()).rowwise().sum().real();
}

}  // namespace csq
