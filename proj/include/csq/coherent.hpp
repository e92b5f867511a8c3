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

#include <functional>

#include "csq/hilbert.hpp"
#include "csq/phase_space.hpp"

namespace csq {

/// Plane translation z -> z + alpha, or the sphere rotation Rz(phi) Ry(theta).
struct GroupElement {
  ManifoldKind kind = ManifoldKind::plane;
  Complex alpha{0.0, 0.0};
  double theta = 0.0;
  double phi = 0.0;

  static GroupElement translation(Complex alpha) { return {ManifoldKind::plane, alpha, 0.0, 0.0}; }
  static GroupElement rotation(double theta, double phi) { return {ManifoldKind::sphere, {}, theta, phi}; }

  PhasePoint act(PhasePoint x) const;
  PhasePoint act_inverse(PhasePoint x) const;
};

/// Glauber states on the plane (truncated Fock basis) or spin-j states on the sphere.
class CoherentStateSystem {
 public:
  static CoherentStateSystem plane(Eigen::Index truncation);
  static CoherentStateSystem sphere(Spin spin);

  ManifoldKind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }
  Spin spin() const { return Spin::from_twice(two_j_); }

  /// Vacuum on the plane, |j, j> on the sphere.
  StateVector fiducial() const;
  /// Plane: e^{-|z|^2/2} z^n / sqrt(n!). Sphere: exp(-i phi Jz) exp(-i theta Jy) |j, j>.
  StateVector vector(PhasePoint x) const;
  /// <omega_x | omega_y>.
  Complex kernel(PhasePoint x, PhasePoint y) const;
  /// |omega_x><omega_x|.
  Operator projector(PhasePoint x) const;
  /// D(alpha) (untruncated elements) or rotation(j, theta, phi).
  Operator group_action(const GroupElement& a) const;

 private:
  CoherentStateSystem(ManifoldKind kind, Eigen::Index dim, int two_j) : kind_(kind), dim_(dim), two_j_(two_j) {}
  ManifoldKind kind_;
  Eigen::Index dim_;
  int two_j_;
};

inline StateVector cs_vector(const CoherentStateSystem& sys, PhasePoint x) { return sys.vector(x); }
inline Complex kernel(const CoherentStateSystem& sys, PhasePoint x, PhasePoint y) { return sys.kernel(x, y); }
inline Operator cs_projector(const CoherentStateSystem& sys, PhasePoint x) { return sys.projector(x); }

/// A coherent-state system sampled on a quadrature grid: the embedding
/// H0 -> L2(grid), v -> <omega_x|v>, together with the reproducing kernel and an
/// orthonormal basis of the embedded subspace.
class Frame {
 public:
  Frame(CoherentStateSystem sys, GridPtr grid);

  const CoherentStateSystem& system() const { return sys_; }
  const GridPtr& grid() const { return grid_; }
  const Eigen::VectorXd& weights() const { return grid_->weights(); }

  /// E(i, n) = <omega_{x_i} | n>.
  const Eigen::MatrixXcd& embedding() const { return embedding_; }
  /// Orthonormal (in the weighted inner product) basis B = E G^{-1/2}, G = E^dag W E.
  /// Throws when cond(G) > 1e8.
  const Eigen::MatrixXcd& basis() const;
  double gram_condition() const { return gram_condition_; }

  /// Scaled copy of the reproducing kernel, used for fault-injection fixtures.
  Frame with_kernel_scale(double scale) const;
  double kernel_scale() const { return kernel_scale_; }

  Complex kernel(Eigen::Index i, Eigen::Index j) const;
  Eigen::VectorXcd kernel_diagonal() const;
  /// Dense node x node kernel; refuses grids above max_nodes.
  Eigen::MatrixXcd kernel_matrix(Eigen::Index max_nodes = 4000) const;
  /// Smallest eigenvalue of W^{1/2} K W^{1/2}.
  double kernel_min_weighted_eigenvalue() const;

  /// B^dag W op(B): a grid-linear map compressed to the embedded subspace.
  Operator compress(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& op) const;

 private:
  CoherentStateSystem sys_;
  GridPtr grid_;
  Eigen::MatrixXcd embedding_;
  Eigen::MatrixXcd basis_;
  double gram_condition_ = 1.0;
  double kernel_scale_ = 1.0;
};

/// (P0 Psi)(x_i) = sum_j w_j K(x_i, x_j) Psi(x_j).
GridFunction apply_P0(const Frame& frame, const GridFunction& psi);
/// Node values <omega_{x_i} | v>.
GridFunction embed_state(const Frame& frame, const StateVector& v);
/// sum_i w_i M_{x_i}.
Operator resolution_of_identity(const Frame& frame);

/// Tr(rho M_x).
double husimi(const CoherentStateSystem& sys, const DensityMatrix& rho, PhasePoint x);
Eigen::VectorXd husimi_on_grid(const Frame& frame, const DensityMatrix& rho);

}  // namespace csq
