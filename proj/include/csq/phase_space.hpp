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

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csq/hilbert.hpp"

namespace csq {

enum class ManifoldKind { plane, sphere };

/// Chart coordinates: plane (q, p), sphere (theta, phi).
struct PhasePoint {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// z = (q + i p) / sqrt(2).
Complex plane_z(PhasePoint x);
PhasePoint plane_point(Complex z);
Eigen::Vector3d sphere_direction(PhasePoint x);
PhasePoint sphere_point(const Eigen::Vector3d& direction);

struct Manifold {
  ManifoldKind kind = ManifoldKind::plane;
  double radius = 0.0;  // plane cutoff in |z|
  int two_j = 0;        // sphere

  static Manifold plane(double radius) { return {ManifoldKind::plane, radius, 0}; }
  static Manifold sphere(Spin spin) { return {ManifoldKind::sphere, 0.0, spin.twice()}; }
  double j() const { return 0.5 * two_j; }
};

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TrajectoryLeftDomain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n);

/// Weights of the first-derivative Lagrange stencil at x0 over the given abscissae.
Eigen::VectorXd fornberg_first_derivative(double x0, const Eigen::VectorXd& xs);

/// Structured product rule over a chart. Node (i1, i2) is stored at i1 * n2 + i2,
/// where i1 runs over |z| (plane) or theta (sphere) and i2 over the periodic angle.
///
/// Coordinate-1 derivatives use local Lagrange stencils with ghost nodes reflected
/// through the origin / poles; coordinate-2 derivatives are spectral.
class QuadratureGrid {
 public:
  struct Stencil {
    std::vector<Eigen::Index> rows;
    std::vector<bool> half_turn;
    Eigen::VectorXd weights;
  };

  QuadratureGrid(Manifold manifold, Eigen::VectorXd coord1, Eigen::VectorXd weight1, int n2,
                 int stencil_width);

  const Manifold& manifold() const { return manifold_; }
  ManifoldKind kind() const { return manifold_.kind; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(nodes_.size()); }
  Eigen::Index n1() const { return coord1_.size(); }
  Eigen::Index n2() const { return n2_; }
  Eigen::Index index(Eigen::Index i1, Eigen::Index i2) const { return i1 * n2_ + i2; }
  const std::vector<PhasePoint>& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& coord1() const { return coord1_; }
  double angle(Eigen::Index i2) const { return 2.0 * M_PI * static_cast<double>(i2) / static_cast<double>(n2_); }
  const std::string& id() const { return id_; }

  /// d/d(coord1) with coord1 = |z| on the plane, theta on the sphere.
  Eigen::VectorXcd d1(const Eigen::VectorXcd& values) const;
  /// d/d(angle).
  Eigen::VectorXcd d2(const Eigen::VectorXcd& values) const;

  /// Chart gradient: (d/dq, d/dp) on the plane, (d/dtheta, d/dphi) on the sphere.
  std::array<Eigen::VectorXcd, 2> gradient(const Eigen::VectorXcd& values) const;
  /// omega^{12} at each node: 1 on the plane, 1 / (j sin theta) on the sphere.
  const Eigen::VectorXd& symplectic_inverse() const { return omega_inv_; }

  /// Nodes with |z| <= fraction * R on the plane; every node on the sphere.
  std::vector<bool> interior(double fraction = 0.7) const;

 private:
  Manifold manifold_;
  Eigen::VectorXd coord1_;
  Eigen::Index n2_;
  std::vector<PhasePoint> nodes_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd omega_inv_;
  std::vector<Stencil> stencils_;
  Eigen::MatrixXd spectral_;  // n2 x n2 periodic differentiation matrix
  std::string id_;
};

using GridPtr = std::shared_ptr<const QuadratureGrid>;

/// Polar rule for d^2z / pi on |z| <= R: Gauss-Legendre in |z|, trapezoidal in angle.
GridPtr build_plane_grid(double radius, int n_radial, int n_angular, int stencil_width = 9);
/// Composite radial rule: n_per_panel Gauss-Legendre nodes on each of [0, b0],
/// [b0, b1], ...; the last break is R. Disks |z| <= b_k are then integrated exactly.
GridPtr build_plane_grid(const std::vector<double>& radial_breaks, int n_per_panel, int n_angular,
                         int stencil_width = 9);
/// Gauss-Legendre in cos(theta) x uniform phi, normalized to (2j+1)/(4 pi) dOmega.
GridPtr build_sphere_grid(Spin spin, int n_theta, int n_phi, int stencil_width = 9);

struct GridFunction {
  GridPtr grid;
  Eigen::VectorXcd values;

  static GridFunction sample(GridPtr grid, const std::function<Complex(PhasePoint)>& fn);
  static GridFunction constant(GridPtr grid, Complex c);

  Complex integrate() const { return (grid->weights().cast<Complex>().array() * values.array()).sum(); }
  Eigen::Index size() const { return values.size(); }
};

void require_same_grid(const GridFunction& a, const GridFunction& b);

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(const GridFunction& a, const GridFunction& b);
GridFunction operator*(Complex s, const GridFunction& a);

/// Max |a - b| over the given node mask (all nodes when empty).
double max_defect(const GridFunction& a, const GridFunction& b, const std::vector<bool>& mask = {});

/// {f, g} = omega^{ij} d_i f d_j g.
GridFunction poisson_bracket(const GridFunction& f, const GridFunction& g);

/// The Hamiltonian field X(g) = omega^{ij} d_i g d_j, so X(g) f = {g, f} = -{f, g}.
class HamiltonianField {
 public:
  explicit HamiltonianField(const GridFunction& g);

  Eigen::VectorXcd apply(const Eigen::VectorXcd& values) const;
  GridFunction operator()(const GridFunction& f) const;
  /// One classic RK4 step of d/dtau u = X(g) u.
  Eigen::VectorXcd rk4_step(const Eigen::VectorXcd& values, double dtau) const;
  const GridPtr& grid() const { return grid_; }

 private:
  GridPtr grid_;
  Eigen::VectorXcd dg1_;
  Eigen::VectorXcd dg2_;
};

GridFunction hamiltonian_field_apply(const GridFunction& g, const GridFunction& f);

/// Max over interior nodes of the divergence of the Hamiltonian field of g with
/// respect to the invariant density.
double divergence_defect(const GridFunction& g, double interior_fraction = 0.7);

/// RK4 step of the Liouville equation dw/dtau = X(g) w. The angular direction is
/// spectral, so a step is stable for dtau * max|velocity| * n2 / (2 r) below about 2.8.
GridFunction liouville_step(const GridFunction& w, const GridFunction& g, double dtau);
/// RK4 step of dPsi/dtau = X(g) Psi.
GridFunction classical_schrodinger_step(const GridFunction& psi, const GridFunction& g, double dtau);

/// Smooth Hamiltonian given pointwise. The gradient is taken by a fourth-order
/// central difference when not supplied.
struct ScalarField {
  std::function<double(PhasePoint)> value;
  std::function<std::array<double, 2>(PhasePoint)> gradient;

  std::array<double, 2> grad(PhasePoint x) const;
};

/// RK4 integration of dx^i/dtau = omega^{ij} d_j g up to time tau.
PhasePoint canonical_flow_point(const Manifold& manifold, PhasePoint x, const ScalarField& g, double tau,
                                double dtau);

struct ClassicalMean {
  Complex value;
  bool normalization_warning = false;
};

/// Integral of f(x) rho(x, x) dmu.
ClassicalMean classical_mean(const GridFunction& rho_diag, const GridFunction& f);

}  // namespace csq
