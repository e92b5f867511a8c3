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
#include <optional>
#include <string>

#include "csq/coherent.hpp"
#include "csq/hilbert.hpp"
#include "csq/phase_space.hpp"

namespace csq {

using PointFunction = std::function<Complex(PhasePoint)>;
/// k(z, x) = eta_z(x): the density of readings x given the value z.
using DeviceKernel = std::function<Complex(PhasePoint z, PhasePoint x)>;

enum class DeviceKind { delta, gaussian, s_ordered, custom };

/// Measuring-device density eta_z(x), normalized so that the integral over x is 1.
struct DeviceFunction {
  DeviceKind kind = DeviceKind::delta;
  double sigma = 0.0;  // gaussian: per real coordinate of z (plane), geodesic radians (sphere)
  double s = -1.0;     // s_ordered
  std::function<Complex(PhasePoint x, PhasePoint z)> custom;  // eta_z(x)
  bool covariant = true;

  static DeviceFunction delta() { return {}; }
  static DeviceFunction gaussian(double sigma);
  static DeviceFunction s_ordered(double s);
  static DeviceFunction from_kernel(std::function<Complex(PhasePoint x, PhasePoint z)> kernel, bool covariant);
  /// Sphere only: (1 + a n_x . n_z) / (2j + 1).
  static DeviceFunction dipole(Spin spin, double a);

  std::string label() const;
};

/// Pointwise kernel of a device on a manifold. Throws for delta and s_ordered,
/// which have no pointwise density.
DeviceKernel device_kernel(const DeviceFunction& eta, const Manifold& manifold);

/// s = -1 antinormal, 0 Weyl, +1 normal.
struct OrderingRule {
  double s = 0.0;
  static OrderingRule antinormal() { return {-1.0}; }
  static OrderingRule weyl() { return {0.0}; }
  static OrderingRule normal() { return {1.0}; }
  std::string label() const;
};

/// f_eta(x) = sum_z w_z f(z) eta_z(x).
GridFunction smear(const GridFunction& f, const DeviceFunction& eta);
Complex smear_at(const GridFunction& f, const DeviceFunction& eta, PhasePoint x);

/// Pointwise multiplication on grid functions.
class MultiplicationOperator {
 public:
  explicit MultiplicationOperator(GridFunction symbol) : symbol_(std::move(symbol)) {}
  GridFunction operator()(const GridFunction& psi) const { return symbol_ * psi; }
  const GridFunction& symbol() const { return symbol_; }
  friend MultiplicationOperator operator*(const MultiplicationOperator& a, const MultiplicationOperator& b) {
    return MultiplicationOperator(a.symbol_ * b.symbol_);
  }

 private:
  GridFunction symbol_;
};

MultiplicationOperator pi_of_f(const GridFunction& f);
MultiplicationOperator pi_eta(const GridFunction& f, const DeviceFunction& eta);

/// M(f) = sum_i w_i f(x_i) M_{x_i}.
Operator quantize_stochastic(const Frame& frame, const GridFunction& f);
/// M(f_eta); the s_ordered device goes through quantize_s_ordered.
Operator quantize_eta(const Frame& frame, const GridFunction& f, const DeviceFunction& eta);
/// Plane only. exp((1 + s)/2 L) applied to the antinormal quantization, with
/// L(X) = [a, [a^dag, X]], evaluated in a padded Fock space.
Operator quantize_s_ordered(const Frame& frame, const GridFunction& f, double s);

/// 2 D(z) P D(z)^dag with untruncated displacement elements.
Operator wigner_operator(Eigen::Index dim, PhasePoint z);
/// Integral of (d^2 alpha / pi) exp(conj(alpha) z - alpha conj(z)) D(alpha) over alpha_grid.
Operator wigner_operator_literal(Eigen::Index dim, PhasePoint z, const QuadratureGrid& alpha_grid);
/// sum_i w_i f(z_i) W(z_i). Plane only.
Operator quantize_weyl(const Frame& frame, const GridFunction& f);
/// Tr(rho W(z)).
double wigner_function(const DensityMatrix& rho, PhasePoint z);

/// defect_norm(U M(f) U^dag, M(L_a f)) with (L_a f)(x) = f(a^{-1} x).
double covariance_defect_quantize(const Frame& frame, const PointFunction& f, const GroupElement& a,
                                  std::optional<Eigen::Index> block = std::nullopt);
/// Max over masked nodes of |smear(L_a f) - L_a smear(f)|. Plane translations.
double covariance_defect_pi_eta(const GridPtr& grid, const PointFunction& f, const DeviceFunction& eta,
                                const GroupElement& a, const std::vector<bool>& mask);
/// max |P0 Pi(f) P0 Psi - M(f) P0 Psi| over the embedded basis states.
double compression_defect(const Frame& frame, const GridFunction& f);

}  // namespace csq
