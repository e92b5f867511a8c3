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

#include <optional>
#include <string>
#include <vector>

#include "csq/coherent.hpp"
#include "csq/phase_space.hpp"
#include "csq/quantize.hpp"

namespace csq {

/// Outcome of one identity check.
struct StarReport {
  std::string label;
  Operator lhs;
  Operator rhs;
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

StarReport make_report(std::string label, Operator lhs, Operator rhs, double tolerance,
                       std::optional<Eigen::Index> block = std::nullopt);

/// |<omega_x|omega_z>|^2.
double beta_kernel(const CoherentStateSystem& sys, PhasePoint x, PhasePoint z);

/// (f * g)_eta(z) = g_eta(z) sum_x w_x f_eta(x) beta(x, z), evaluated as
/// g_eta(z) <omega_z|M(f_eta)|omega_z>.
GridFunction star_product_functions(const Frame& frame, const GridFunction& f, const GridFunction& g,
                                    const DeviceFunction& eta);
/// The operator product: double sum over x, z of w_x w_z f_eta(x) g_eta(z) beta(x, z) M_z.
Operator star_product_operators(const Frame& frame, const GridFunction& f, const GridFunction& g,
                                const DeviceFunction& eta);
/// f_eta g_eta.
GridFunction star_c_product(const GridFunction& f, const GridFunction& g, const DeviceFunction& eta);

struct SweepPoint {
  double parameter = 0.0;
  double defect = 0.0;
};

/// Sphere family: sup over nodes of |(f * g)_eta - f_eta g_eta| for each spin.
std::vector<SweepPoint> classical_limit_sweep(const std::vector<Spin>& spins, const PointFunction& f,
                                              const PointFunction& g, const DeviceFunction& eta);
/// Least-squares slope of log(defect) against log(parameter).
double power_law_exponent(const std::vector<SweepPoint>& sweep);

/// {g_eta, f_eta}: the representative of the device-conditioned bracket.
GridFunction eta_poisson_bracket(const GridFunction& f, const GridFunction& g, const DeviceFunction& eta);

HamiltonianField lift_X(const GridFunction& g);
HamiltonianField lift_X_eta(const GridFunction& g, const DeviceFunction& eta);

/// Max masked |U(f U^-1 psi) - (U f) psi| where U is one RK4 step of the flow of X(g).
double transformation_law_defect(const GridFunction& f, const GridFunction& g, double dtau, const GridFunction& psi,
                                 const std::vector<bool>& mask = {});

/// P0 X(f_eta) P0 in the orthonormal basis of the embedded subspace.
Operator Q_of(const Frame& frame, const GridFunction& f, const std::optional<DeviceFunction>& eta = std::nullopt);
/// P0 Pi(f_eta) P0 in the same basis.
Operator M_compressed(const Frame& frame, const GridFunction& f, const std::optional<DeviceFunction>& eta = std::nullopt);

/// Weighted-norm size of (1 - P0) X(h) restricted to the embedded subspace.
double field_leakage(const Frame& frame, const GridFunction& h);

struct QCommutatorReport {
  double premise_defect = 0.0;  // min over f, g of the leakage of X(., eta)
  double premise_tolerance = 1e-3;
  bool premise_holds = false;
  StarReport q_q;  // [Q(f), Q(g)] = Q({f, g})
  StarReport q_m;  // [Q(f), M(g)] = M({f, g})
};

QCommutatorReport q_commutator_defect(const Frame& frame, const GridFunction& f, const GridFunction& g,
                                      const DeviceFunction& eta, double tolerance);

struct CompatibilityDefect {
  double commutator = 0.0;     // leakage of X(eta_x)
  double kernel_residual = 0.0;  // max over sampled node pairs of the coordinate identity
};

/// Defect of X(eta_x) P0 = P0 X(eta_x). Throws for the delta device.
CompatibilityDefect compatibility_defect(const Frame& frame, const DeviceFunction& eta, PhasePoint x,
                                         Eigen::Index sample_nodes = 200);

}  // namespace csq
