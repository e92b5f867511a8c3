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

#include "csq/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace csq {

namespace {

void require_frame_grid(const Frame& frame, const GridFunction& f) {
  if (!f.grid || f.grid->id() != frame.grid()->id()) throw GridMismatch("function is not on the frame grid");
}

GridFunction representative(const GridFunction& f, const std::optional<DeviceFunction>& eta) {
  return eta ? smear(f, *eta) : f;
}

// <omega_i|X|omega_i> for every node.
Eigen::VectorXcd node_expectations(const Frame& frame, const Operator& x) {
  const Eigen::MatrixXcd& e = frame.embedding();
  return (e * x).cwiseProduct(e.conjugate()).rowwise().sum();
}

}  // namespace

StarReport make_report(std::string label, Operator lhs, Operator rhs, double tolerance,
                       std::optional<Eigen::Index> block) {
  StarReport r;
  r.label = std::move(label);
  r.defect = defect_norm(lhs, rhs, block);
  r.tolerance = tolerance;
  r.pass = r.defect <= tolerance;
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  return r;
}

double beta_kernel(const CoherentStateSystem& sys, PhasePoint x, PhasePoint z) { return std::norm(sys.kernel(x, z)); }

GridFunction star_product_functions(const Frame& frame, const GridFunction& f, const GridFunction& g,
                                    const DeviceFunction& eta) {
  require_frame_grid(frame, f);
  require_same_grid(f, g);
  const GridFunction f_eta = smear(f, eta);
  const GridFunction g_eta = smear(g, eta);
  const Operator m = quantize_stochastic(frame, f_eta);
  return {frame.grid(), g_eta.values.cwiseProduct(node_expectations(frame, m))};
}

Operator star_product_operators(const Frame& frame, const GridFunction& f, const GridFunction& g,
                                const DeviceFunction& eta) {
  require_frame_grid(frame, f);
  require_same_grid(f, g);
  const GridFunction f_eta = smear(f, eta);
  const GridFunction g_eta = smear(g, eta);
  const Eigen::MatrixXcd& e = frame.embedding();
  const Eigen::VectorXcd wf = frame.weights().cast<Complex>().cwiseProduct(f_eta.values);
  const Eigen::Index n = e.rows();
  Eigen::VectorXcd symbol(n);
  for (Eigen::Index z = 0; z < n; ++z) {
    // beta(x, z) = |K(x, z)|^2 for all x at once.
    const Eigen::VectorXcd column = e * e.row(z).adjoint();
    symbol(z) = g_eta.values(z) * (wf.array() * column.cwiseAbs2().cast<Complex>().array()).sum();
  }
  return quantize_stochastic(frame, GridFunction{frame.grid(), symbol});
}

GridFunction star_c_product(const GridFunction& f, const GridFunction& g, const DeviceFunction& eta) {
  require_same_grid(f, g);
  return smear(f, eta) * smear(g, eta);
}

std::vector<SweepPoint> classical_limit_sweep(const std::vector<Spin>& spins, const PointFunction& f,
                                              const PointFunction& g, const DeviceFunction& eta) {
  std::vector<SweepPoint> out;
  for (const Spin spin : spins) {
    // Exact for the polynomial degrees that appear in beta * f.
    const int n_theta = spin.twice() + 4;
    const int n_phi = 2 * spin.twice() + 8;
    const GridPtr grid = build_sphere_grid(spin, n_theta, n_phi);
    const Frame frame(CoherentStateSystem::sphere(spin), grid);
    const GridFunction fs = GridFunction::sample(grid, f);
    const GridFunction gs = GridFunction::sample(grid, g);
    const GridFunction star = star_product_functions(frame, fs, gs, eta);
    const GridFunction classical = star_c_product(fs, gs, eta);
    out.push_back({spin.value(), max_defect(star, classical)});
  }
  return out;
}

double power_law_exponent(const std::vector<SweepPoint>& sweep) {
  if (sweep.size() < 2) throw std::invalid_argument("power-law fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(sweep.size());
  for (const auto& p : sweep) {
    if (!(p.defect > 0.0) || !(p.parameter > 0.0)) throw std::invalid_argument("power-law fit needs positive data");
    const double x = std::log(p.parameter);
    const double y = std::log(p.defect);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

GridFunction eta_poisson_bracket(const GridFunction& f, const GridFunction& g, const DeviceFunction& eta) {
  require_same_grid(f, g);
  return poisson_bracket(smear(g, eta), smear(f, eta));
}

HamiltonianField lift_X(const GridFunction& g) { return HamiltonianField(g); }

HamiltonianField lift_X_eta(const GridFunction& g, const DeviceFunction& eta) { return HamiltonianField(smear(g, eta)); }

double transformation_law_defect(const GridFunction& f, const GridFunction& g, double dtau, const GridFunction& psi,
                                 const std::vector<bool>& mask) {
  require_same_grid(f, g);
  require_same_grid(f, psi);
  const HamiltonianField x(g);
  const Eigen::VectorXcd back = x.rk4_step(psi.values, -dtau);
  const GridFunction lhs{f.grid, x.rk4_step(f.values.cwiseProduct(back), dtau)};
  const GridFunction rhs{f.grid, x.rk4_step(f.values, dtau).cwiseProduct(psi.values)};
  return max_defect(lhs, rhs, mask);
}

Operator Q_of(const Frame& frame, const GridFunction& f, const std::optional<DeviceFunction>& eta) {
  require_frame_grid(frame, f);
  const HamiltonianField x(representative(f, eta));
  return frame.compress([&](const Eigen::VectorXcd& v) { return x.apply(v); });
}

Operator M_compressed(const Frame& frame, const GridFunction& f, const std::optional<DeviceFunction>& eta) {
  require_frame_grid(frame, f);
  const Eigen::VectorXcd symbol = representative(f, eta).values;
  return frame.compress([&](const Eigen::VectorXcd& v) { return Eigen::VectorXcd(symbol.cwiseProduct(v)); });
}

double field_leakage(const Frame& frame, const GridFunction& h) {
  require_frame_grid(frame, h);
  const HamiltonianField x(h);
  const Eigen::MatrixXcd& b = frame.basis();
  const Eigen::VectorXd& w = frame.weights();
  double worst = 0.0;
  for (Eigen::Index n = 0; n < b.cols(); ++n) {
    const Eigen::VectorXcd image = x.apply(b.col(n));
    const Eigen::VectorXcd coeffs = b.adjoint() * w.cast<Complex>().cwiseProduct(image);
    const Eigen::VectorXcd residual = image - b * coeffs;
    worst = std::max(worst, std::sqrt(w.dot(residual.cwiseAbs2())));
  }
  return worst;
}

QCommutatorReport q_commutator_defect(const Frame& frame, const GridFunction& f, const GridFunction& g,
                                      const DeviceFunction& eta, double tolerance) {
  require_frame_grid(frame, f);
  require_same_grid(f, g);
  const GridFunction f_eta = smear(f, eta);
  const GridFunction g_eta = smear(g, eta);
  QCommutatorReport r;
  r.premise_defect = std::min(field_leakage(frame, f_eta), field_leakage(frame, g_eta));
  r.premise_holds = r.premise_defect <= r.premise_tolerance;

  const Operator qf = Q_of(frame, f_eta);
  const Operator qg = Q_of(frame, g_eta);
  const Operator mg = M_compressed(frame, g_eta);
  const GridFunction bracket = poisson_bracket(f_eta, g_eta);
  r.q_q = make_report("[Q(f),Q(g)] = Q({f,g})", commutator(qf, qg), Q_of(frame, bracket), tolerance);
  r.q_m = make_report("[Q(f),M(g)] = M({f,g})", commutator(qf, mg), M_compressed(frame, bracket), tolerance);
  return r;
}

CompatibilityDefect compatibility_defect(const Frame& frame, const DeviceFunction& eta, PhasePoint x,
                                         Eigen::Index sample_nodes) {
  if (eta.kind == DeviceKind::delta) throw PreconditionError("the delta device has no smooth density");
  const DeviceKernel k = device_kernel(eta, frame.grid()->manifold());
  const GridFunction eta_x = GridFunction::sample(frame.grid(), [&](PhasePoint y) { return k(x, y); });
  CompatibilityDefect out;
  out.commutator = field_leakage(frame, eta_x);

  // A(x, y) = sum_n (X E_n)(x) omega_{y, n}; the identity reads A + A^dag = 0.
  const HamiltonianField field(eta_x);
  const Eigen::MatrixXcd& e = frame.embedding();
  Eigen::MatrixXcd xe(e.rows(), e.cols());
  for (Eigen::Index n = 0; n < e.cols(); ++n) xe.col(n) = field.apply(e.col(n));
  const std::vector<bool> inside = frame.grid()->interior();
  std::vector<Eigen::Index> pool;
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    if (inside[static_cast<size_t>(i)]) pool.push_back(i);
  const Eigen::Index count = std::min<Eigen::Index>(sample_nodes, static_cast<Eigen::Index>(pool.size()));
  Eigen::MatrixXcd xs(count, e.cols());
  Eigen::MatrixXcd es(count, e.cols());
  for (Eigen::Index s = 0; s < count; ++s) {
    const Eigen::Index i = pool[static_cast<size_t>(s * static_cast<Eigen::Index>(pool.size()) / count)];
    xs.row(s) = xe.row(i);
    es.row(s) = e.row(i);
  }
  const Eigen::MatrixXcd a = xs * es.adjoint();
  out.kernel_residual = count > 0 ? (a + a.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  return out;
}

}  // namespace csq
