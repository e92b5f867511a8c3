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

#include "doctest.h"

#include <random>

#include "csq/quantize.hpp"
#include "oracles.hpp"

using namespace csq;

namespace {

struct PlaneSetup {
  GridPtr grid = build_plane_grid(7.0, 80, 80);
  Frame frame{CoherentStateSystem::plane(16), grid};
};

const PlaneSetup& plane16() {
  static const PlaneSetup setup;
  return setup;
}

Complex z_of(PhasePoint x) { return plane_z(x); }

Eigen::MatrixXcd moment_oracle(int dim, int k, int l) {
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = oracle::antinormal_moment(k, l, r, c);
  return m;
}

}  // namespace

TEST_CASE("smearing") {
  const GridPtr grid = build_plane_grid(7.0, 80, 80);
  const GridFunction f = GridFunction::sample(grid, [](PhasePoint x) { return std::norm(plane_z(x)); });
  CHECK(max_defect(smear(f, DeviceFunction::delta()), f) == 0.0);

  const double sigma = 0.5;
  const auto eta = DeviceFunction::gaussian(sigma);
  const GridFunction one = smear(GridFunction::constant(grid, 1.0), eta);
  const auto inside = grid->interior(0.6);
  CHECK(max_defect(one, GridFunction::constant(grid, 1.0), inside) <= 1e-6);
  const GridFunction moved = GridFunction::sample(grid, [&](PhasePoint x) { return std::norm(plane_z(x)) + 2 * sigma * sigma; });
  CHECK(max_defect(smear(f, eta), moved, inside) <= 1e-6);
  CHECK(std::abs(smear_at(f, eta, plane_point(Complex(0.5, 1.0))) - (1.25 + 2 * sigma * sigma)) <= 1e-6);

  const Spin s = Spin::from_twice(6);
  const GridPtr sg = build_sphere_grid(s, 40, 80);
  const GridFunction sone = smear(GridFunction::constant(sg, 1.0), DeviceFunction::gaussian(0.3));
  CHECK((sone.values.array() - 1.0).abs().maxCoeff() <= 1e-6);
  const GridFunction done = smear(GridFunction::constant(sg, 1.0), DeviceFunction::dipole(s, 0.4));
  CHECK((done.values.array() - 1.0).abs().maxCoeff() <= 1e-10);

  CHECK_THROWS_AS(device_kernel(DeviceFunction::delta(), grid->manifold()), PreconditionError);
  CHECK_THROWS_AS(smear(f, DeviceFunction::s_ordered(0.0)), PreconditionError);
}

TEST_CASE("multiplication representation") {
  const GridPtr grid = build_plane_grid(5.0, 20, 20);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  GridFunction f = GridFunction::constant(grid, 0.0), g = f, psi = f;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    f.values(i) = Complex(u(rng), u(rng));
    g.values(i) = Complex(u(rng), u(rng));
    psi.values(i) = Complex(u(rng), u(rng));
  }
  CHECK(max_defect(pi_of_f(GridFunction::constant(grid, 1.0))(psi), psi) == 0.0);
  CHECK(max_defect(pi_of_f(f * g)(psi), (pi_of_f(f) * pi_of_f(g))(psi)) == 0.0);
  CHECK(max_defect(pi_of_f(f)(pi_of_f(g)(psi)), pi_of_f(f * g)(psi)) <= 1e-14);
  const auto eta = DeviceFunction::gaussian(0.4);
  CHECK(max_defect(pi_eta(f, DeviceFunction::delta())(psi), pi_of_f(f)(psi)) == 0.0);
  CHECK(max_defect(pi_eta(f, eta)(psi), (smear(f, eta) * psi)) == 0.0);

  // Translation covariance of the smeared observable.
  const PointFunction bump = [](PhasePoint x) { return std::exp(-std::norm(plane_z(x) - 0.3)); };
  const GridPtr fine = build_plane_grid(7.0, 60, 60);
  CHECK(covariance_defect_pi_eta(fine, bump, eta, GroupElement::translation(Complex(0.5, -0.2)), fine->interior(0.5)) <= 1e-6);
  CHECK(covariance_defect_pi_eta(fine, bump, DeviceFunction::delta(), GroupElement::translation(0.0), {}) == 0.0);
}

TEST_CASE("stochastic quantization reproduces antinormal moments") {
  const auto& [grid, frame] = plane16();
  const Operator one = quantize_stochastic(frame, GridFunction::constant(grid, 1.0));
  CHECK(defect_norm(one, Operator::Identity(16, 16), 8) <= 1e-6);
  const Operator n1 = quantize_stochastic(frame, GridFunction::sample(grid, [](PhasePoint x) { return std::norm(z_of(x)); }));
  CHECK(defect_norm(n1, moment_oracle(16, 1, 1), 8) <= 1e-6);
  for (int n = 0; n < 8; ++n) CHECK(std::abs(n1(n, n) - oracle::antinormal_number_diagonal(n)) <= 1e-6);
  const Operator a = quantize_stochastic(frame, GridFunction::sample(grid, z_of));
  CHECK(defect_norm(a, oracle::lowering(16), 8) <= 1e-6);
  const Operator z2zb = quantize_stochastic(frame, GridFunction::sample(grid, [](PhasePoint x) {
    return std::pow(z_of(x), 2) * std::conj(z_of(x));
  }));
  CHECK(defect_norm(z2zb, moment_oracle(16, 2, 1), 8) <= 1e-6);

  // Linearity, hermiticity and positivity.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  GridFunction f = GridFunction::constant(grid, 0.0), g = f;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    f.values(i) = u(rng);
    g.values(i) = u(rng);
  }
  const Operator mf = quantize_stochastic(frame, f);
  CHECK(hermiticity_defect(mf) <= 1e-10);
  CHECK(smallest_eigenvalue(mf) >= -1e-8);
  GridFunction combo = f;
  combo.values = 2.0 * f.values - Complex(0, 3) * g.values;
  CHECK(defect_norm(quantize_stochastic(frame, combo),
                    Operator(2.0 * mf - Complex(0, 3) * quantize_stochastic(frame, g))) <= 1e-12);
  CHECK(defect_norm(quantize_eta(frame, f, DeviceFunction::delta()), mf) == 0.0);
}

TEST_CASE("device-conditioned quantization") {
  const auto& [grid, frame] = plane16();
  const Operator one = quantize_eta(frame, GridFunction::constant(grid, 1.0), DeviceFunction::gaussian(0.4));
  CHECK(defect_norm(one, Operator::Identity(16, 16), 6) <= 1e-6);
  CHECK(hermiticity_defect(one) <= 1e-10);

  const GridFunction n = GridFunction::sample(grid, [](PhasePoint x) { return std::norm(z_of(x)); });
  const Eigen::MatrixXcd a = oracle::lowering(16);
  const Eigen::MatrixXcd ad = a.adjoint();
  // Products formed at dimension 16 are exact on the first 15 levels.
  const Eigen::MatrixXcd sym = (a * ad + ad * a) / 2.0;
  const Eigen::MatrixXcd normal = ad * a;
  const Operator s_minus = quantize_eta(frame, n, DeviceFunction::s_ordered(-1.0));
  const Operator s_zero = quantize_eta(frame, n, DeviceFunction::s_ordered(0.0));
  const Operator s_plus = quantize_eta(frame, n, DeviceFunction::s_ordered(1.0));
  CHECK(defect_norm(s_minus, Operator(a * ad), 8) <= 1e-5);
  CHECK(defect_norm(s_zero, sym, 8) <= 1e-6);
  CHECK(defect_norm(s_plus, normal, 8) <= 1e-5);
  for (int k = 0; k < 8; ++k) {
    CHECK(std::abs(s_minus(k, k) - (k + 1.0)) <= 1e-5);
    CHECK(std::abs(s_zero(k, k) - (k + 0.5)) <= 1e-5);
    CHECK(std::abs(s_plus(k, k) - double(k)) <= 1e-5);
  }
  // Linear observables do not depend on the ordering.
  const GridFunction zf = GridFunction::sample(grid, z_of);
  CHECK(defect_norm(quantize_s_ordered(frame, zf, 0.5), a, 8) <= 1e-6);
  const Spin spin = Spin::from_twice(2);
  const Frame sphere(CoherentStateSystem::sphere(spin), build_sphere_grid(spin, 4, 8));
  CHECK_THROWS_AS(quantize_s_ordered(sphere, GridFunction::constant(sphere.grid(), 1.0), 0.0), PreconditionError);
}

TEST_CASE("Wigner operator") {
  // Literal double integral against the parity route at small dimension.
  const GridPtr alpha_grid = build_plane_grid(10.0, 140, 140);
  for (const Complex z : {Complex(0.0), Complex(0.4, -0.3), Complex(-0.8, 0.6)}) {
    const Operator fast = wigner_operator(8, plane_point(z));
    const Operator literal = wigner_operator_literal(8, plane_point(z), *alpha_grid);
    CAPTURE(z);
    CHECK(defect_norm(literal, fast, 6) <= 1e-4);
    CHECK(hermiticity_defect(literal) <= 1e-6);
    CHECK(hermiticity_defect(fast) <= 1e-12);
  }
  const Operator w0 = wigner_operator_literal(8, plane_point(0.0), *alpha_grid);
  CHECK(std::abs(w0(0, 0) - 2.0) <= 1e-4);
}

TEST_CASE("Wigner function") {
  const auto vac = DensityMatrix::pure(CoherentStateSystem::plane(12).fiducial());
  CHECK(std::abs(wigner_function(vac, plane_point(0.0)) - 2.0) <= 1e-5);
  const Complex z(0.6, 0.3);
  CHECK(std::abs(wigner_function(vac, plane_point(z)) - 2.0 * std::exp(-2.0 * std::norm(z))) <= 1e-10);
  const auto sys = CoherentStateSystem::plane(30);
  const Complex beta(1.0, -0.5);
  CHECK(std::abs(wigner_function(DensityMatrix::pure(sys.vector(plane_point(beta))), plane_point(beta)) - 2.0) <= 1e-4);

  std::mt19937_64 rng(8);
  const auto rho = DensityMatrix::from_operator(oracle::random_density(16, rng, 8));
  const GridPtr grid = build_plane_grid(7.0, 80, 80);
  double total = 0.0;
  for (Eigen::Index i = 0; i < grid->size(); ++i)
    total += grid->weights()(i) * wigner_function(rho, grid->nodes()[static_cast<size_t>(i)]);
  CHECK(std::abs(total - 1.0) <= 1e-4);
  const Operator w = wigner_operator(16, plane_point(Complex(0.2, 0.1)));
  CHECK(std::abs((rho.op() * w).trace().imag()) <= 1e-8);
}

TEST_CASE("Weyl quantization") {
  const auto& [grid, frame] = plane16();
  const Eigen::MatrixXcd a = oracle::lowering(16);
  const Eigen::MatrixXcd ad = a.adjoint();
  CHECK(defect_norm(quantize_weyl(frame, GridFunction::constant(grid, 1.0)), Operator::Identity(16, 16), 8) <= 1e-5);
  const Operator n = quantize_weyl(frame, GridFunction::sample(grid, [](PhasePoint x) { return std::norm(z_of(x)); }));
  CHECK(defect_norm(n, Operator((a * ad + ad * a) / 2.0), 8) <= 1e-5);
  const Operator q = quantize_weyl(frame, GridFunction::sample(grid, [](PhasePoint x) { return Complex(x.c1); }));
  CHECK(defect_norm(q, Operator((a + ad) / std::sqrt(2.0)), 8) <= 1e-5);
  CHECK(hermiticity_defect(q) <= 1e-10);

  // A nonnegative symbol narrower than the vacuum has a non-positive Weyl image.
  const GridFunction narrow = GridFunction::sample(grid, [](PhasePoint x) { return std::exp(-8.0 * std::norm(z_of(x))); });
  const Operator mw = quantize_weyl(frame, narrow);
  CHECK(smallest_eigenvalue(mw) < -1e-3);
  CHECK(smallest_eigenvalue(quantize_stochastic(frame, narrow)) >= -1e-8);
}

TEST_CASE("covariance of stochastic quantization") {
  const auto& [grid, frame] = plane16();
  const PointFunction bump = [](PhasePoint x) { return std::exp(-0.5 * std::norm(plane_z(x) - Complex(0.2, 0.1))); };
  CHECK(covariance_defect_quantize(frame, bump, GroupElement::translation(0.0), 8) == 0.0);
  CHECK(covariance_defect_quantize(frame, bump, GroupElement::translation(0.5), 8) <= 1e-5);
  CHECK(covariance_defect_quantize(frame, bump, GroupElement::translation(Complex(-0.3, 0.4)), 8) <= 1e-5);

  const Spin s = Spin::from_twice(4);
  const Frame sphere(CoherentStateSystem::sphere(s), build_sphere_grid(s, 10, 20));
  const PointFunction poly = [](PhasePoint x) {
    const double c = std::cos(x.c1), sn = std::sin(x.c1);
    return Complex(c * c + 0.3 * sn * std::cos(x.c2), 0.5 * sn * std::sin(x.c2) * c);
  };
  for (const auto& rot : {GroupElement::rotation(0.0, 0.0), GroupElement::rotation(0.9, 2.1), GroupElement::rotation(2.5, -1.0)})
    CHECK(covariance_defect_quantize(sphere, poly, rot) <= 1e-10);
}

TEST_CASE("compression identity") {
  const auto& [grid, frame] = plane16();
  const GridFunction f = GridFunction::sample(grid, [](PhasePoint x) { return std::exp(-0.3 * std::norm(plane_z(x))) * x.c1; });
  CHECK(compression_defect(frame, f) <= 1e-5);
  const Spin s = Spin::from_twice(3);
  const Frame sphere(CoherentStateSystem::sphere(s), build_sphere_grid(s, 8, 16));
  CHECK(compression_defect(sphere, GridFunction::sample(sphere.grid(), [](PhasePoint x) { return std::cos(x.c1); })) <= 1e-10);
}

TEST_CASE("labels") {
  CHECK(OrderingRule::antinormal().label() == "antinormal");
  CHECK(OrderingRule::weyl().label() == "weyl");
  CHECK(OrderingRule::normal().label() == "normal");
  CHECK(DeviceFunction::delta().label() == "delta");
}
