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

#include <cmath>

#include "csq/phase_space.hpp"
#include "oracles.hpp"

using namespace csq;

namespace {

Complex q_of(PhasePoint x) { return x.c1; }
Complex p_of(PhasePoint x) { return x.c2; }

GridFunction blob(const GridPtr& grid, double q0, double p0, double width) {
  GridFunction w = GridFunction::sample(grid, [=](PhasePoint x) {
    const double dq = x.c1 - q0, dp = x.c2 - p0;
    return Complex(std::exp(-(dq * dq + dp * dp) / (2 * width * width)), 0.0);
  });
  w.values /= w.integrate().real();
  return w;
}

}  // namespace

TEST_CASE("plane grid quadrature") {
  const GridPtr grid = build_plane_grid(6.0, 80, 80);
  const auto vacuum = GridFunction::sample(grid, [](PhasePoint x) { return std::exp(-std::norm(plane_z(x))); });
  CHECK(std::abs(vacuum.integrate() - 1.0) < 1e-8);
  const auto moment = GridFunction::sample(grid, [](PhasePoint x) {
    const double r2 = std::norm(plane_z(x));
    return r2 * std::exp(-r2);
  });
  CHECK(std::abs(moment.integrate() - 1.0) < 1e-8);
  CHECK(grid->weights().sum() == doctest::Approx(36.0).epsilon(1e-12));
  CHECK(grid->weights().minCoeff() > 0.0);
  CHECK_THROWS(build_plane_grid(6.0, 4, 80));
  CHECK_THROWS(build_plane_grid(-1.0, 20, 20));
  CHECK_THROWS(build_plane_grid(6.0, 20, 21));
}

TEST_CASE("sphere grid quadrature") {
  for (int two_j : {1, 2, 4, 10}) {
    const Spin s = Spin::from_twice(two_j);
    const GridPtr grid = build_sphere_grid(s, two_j + 2, 2 * two_j + 2);
    const double dim = two_j + 1.0;
    CAPTURE(two_j);
    CHECK(std::abs(grid->weights().sum() - dim) < 1e-12);
    const auto c = GridFunction::sample(grid, [](PhasePoint x) { return std::cos(x.c1); });
    CHECK(std::abs(c.integrate()) < 1e-12);
    CHECK(std::abs((c * c).integrate() - dim / 3.0) < 1e-10);
  }
  CHECK_THROWS(build_sphere_grid(Spin::from_twice(4), 5, 20));
  CHECK_THROWS(build_sphere_grid(Spin::from_twice(4), 6, 8));
}

TEST_CASE("plane Poisson bracket") {
  const GridPtr grid = build_plane_grid(6.0, 120, 120);
  const auto inside = grid->interior();
  const auto q = GridFunction::sample(grid, q_of);
  const auto p = GridFunction::sample(grid, p_of);
  CHECK(max_defect(poisson_bracket(q, p), GridFunction::constant(grid, 1.0), inside) < 1e-10);
  CHECK(poisson_bracket(q, q).values.cwiseAbs().maxCoeff() == 0.0);
  const auto fourqp = GridFunction::sample(grid, [](PhasePoint x) { return 4.0 * x.c1 * x.c2; });
  CHECK(max_defect(poisson_bracket(q * q, p * p), fourqp, inside) <= 1e-4);
  CHECK_THROWS_AS(poisson_bracket(q, GridFunction::constant(build_plane_grid(6.0, 20, 20), 1.0)), GridMismatch);
}

TEST_CASE("bracket algebra on polynomials") {
  const GridPtr grid = build_plane_grid(4.0, 60, 60);
  const auto inside = grid->interior();
  const auto f = GridFunction::sample(grid, [](PhasePoint x) { return x.c1 * x.c1 * x.c2 + 0.5 * x.c1; });
  const auto g = GridFunction::sample(grid, [](PhasePoint x) { return x.c2 * x.c2 - x.c1 * x.c2; });
  const auto h = GridFunction::sample(grid, [](PhasePoint x) { return x.c1 * x.c1 * x.c1 - 2.0 * x.c2; });
  const auto fg = poisson_bracket(f, g);
  CHECK(max_defect(fg, Complex(-1.0) * poisson_bracket(g, f)) < 1e-12);
  const auto leibniz = poisson_bracket(f * g, h) - (f * poisson_bracket(g, h) + poisson_bracket(f, h) * g);
  CHECK(max_defect(leibniz, GridFunction::constant(grid, 0.0), inside) < 1e-8);
  const auto jacobi = poisson_bracket(poisson_bracket(f, g), h) + poisson_bracket(poisson_bracket(g, h), f) +
                      poisson_bracket(poisson_bracket(h, f), g);
  CHECK(max_defect(jacobi, GridFunction::constant(grid, 0.0), inside) < 1e-7);
}

TEST_CASE("sphere Poisson bracket of spin components") {
  const Spin s = Spin::from_twice(4);
  const GridPtr grid = build_sphere_grid(s, 40, 40);
  const double j = s.value();
  const auto sx = GridFunction::sample(grid, [j](PhasePoint x) { return j * std::sin(x.c1) * std::cos(x.c2); });
  const auto sy = GridFunction::sample(grid, [j](PhasePoint x) { return j * std::sin(x.c1) * std::sin(x.c2); });
  const auto sz = GridFunction::sample(grid, [j](PhasePoint x) { return j * std::cos(x.c1); });
  CHECK(max_defect(poisson_bracket(sx, sy), sz) < 1e-8);
  CHECK(max_defect(poisson_bracket(sy, sz), sx) < 1e-8);
  CHECK(max_defect(poisson_bracket(sz, sx), sy) < 1e-8);
}

TEST_CASE("Hamiltonian field") {
  const GridPtr grid = build_plane_grid(6.0, 80, 80);
  const auto inside = grid->interior();
  const auto q = GridFunction::sample(grid, q_of);
  const auto g = GridFunction::sample(grid, [](PhasePoint x) { return 0.5 * (x.c1 * x.c1 + x.c2 * x.c2); });
  const auto minus_p = GridFunction::sample(grid, [](PhasePoint x) { return -x.c2; });
  CHECK(max_defect(hamiltonian_field_apply(g, q), minus_p, inside) <= 1e-4);
  CHECK(hamiltonian_field_apply(GridFunction::constant(grid, 3.0), q).values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(max_defect(hamiltonian_field_apply(g, g), GridFunction::constant(grid, 0.0), inside) < 1e-10);
}

TEST_CASE("divergence of Hamiltonian fields") {
  auto smooth = [](PhasePoint x) {
    return std::exp(-0.25 * (x.c1 * x.c1 + x.c2 * x.c2)) * (x.c1 + x.c2 * x.c2 + 0.3 * x.c1 * x.c2);
  };
  const GridPtr fine = build_plane_grid(6.0, 120, 120);
  CHECK(divergence_defect(GridFunction::sample(fine, smooth)) <= 1e-6);
  // Zero up to the round-off of composing two derivative matrices.
  CHECK(divergence_defect(GridFunction::sample(fine, [](PhasePoint x) { return 2.0 * x.c1 - x.c2; })) < 1e-8);

  // Observed order under refinement of a low-order stencil.
  const GridPtr coarse3 = build_plane_grid(6.0, 24, 48, 3);
  const GridPtr fine3 = build_plane_grid(6.0, 48, 48, 3);
  const double e1 = divergence_defect(GridFunction::sample(coarse3, smooth));
  const double e2 = divergence_defect(GridFunction::sample(fine3, smooth));
  CHECK(std::log2(e1 / e2) >= 1.8);

  const Spin s = Spin::from_twice(6);
  const auto sphere = GridFunction::sample(build_sphere_grid(s, 32, 32), [](PhasePoint x) {
    return std::cos(x.c1) + std::sin(x.c1) * std::sin(x.c1) * std::cos(2 * x.c2);
  });
  CHECK(divergence_defect(sphere) < 1e-8);
}

TEST_CASE("Liouville flow of a harmonic oscillator") {
  const GridPtr grid = build_plane_grid(6.0, 64, 96);
  const auto g = GridFunction::sample(grid, [](PhasePoint x) { return 0.5 * (x.c1 * x.c1 + x.c2 * x.c2); });
  const double q0 = 1.5, p0 = 0.5;
  GridFunction w = blob(grid, q0, p0, 0.5);
  const auto w0 = w;
  CHECK(max_defect(liouville_step(w, GridFunction::constant(grid, 2.0), 0.05), w) < 1e-10);

  const int steps = 100;
  const double dtau = 0.5 * M_PI / steps;
  for (int k = 0; k < steps; ++k) w = liouville_step(w, g, dtau);
  CHECK(std::abs(w.integrate() - 1.0) <= 1e-6);
  const auto q = GridFunction::sample(grid, q_of);
  const auto p = GridFunction::sample(grid, p_of);
  CHECK(std::abs((w * q).integrate() - p0) <= 1e-3);
  CHECK(std::abs((w * p).integrate() + q0) <= 1e-3);
}

TEST_CASE("classical Schrodinger step reproduces Liouville for the density") {
  const GridPtr grid = build_plane_grid(6.0, 64, 96);
  const auto g = GridFunction::sample(grid, [](PhasePoint x) {
    const double r2 = x.c1 * x.c1 + x.c2 * x.c2;
    return 0.5 * r2 + 0.2 * x.c1 * x.c1 * std::exp(-0.25 * r2);
  });
  GridFunction psi = GridFunction::sample(grid, [](PhasePoint x) {
    const double dq = x.c1 - 1.0, dp = x.c2 + 0.5;
    return std::exp(-(dq * dq + dp * dp) / 2.0) * std::exp(Complex(0.0, 0.3 * x.c1));
  });
  psi.values /= std::sqrt(GridFunction{grid, psi.values.cwiseAbs2().cast<Complex>()}.integrate().real());
  CHECK(max_defect(classical_schrodinger_step(psi, GridFunction::constant(grid, 1.0), 0.1), psi) < 1e-10);
  const double dtau = 0.01;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const GridFunction density{grid, psi.values.cwiseAbs2().cast<Complex>()};
    const GridFunction next = classical_schrodinger_step(psi, g, dtau);
    const GridFunction squared{grid, next.values.cwiseAbs2().cast<Complex>()};
    worst = std::max(worst, max_defect(squared, liouville_step(density, g, dtau)));
    psi = next;
  }
  CHECK(worst <= 1e-5);
  const GridFunction density{grid, psi.values.cwiseAbs2().cast<Complex>()};
  CHECK(std::abs(density.integrate() - 1.0) <= 1e-6);
}

TEST_CASE("RK4 converges at fourth order in dtau") {
  const GridPtr grid = build_plane_grid(6.0, 48, 64);
  const auto g = GridFunction::sample(grid, [](PhasePoint x) { return 0.5 * (x.c1 * x.c1 + x.c2 * x.c2); });
  auto profile = [](PhasePoint y) {
    const double dq = y.c1 - 1.0, dp = y.c2;
    return Complex(std::exp(-(dq * dq + dp * dp) / (2 * 0.36)), 0.0);
  };
  const GridFunction w0 = GridFunction::sample(grid, profile);
  const double tau = 0.8;
  auto evolve = [&](int steps) {
    GridFunction w = w0;
    for (int k = 0; k < steps; ++k) w = liouville_step(w, g, tau / steps);
    return w;
  };
  // The harmonic flow is a rigid clockwise rotation: w(tau)(z) = w0(z e^{i tau}).
  const GridFunction exact_n = GridFunction::sample(
      grid, [&](PhasePoint x) { return profile(plane_point(plane_z(x) * std::exp(Complex(0.0, tau)))); });
  const double e1 = max_defect(evolve(20), exact_n);
  const double e2 = max_defect(evolve(40), exact_n);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("canonical flow of points") {
  const Manifold plane = Manifold::plane(6.0);
  ScalarField harmonic{[](PhasePoint x) { return 0.5 * (x.c1 * x.c1 + x.c2 * x.c2); },
                       [](PhasePoint x) { return std::array<double, 2>{x.c1, x.c2}; }};
  const PhasePoint x0{1.2, -0.4};
  const PhasePoint back = canonical_flow_point(plane, x0, harmonic, 2 * M_PI, 1e-3);
  CHECK(std::hypot(back.c1 - x0.c1, back.c2 - x0.c2) <= 1e-6);
  const PhasePoint quarter = canonical_flow_point(plane, x0, harmonic, 0.5 * M_PI, 1e-3);
  CHECK(std::abs(quarter.c1 - x0.c2) < 1e-9);
  CHECK(std::abs(quarter.c2 + x0.c1) < 1e-9);

  ScalarField anharmonic{[](PhasePoint x) { return 0.5 * (x.c1 * x.c1 + x.c2 * x.c2) + 0.1 * std::pow(x.c1, 4); }, {}};
  const PhasePoint x1 = canonical_flow_point(plane, x0, anharmonic, 3.0, 1e-3);
  CHECK(std::abs(anharmonic.value(x1) - anharmonic.value(x0)) <= 1e-8);

  ScalarField flat{[](PhasePoint) { return 4.0; }, {}};
  const PhasePoint still = canonical_flow_point(plane, x0, flat, 1.0, 0.1);
  CHECK(still.c1 == x0.c1);
  CHECK(still.c2 == x0.c2);

  ScalarField drift{[](PhasePoint x) { return x.c2; }, {}};
  CHECK_THROWS_AS(canonical_flow_point(plane, x0, drift, 20.0, 0.01), TrajectoryLeftDomain);

  // Precession about the z axis on the sphere: g = j cos(theta) gives d phi / d tau = +1.
  const Manifold sphere = Manifold::sphere(Spin::from_twice(4));
  ScalarField sz{[](PhasePoint x) { return 2.0 * std::cos(x.c1); }, {}};
  const PhasePoint y = canonical_flow_point(sphere, {1.0, 1.0}, sz, 0.5, 1e-3);
  CHECK(std::abs(y.c1 - 1.0) < 1e-9);
  CHECK(std::abs(y.c2 - 1.5) < 1e-9);
}

TEST_CASE("classical mean") {
  const GridPtr grid = build_plane_grid(6.0, 80, 80);
  const auto rho = GridFunction::sample(grid, [](PhasePoint x) { return std::exp(-std::norm(plane_z(x))); });
  const auto r2 = GridFunction::sample(grid, [](PhasePoint x) { return std::norm(plane_z(x)); });
  const auto one = GridFunction::constant(grid, 1.0);
  CHECK(std::abs(classical_mean(rho, one).value - 1.0) < 1e-8);
  CHECK(std::abs(classical_mean(rho, r2).value - 1.0) <= 1e-6);
  CHECK_FALSE(classical_mean(rho, r2).normalization_warning);
  const auto sum = classical_mean(rho, r2 + Complex(2.0) * one).value;
  CHECK(std::abs(sum - (classical_mean(rho, r2).value + 2.0 * classical_mean(rho, one).value)) < 1e-12);
  CHECK(classical_mean(Complex(2.0) * rho, one).normalization_warning);
}
