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

#include "csq/coherent.hpp"
#include "oracles.hpp"

using namespace csq;

namespace {

double roi_defect(const Frame& frame, std::optional<Eigen::Index> block) {
  const Eigen::Index n = frame.system().dim();
  return defect_norm(resolution_of_identity(frame), Operator::Identity(n, n), block);
}

GridFunction random_grid_function(const GridPtr& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridFunction f = GridFunction::constant(grid, 0.0);
  for (Eigen::Index i = 0; i < f.size(); ++i) f.values(i) = Complex(u(rng), u(rng));
  return f;
}

Complex inner(const GridFunction& a, const GridFunction& b) {
  return (a.grid->weights().cast<Complex>().array() * a.values.conjugate().array() * b.values.array()).sum();
}

}  // namespace

TEST_CASE("plane coherent vectors") {
  const auto sys = CoherentStateSystem::plane(40);
  const StateVector v0 = sys.vector(plane_point(0.0));
  CHECK(defect_norm(Operator(v0), Operator(sys.fiducial())) == 0.0);
  const StateVector v1 = sys.vector(plane_point(1.0));
  const StateVector oracle_vec = displacement(40, Complex(1.0)).col(0);
  CHECK(std::abs(v1(2) - oracle_vec(2)) < 1e-10);
  CHECK(std::abs(v1(2) - std::exp(-0.5) / std::sqrt(2.0)) < 1e-10);
  CHECK(std::abs(sys.kernel(plane_point(1.0), plane_point(1.0)) - 1.0) < 1e-10);
  CHECK(std::abs(std::norm(sys.kernel(plane_point(0.0), plane_point(1.0))) - std::exp(-1.0)) < 1e-10);

  // Closed form exp(conj(x) y - |x|^2/2 - |y|^2/2).
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 10; ++k) {
    const Complex x(u(rng), u(rng)), y(u(rng), u(rng));
    const Complex k_xy = sys.kernel(plane_point(x), plane_point(y));
    CHECK(std::abs(k_xy - std::exp(std::conj(x) * y - 0.5 * std::norm(x) - 0.5 * std::norm(y))) < 1e-10);
    CHECK(std::abs(k_xy - std::conj(sys.kernel(plane_point(y), plane_point(x)))) < 1e-12);
  }
}

TEST_CASE("sphere coherent vectors match the rotated highest weight") {
  for (int two_j : {1, 2, 5, 10}) {
    const Spin s = Spin::from_twice(two_j);
    const auto sys = CoherentStateSystem::sphere(s);
    CHECK(defect_norm(Operator(sys.vector({0.0, 0.0})), Operator(sys.fiducial())) < 1e-15);
    for (const PhasePoint x : {PhasePoint{0.4, 1.0}, PhasePoint{2.9, 5.5}, PhasePoint{M_PI / 2, 0.0}}) {
      const StateVector rotated = rotation(s, x.c1, x.c2) * sys.fiducial();
      CAPTURE(two_j);
      CHECK((sys.vector(x) - rotated).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(sys.vector(x).norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("coherent projectors") {
  const auto sys = CoherentStateSystem::plane(20);
  const Operator m = sys.projector(plane_point(Complex(0.3, -0.2)));
  CHECK(defect_norm(Operator(m * m), m) < 1e-12);
  CHECK(std::abs(m.trace() - 1.0) < 1e-10);
  CHECK(hermiticity_defect(m) == 0.0);

  // Covariance under displacement, in a larger space to keep the block exact.
  const auto big = CoherentStateSystem::plane(60);
  const Complex z(0.4, 0.1), alpha(-0.3, 0.5);
  const Operator lhs = conjugate_by(displacement(60, alpha), big.projector(plane_point(z)));
  const Operator rhs = big.projector(plane_point(z + alpha));
  CHECK(defect_norm(lhs, rhs, 20) <= 1e-7);
}

TEST_CASE("group actions move points and states together") {
  const GroupElement rot = GroupElement::rotation(0.7, 1.9);
  const PhasePoint x{1.1, 0.3};
  const PhasePoint back = rot.act_inverse(rot.act(x));
  CHECK(std::abs(back.c1 - x.c1) < 1e-12);
  CHECK(std::abs(back.c2 - x.c2) < 1e-12);
  const auto sys = CoherentStateSystem::sphere(Spin::from_twice(3));
  const StateVector moved = sys.group_action(rot) * sys.vector(x);
  CHECK(std::abs(std::abs(moved.dot(sys.vector(rot.act(x)))) - 1.0) < 1e-12);
  CHECK_THROWS(sys.group_action(GroupElement::translation(1.0)));
}

TEST_CASE("resolution of identity on the sphere is exact") {
  for (double j : {0.5, 1.0, 2.0, 5.0}) {
    const Spin s = Spin::from_value(j);
    const Frame frame(CoherentStateSystem::sphere(s), build_sphere_grid(s, s.twice() + 2, 2 * s.twice() + 2));
    CAPTURE(j);
    CHECK(roi_defect(frame, std::nullopt) <= 1e-12);
  }
}

TEST_CASE("resolution of identity on the plane") {
  const Frame frame(CoherentStateSystem::plane(12), build_plane_grid(6.0, 80, 80));
  CHECK(roi_defect(frame, 8) <= 1e-6);
  const Frame small(CoherentStateSystem::plane(12), build_plane_grid(1.0, 80, 80));
  CHECK(roi_defect(small, 8) > 0.1);
  CHECK(small.gram_condition() > 1e8);
  CHECK_THROWS(small.basis());
  // Larger cutoff and finer grid shrink the defect.
  const Frame coarse(CoherentStateSystem::plane(12), build_plane_grid(4.0, 30, 30));
  const Frame finer(CoherentStateSystem::plane(12), build_plane_grid(5.0, 50, 50));
  CHECK(roi_defect(finer, 8) < roi_defect(coarse, 8));
  CHECK(roi_defect(frame, 8) < roi_defect(finer, 8));
}

TEST_CASE("reproducing kernel and projector") {
  std::mt19937_64 rng(21);
  struct Case {
    Frame frame;
    double tol;
  };
  const Spin s = Spin::from_twice(4);
  std::vector<Case> cases;
  cases.push_back({Frame(CoherentStateSystem::plane(12), build_plane_grid(6.0, 80, 80)), 1e-6});
  cases.push_back({Frame(CoherentStateSystem::sphere(s), build_sphere_grid(s, 8, 16)), 1e-10});
  for (const auto& [frame, tol] : cases) {
    const GridPtr& grid = frame.grid();
    const PhasePoint y0 = grid->kind() == ManifoldKind::plane ? plane_point(Complex(0.5, -0.3)) : PhasePoint{1.0, 2.0};
    const auto& sys = frame.system();
    const GridFunction column = GridFunction::sample(grid, [&](PhasePoint x) { return sys.kernel(x, y0); });
    CHECK(max_defect(apply_P0(frame, column), column) <= tol);
    CHECK(max_defect(embed_state(frame, sys.vector(y0)), column) < 1e-12);

    const GridFunction psi = random_grid_function(grid, rng);
    const GridFunction p1 = apply_P0(frame, psi);
    const GridFunction p2 = apply_P0(frame, p1);
    const double scale = p1.values.cwiseAbs().maxCoeff();
    CHECK(max_defect(p2, p1) <= tol * std::max(1.0, scale));
    const GridFunction psi2 = random_grid_function(grid, rng);
    CHECK(std::abs(inner(psi, apply_P0(frame, psi2)) - inner(apply_P0(frame, psi), psi2)) <= 1e-8);

    // Reproduction of embedded states and norm preservation.
    StateVector v = StateVector::Zero(sys.dim());
    for (Eigen::Index n = 0; n < std::min<Eigen::Index>(sys.dim(), 6); ++n) v(n) = Complex(0.3 * n - 0.5, 0.2);
    const GridFunction ev = embed_state(frame, v);
    CHECK(max_defect(apply_P0(frame, ev), ev) <= tol);
    CHECK(std::abs(inner(ev, ev).real() - v.squaredNorm()) <= tol);

    CHECK(frame.kernel_min_weighted_eigenvalue() >= -1e-8);
    if (grid->kind() == ManifoldKind::sphere) CHECK((frame.kernel_diagonal().array() - 1.0).abs().maxCoeff() <= 1e-10);
  }
  CHECK_THROWS_AS(embed_state(cases[0].frame, StateVector::Zero(3)), DimensionMismatch);
  CHECK_THROWS_AS(apply_P0(cases[0].frame, GridFunction::constant(cases[1].frame.grid(), 1.0)), GridMismatch);
}

TEST_CASE("kernel matrix on a small sphere grid") {
  const Spin s = Spin::from_twice(2);
  const Frame frame(CoherentStateSystem::sphere(s), build_sphere_grid(s, 4, 8));
  const Eigen::MatrixXcd k = frame.kernel_matrix();
  CHECK(hermiticity_defect(k) < 1e-12);
  CHECK(std::abs(k(3, 7) - frame.kernel(3, 7)) < 1e-14);
  CHECK(std::abs(k(3, 7) - frame.system().kernel(frame.grid()->nodes()[3], frame.grid()->nodes()[7])) < 1e-14);
}

TEST_CASE("Husimi density") {
  const Frame frame(CoherentStateSystem::plane(16), build_plane_grid(7.0, 80, 80));
  const auto& sys = frame.system();
  const PhasePoint x = plane_point(Complex(0.7, 0.2));
  CHECK(std::abs(husimi(sys, DensityMatrix::pure(sys.vector(x)), x) - 1.0) < 1e-10);
  const DensityMatrix vac = DensityMatrix::pure(sys.fiducial());
  CHECK(std::abs(husimi(sys, vac, x) - std::exp(-std::norm(plane_z(x)))) < 1e-10);
  std::mt19937_64 rng(9);
  const DensityMatrix rho = DensityMatrix::from_operator(oracle::random_density(16, rng, 8));
  const Eigen::VectorXd q = husimi_on_grid(frame, rho);
  CHECK(std::abs(frame.weights().dot(q) - 1.0) <= 1e-6);
  CHECK(q.minCoeff() >= 0.0);
  CHECK(q.maxCoeff() <= 1.0 + 1e-10);
  CHECK(std::abs(q(17) - husimi(sys, rho, frame.grid()->nodes()[17])) < 1e-12);
  CHECK_THROWS_AS(husimi(sys, DensityMatrix::pure(StateVector::Ones(3)), x), DimensionMismatch);
}

TEST_CASE("corrupted kernel fixture breaks reproduction") {
  const Spin s = Spin::from_twice(2);
  const Frame frame(CoherentStateSystem::sphere(s), build_sphere_grid(s, 4, 8));
  const Frame bad = frame.with_kernel_scale(1.05);
  const GridFunction ev = embed_state(bad, frame.system().vector({0.3, 0.3}));
  CHECK(max_defect(apply_P0(bad, ev), ev) > 1e-3);
}
