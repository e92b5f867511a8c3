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

#include "csq/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <iomanip>
#include <sstream>

namespace csq {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

using RowMajorC = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ExtendedNode {
  double x;
  Eigen::Index row;
  bool half_turn;
};

Eigen::MatrixXd periodic_spectral_matrix(Eigen::Index n) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  const double h = 2.0 * M_PI / static_cast<double>(n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      if (j == k) continue;
      const Eigen::Index diff = j - k;
      const double sign = (std::abs(diff) % 2 == 0) ? 1.0 : -1.0;
      d(j, k) = 0.5 * sign / std::tan(0.5 * static_cast<double>(diff) * h);
    }
  return d;
}

}  // namespace

Complex plane_z(PhasePoint x) { return Complex(x.c1, x.c2) / kSqrt2; }

PhasePoint plane_point(Complex z) { return {kSqrt2 * z.real(), kSqrt2 * z.imag()}; }

Eigen::Vector3d sphere_direction(PhasePoint x) {
  return {std::sin(x.c1) * std::cos(x.c2), std::sin(x.c1) * std::sin(x.c2), std::cos(x.c1)};
}

PhasePoint sphere_point(const Eigen::Vector3d& direction) {
  const Eigen::Vector3d n = direction.normalized();
  const double theta = std::acos(std::clamp(n.z(), -1.0, 1.0));
  double phi = std::atan2(n.y(), n.x());
  if (phi < 0) phi += 2.0 * M_PI;
  return {theta, phi};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k - 1, k) = b;
    jacobi(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  Eigen::VectorXd nodes = solver.eigenvalues();
  Eigen::VectorXd weights = 2.0 * solver.eigenvectors().row(0).transpose().array().square();
  // Symmetrize against eigen-solver round-off.
  for (int k = 0; k < n / 2; ++k) {
    const double x = 0.5 * (nodes(n - 1 - k) - nodes(k));
    const double w = 0.5 * (weights(k) + weights(n - 1 - k));
    nodes(k) = -x;
    nodes(n - 1 - k) = x;
    weights(k) = w;
    weights(n - 1 - k) = w;
  }
  if (n % 2 == 1) nodes(n / 2) = 0.0;
  weights *= 2.0 / weights.sum();
  return {nodes, weights};
}

Eigen::VectorXd fornberg_first_derivative(double x0, const Eigen::VectorXd& xs) {
  const Eigen::Index n = xs.size();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, 2);
  c(0, 0) = 1.0;
  double c1 = 1.0;
  double c4 = xs(0) - x0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const Eigen::Index mn = std::min<Eigen::Index>(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs(i) - x0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double c3 = xs(i) - xs(j);
      c2 *= c3;
      if (j == i - 1) {
        for (Eigen::Index k = mn; k >= 1; --k)
          c(i, k) = c1 * (static_cast<double>(k) * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (Eigen::Index k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - static_cast<double>(k) * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c.col(1);
}

QuadratureGrid::QuadratureGrid(Manifold manifold, Eigen::VectorXd coord1, Eigen::VectorXd weight1, int n2,
                               int stencil_width)
    : manifold_(manifold), coord1_(std::move(coord1)), n2_(n2) {
  const Eigen::Index n1 = coord1_.size();
  const bool plane = manifold_.kind == ManifoldKind::plane;
  const double dangle = 2.0 * M_PI / static_cast<double>(n2_);

  nodes_.reserve(static_cast<size_t>(n1 * n2_));
  weights_.resize(n1 * n2_);
  omega_inv_.resize(n1 * n2_);
  for (Eigen::Index a = 0; a < n1; ++a)
    for (Eigen::Index b = 0; b < n2_; ++b) {
      const double ang = angle(b);
      const Eigen::Index i = index(a, b);
      if (plane) {
        nodes_.push_back(plane_point(std::polar(coord1_(a), ang)));
        weights_(i) = weight1(a) * coord1_(a) * dangle / M_PI;
        omega_inv_(i) = 1.0;
      } else {
        nodes_.push_back({coord1_(a), ang});
        weights_(i) = weight1(a) * dangle * (manifold_.two_j + 1) / (4.0 * M_PI);
        omega_inv_(i) = 1.0 / (manifold_.j() * std::sin(coord1_(a)));
      }
    }

  std::vector<ExtendedNode> extended;
  for (Eigen::Index a = 0; a < n1; ++a) {
    extended.push_back({coord1_(a), a, false});
    extended.push_back({-coord1_(a), a, true});
    if (!plane) extended.push_back({2.0 * M_PI - coord1_(a), a, true});
  }
  const auto width = static_cast<size_t>(std::min<Eigen::Index>(stencil_width, static_cast<Eigen::Index>(extended.size())));
  stencils_.resize(static_cast<size_t>(n1));
  for (Eigen::Index a = 0; a < n1; ++a) {
    const double x0 = coord1_(a);
    std::vector<ExtendedNode> nearest = extended;
    std::partial_sort(nearest.begin(), nearest.begin() + static_cast<std::ptrdiff_t>(width), nearest.end(),
                      [x0](const ExtendedNode& l, const ExtendedNode& r) { return std::abs(l.x - x0) < std::abs(r.x - x0); });
    Eigen::VectorXd xs(static_cast<Eigen::Index>(width));
    Stencil& s = stencils_[static_cast<size_t>(a)];
    for (size_t k = 0; k < width; ++k) {
      xs(static_cast<Eigen::Index>(k)) = nearest[k].x;
      s.rows.push_back(nearest[k].row);
      s.half_turn.push_back(nearest[k].half_turn);
    }
    s.weights = fornberg_first_derivative(x0, xs);
  }
  spectral_ = periodic_spectral_matrix(n2_);

  std::ostringstream os;
  if (plane)
    os << "plane:R=" << manifold_.radius;
  else
    os << "sphere:2j=" << manifold_.two_j;
  os << ':' << n1 << 'x' << n2_ << ":s" << stencil_width;
  // Distinguishes radial layouts with equal node counts.
  os << ":c" << std::setprecision(17) << coord1_.sum();
  id_ = os.str();
}

Eigen::VectorXcd QuadratureGrid::d1(const Eigen::VectorXcd& values) const {
  if (values.size() != size()) throw GridMismatch("grid function length does not match grid");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(size());
  const Eigen::Index half = n2_ / 2;
  for (Eigen::Index a = 0; a < n1(); ++a) {
    const Stencil& s = stencils_[static_cast<size_t>(a)];
    for (size_t k = 0; k < s.rows.size(); ++k) {
      const double w = s.weights(static_cast<Eigen::Index>(k));
      const Eigen::Index shift = s.half_turn[k] ? half : 0;
      // Differences against the centre value make constants exactly stationary.
      for (Eigen::Index b = 0; b < n2_; ++b)
        out(index(a, b)) += w * (values(index(s.rows[k], (b + shift) % n2_)) - values(index(a, b)));
    }
  }
  return out;
}

Eigen::VectorXcd QuadratureGrid::d2(const Eigen::VectorXcd& values) const {
  if (values.size() != size()) throw GridMismatch("grid function length does not match grid");
  Eigen::Map<const RowMajorC> in(values.data(), n1(), n2_);
  const RowMajorC shifted = in - in.col(0).replicate(1, n2_);
  RowMajorC out = shifted * spectral_.transpose().cast<Complex>();
  return Eigen::Map<const Eigen::VectorXcd>(out.data(), size());
}

std::array<Eigen::VectorXcd, 2> QuadratureGrid::gradient(const Eigen::VectorXcd& values) const {
  Eigen::VectorXcd g1 = d1(values);
  Eigen::VectorXcd g2 = d2(values);
  if (kind() == ManifoldKind::sphere) return {g1, g2};
  // Plane: d/d|z| and d/dangle to d/dq, d/dp with |(q, p)| = sqrt(2) |z|.
  Eigen::VectorXcd dq(size()), dp(size());
  for (Eigen::Index a = 0; a < n1(); ++a) {
    const double rho = kSqrt2 * coord1_(a);
    for (Eigen::Index b = 0; b < n2_; ++b) {
      const Eigen::Index i = index(a, b);
      const double c = std::cos(angle(b));
      const double s = std::sin(angle(b));
      const Complex dr = g1(i) / kSqrt2;
      dq(i) = c * dr - s * g2(i) / rho;
      dp(i) = s * dr + c * g2(i) / rho;
    }
  }
  return {dq, dp};
}

std::vector<bool> QuadratureGrid::interior(double fraction) const {
  std::vector<bool> mask(static_cast<size_t>(size()), true);
  if (kind() == ManifoldKind::sphere) return mask;
  for (Eigen::Index a = 0; a < n1(); ++a)
    for (Eigen::Index b = 0; b < n2_; ++b)
      mask[static_cast<size_t>(index(a, b))] = coord1_(a) <= fraction * manifold_.radius;
  return mask;
}

GridPtr build_plane_grid(double radius, int n_radial, int n_angular, int stencil_width) {
  if (!(radius > 0)) throw std::invalid_argument("plane grid radius must be positive");
  if (n_radial < 8 || n_angular < 8) throw std::invalid_argument("plane grid needs at least 8x8 nodes");
  if (n_angular % 2 != 0) throw std::invalid_argument("plane grid needs an even angular count");
  if (stencil_width < 3) throw std::invalid_argument("stencil width must be at least 3");
  auto [x, w] = gauss_legendre(n_radial);
  Eigen::VectorXd r = 0.5 * radius * (x.array() + 1.0);
  Eigen::VectorXd wr = 0.5 * radius * w;
  return std::make_shared<const QuadratureGrid>(Manifold::plane(radius), r, wr, n_angular, stencil_width);
}

GridPtr build_plane_grid(const std::vector<double>& radial_breaks, int n_per_panel, int n_angular, int stencil_width) {
  if (radial_breaks.empty()) throw std::invalid_argument("plane grid needs at least one radial break");
  if (n_per_panel < 2) throw std::invalid_argument("plane grid needs at least 2 nodes per panel");
  const auto panels = static_cast<int>(radial_breaks.size());
  if (n_per_panel * panels < 8 || n_angular < 8) throw std::invalid_argument("plane grid needs at least 8x8 nodes");
  if (n_angular % 2 != 0) throw std::invalid_argument("plane grid needs an even angular count");
  if (stencil_width < 3) throw std::invalid_argument("stencil width must be at least 3");
  auto [x, w] = gauss_legendre(n_per_panel);
  Eigen::VectorXd r(n_per_panel * panels), wr(n_per_panel * panels);
  double lo = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double hi = radial_breaks[static_cast<size_t>(k)];
    if (!(hi > lo)) throw std::invalid_argument("radial breaks must be positive and increasing");
    r.segment(k * n_per_panel, n_per_panel) = lo + 0.5 * (hi - lo) * (x.array() + 1.0);
    wr.segment(k * n_per_panel, n_per_panel) = 0.5 * (hi - lo) * w;
    lo = hi;
  }
  return std::make_shared<const QuadratureGrid>(Manifold::plane(lo), r, wr, n_angular, stencil_width);
}

GridPtr build_sphere_grid(Spin spin, int n_theta, int n_phi, int stencil_width) {
  if (n_theta < spin.twice() + 2) throw std::invalid_argument("sphere grid needs n_theta >= 2j + 2");
  if (n_phi < 2 * spin.twice() + 2) throw std::invalid_argument("sphere grid needs n_phi >= 4j + 2");
  if (n_phi % 2 != 0) throw std::invalid_argument("sphere grid needs an even phi count");
  if (stencil_width < 3) throw std::invalid_argument("stencil width must be at least 3");
  auto [x, w] = gauss_legendre(n_theta);
  // Ascending theta is descending cos(theta).
  Eigen::VectorXd theta(n_theta), wt(n_theta);
  for (int k = 0; k < n_theta; ++k) {
    theta(k) = std::acos(x(n_theta - 1 - k));
    wt(k) = w(n_theta - 1 - k);
  }
  return std::make_shared<const QuadratureGrid>(Manifold::sphere(spin), theta, wt, n_phi, stencil_width);
}

GridFunction GridFunction::sample(GridPtr grid, const std::function<Complex(PhasePoint)>& fn) {
  Eigen::VectorXcd v(grid->size());
  for (Eigen::Index i = 0; i < grid->size(); ++i) v(i) = fn(grid->nodes()[static_cast<size_t>(i)]);
  return {std::move(grid), std::move(v)};
}

GridFunction GridFunction::constant(GridPtr grid, Complex c) {
  const Eigen::Index n = grid->size();
  return {std::move(grid), Eigen::VectorXcd::Constant(n, c)};
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!a.grid || !b.grid || (a.grid != b.grid && a.grid->id() != b.grid->id()))
    throw GridMismatch("grid functions live on different grids");
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  return {a.grid, a.values + b.values};
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  return {a.grid, a.values - b.values};
}

GridFunction operator*(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  return {a.grid, a.values.cwiseProduct(b.values)};
}

GridFunction operator*(Complex s, const GridFunction& a) { return {a.grid, s * a.values}; }

double max_defect(const GridFunction& a, const GridFunction& b, const std::vector<bool>& mask) {
  require_same_grid(a, b);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!mask.empty() && !mask[static_cast<size_t>(i)]) continue;
    worst = std::max(worst, std::abs(a.values(i) - b.values(i)));
  }
  return worst;
}

GridFunction poisson_bracket(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  const auto df = f.grid->gradient(f.values);
  const auto dg = f.grid->gradient(g.values);
  const Eigen::VectorXcd bracket =
      f.grid->symplectic_inverse().cast<Complex>().cwiseProduct(df[0].cwiseProduct(dg[1]) - df[1].cwiseProduct(dg[0]));
  return {f.grid, bracket};
}

HamiltonianField::HamiltonianField(const GridFunction& g) : grid_(g.grid) {
  const auto dg = grid_->gradient(g.values);
  const Eigen::VectorXcd omega = grid_->symplectic_inverse().cast<Complex>();
  dg1_ = omega.cwiseProduct(dg[0]);
  dg2_ = omega.cwiseProduct(dg[1]);
}

Eigen::VectorXcd HamiltonianField::apply(const Eigen::VectorXcd& values) const {
  const auto df = grid_->gradient(values);
  return dg1_.cwiseProduct(df[1]) - dg2_.cwiseProduct(df[0]);
}

GridFunction HamiltonianField::operator()(const GridFunction& f) const {
  if (!f.grid || f.grid->id() != grid_->id()) throw GridMismatch("field and function live on different grids");
  return {grid_, apply(f.values)};
}

Eigen::VectorXcd HamiltonianField::rk4_step(const Eigen::VectorXcd& values, double dtau) const {
  const Eigen::VectorXcd k1 = apply(values);
  const Eigen::VectorXcd k2 = apply(values + 0.5 * dtau * k1);
  const Eigen::VectorXcd k3 = apply(values + 0.5 * dtau * k2);
  const Eigen::VectorXcd k4 = apply(values + dtau * k3);
  return values + (dtau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

GridFunction hamiltonian_field_apply(const GridFunction& g, const GridFunction& f) {
  require_same_grid(g, f);
  return HamiltonianField(g)(f);
}

double divergence_defect(const GridFunction& g, double interior_fraction) {
  const QuadratureGrid& grid = *g.grid;
  Eigen::VectorXcd div;
  if (grid.kind() == ManifoldKind::plane) {
    const auto dg = grid.gradient(g.values);
    div = grid.gradient(dg[1])[0] - grid.gradient(dg[0])[1];
  } else {
    // (1 / (j sin theta)) (d_theta d_phi g - d_phi d_theta g).
    div = grid.symplectic_inverse().cast<Complex>().cwiseProduct(grid.d1(grid.d2(g.values)) -
                                                                 grid.d2(grid.d1(g.values)));
  }
  const auto mask = grid.interior(interior_fraction);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < div.size(); ++i)
    if (mask[static_cast<size_t>(i)]) worst = std::max(worst, std::abs(div(i)));
  return worst;
}

GridFunction liouville_step(const GridFunction& w, const GridFunction& g, double dtau) {
  require_same_grid(w, g);
  return {w.grid, HamiltonianField(g).rk4_step(w.values, dtau)};
}

GridFunction classical_schrodinger_step(const GridFunction& psi, const GridFunction& g, double dtau) {
  require_same_grid(psi, g);
  return {psi.grid, HamiltonianField(g).rk4_step(psi.values, dtau)};
}

std::array<double, 2> ScalarField::grad(PhasePoint x) const {
  if (gradient) return gradient(x);
  constexpr double h = 1e-3;
  auto partial = [&](bool first) {
    auto at = [&](double t) {
      PhasePoint y = x;
      (first ? y.c1 : y.c2) += t;
      return value(y);
    };
    return (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h);
  };
  return {partial(true), partial(false)};
}

PhasePoint canonical_flow_point(const Manifold& manifold, PhasePoint x, const ScalarField& g, double tau,
                                double dtau) {
  if (!(dtau > 0)) throw std::invalid_argument("flow step must be positive");
  const bool plane = manifold.kind == ManifoldKind::plane;
  auto check = [&](PhasePoint y) {
    if (plane ? std::abs(plane_z(y)) > manifold.radius : (y.c1 <= 0.0 || y.c1 >= M_PI))
      throw TrajectoryLeftDomain("canonical flow left the chart domain");
  };
  auto velocity = [&](PhasePoint y) -> std::array<double, 2> {
    check(y);
    const auto dg = g.grad(y);
    const double omega = plane ? 1.0 : 1.0 / (manifold.j() * std::sin(y.c1));
    return {omega * dg[1], -omega * dg[0]};
  };
  auto shift = [](PhasePoint y, const std::array<double, 2>& v, double s) { return PhasePoint{y.c1 + s * v[0], y.c2 + s * v[1]}; };

  const auto steps = static_cast<long>(std::ceil(std::abs(tau) / dtau - 1e-12));
  if (steps == 0) return x;
  const double h = tau / static_cast<double>(steps);
  for (long s = 0; s < steps; ++s) {
    const auto k1 = velocity(x);
    const auto k2 = velocity(shift(x, k1, 0.5 * h));
    const auto k3 = velocity(shift(x, k2, 0.5 * h));
    const auto k4 = velocity(shift(x, k3, h));
    x.c1 += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    x.c2 += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
  }
  check(x);
  if (!plane) x.c2 = std::fmod(std::fmod(x.c2, 2.0 * M_PI) + 2.0 * M_PI, 2.0 * M_PI);
  return x;
}

ClassicalMean classical_mean(const GridFunction& rho_diag, const GridFunction& f) {
  require_same_grid(rho_diag, f);
  const Complex mass = rho_diag.integrate();
  ClassicalMean out;
  out.value = (rho_diag * f).integrate();
  out.normalization_warning = std::abs(mass - Complex(1.0)) > 1e-6;
  return out;
}

}  // namespace csq
