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

#include "csq/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace csq {

namespace {

double geodesic(PhasePoint a, PhasePoint b) {
  const double c = std::clamp(sphere_direction(a).dot(sphere_direction(b)), -1.0, 1.0);
  return std::acos(c);
}

// Normalization of exp(-Theta^2 / 2 sigma^2) against (2j+1)/(4 pi) dOmega.
double sphere_gaussian_constant(double sigma, double j) {
  const auto [x, w] = gauss_legendre(400);
  double integral = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double t = 0.5 * M_PI * (x(k) + 1.0);
    integral += 0.5 * M_PI * w(k) * std::exp(-t * t / (2.0 * sigma * sigma)) * std::sin(t);
  }
  return 1.0 / ((2.0 * j + 1.0) / (4.0 * M_PI) * 2.0 * M_PI * integral);
}

// Embedding of a plane grid into a Fock space of the given dimension.
Eigen::MatrixXcd plane_embedding(const QuadratureGrid& grid, Eigen::Index dim) {
  const CoherentStateSystem sys = CoherentStateSystem::plane(dim);
  Eigen::MatrixXcd e(grid.size(), dim);
  for (Eigen::Index i = 0; i < grid.size(); ++i) e.row(i) = sys.vector(grid.nodes()[static_cast<size_t>(i)]).adjoint();
  return e;
}

Operator weighted_sum(const Eigen::MatrixXcd& e, const Eigen::VectorXd& w, const Eigen::VectorXcd& f) {
  const Eigen::VectorXcd d = w.cast<Complex>().cwiseProduct(f);
  return e.adjoint() * d.asDiagonal() * e;
}

void require_frame_grid(const Frame& frame, const GridFunction& f) {
  if (!f.grid || f.grid->id() != frame.grid()->id()) throw GridMismatch("function is not on the frame grid");
}

constexpr Eigen::Index kOrderingPad = 30;
constexpr int kOrderingTerms = 30;

// Gaussian smearing with precomputed coordinates; terms below e^{-40} are dropped.
GridFunction smear_gaussian(const GridFunction& f, double sigma) {
  const auto& nodes = f.grid->nodes();
  const Eigen::VectorXcd wf = f.grid->weights().cast<Complex>().cwiseProduct(f.values);
  const Eigen::Index n = f.size();
  const double a = 1.0 / (2.0 * sigma * sigma);
  constexpr double kCut = 40.0;
  GridFunction out{f.grid, Eigen::VectorXcd::Zero(n)};
  if (f.grid->kind() == ManifoldKind::plane) {
    std::vector<Complex> z(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) z[static_cast<size_t>(i)] = plane_z(nodes[static_cast<size_t>(i)]);
    for (Eigen::Index x = 0; x < n; ++x) {
      Complex acc = 0.0;
      for (Eigen::Index y = 0; y < n; ++y) {
        const double e = a * std::norm(z[static_cast<size_t>(x)] - z[static_cast<size_t>(y)]);
        if (e < kCut) acc += wf(y) * std::exp(-e);
      }
      out.values(x) = a * acc;
    }
    return out;
  }
  const double c = sphere_gaussian_constant(sigma, f.grid->manifold().j());
  std::vector<Eigen::Vector3d> d(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d[static_cast<size_t>(i)] = sphere_direction(nodes[static_cast<size_t>(i)]);
  const double reach = std::sqrt(kCut / a);
  const double min_dot = reach < M_PI ? std::cos(reach) : -2.0;
  for (Eigen::Index x = 0; x < n; ++x) {
    Complex acc = 0.0;
    for (Eigen::Index y = 0; y < n; ++y) {
      const double dot = d[static_cast<size_t>(x)].dot(d[static_cast<size_t>(y)]);
      if (dot < min_dot) continue;
      const double t = std::acos(std::clamp(dot, -1.0, 1.0));
      acc += wf(y) * std::exp(-a * t * t);
    }
    out.values(x) = c * acc;
  }
  return out;
}


}  // namespace

DeviceFunction DeviceFunction::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian device needs sigma > 0");
  DeviceFunction d;
  d.kind = DeviceKind::gaussian;
  d.sigma = sigma;
  return d;
}

DeviceFunction DeviceFunction::s_ordered(double s) {
  if (!std::isfinite(s)) throw std::invalid_argument("ordering parameter must be finite");
  DeviceFunction d;
  d.kind = DeviceKind::s_ordered;
  d.s = s;
  return d;
}

DeviceFunction DeviceFunction::from_kernel(std::function<Complex(PhasePoint, PhasePoint)> kernel, bool covariant) {
  DeviceFunction d;
  d.kind = DeviceKind::custom;
  d.custom = std::move(kernel);
  d.covariant = covariant;
  return d;
}

DeviceFunction DeviceFunction::dipole(Spin spin, double a) {
  if (std::abs(a) > 1.0) throw std::invalid_argument("dipole device needs |a| <= 1 to stay positive");
  const double norm = static_cast<double>(spin.dim());
  return from_kernel(
      [a, norm](PhasePoint x, PhasePoint z) {
        return Complex((1.0 + a * sphere_direction(x).dot(sphere_direction(z))) / norm, 0.0);
      },
      true);
}

std::string DeviceFunction::label() const {
  std::ostringstream out;
  switch (kind) {
    case DeviceKind::delta: out << "delta"; break;
    case DeviceKind::gaussian: out << "gaussian(sigma=" << sigma << ")"; break;
    case DeviceKind::s_ordered: out << "s_ordered(s=" << s << ")"; break;
    case DeviceKind::custom: out << "custom"; break;
  }
  return out.str();
}

std::string OrderingRule::label() const {
  if (s == -1.0) return "antinormal";
  if (s == 0.0) return "weyl";
  if (s == 1.0) return "normal";
  std::ostringstream out;
  out << "s=" << s;
  return out.str();
}

DeviceKernel device_kernel(const DeviceFunction& eta, const Manifold& manifold) {
  switch (eta.kind) {
    case DeviceKind::gaussian: {
      const double sigma = eta.sigma;
      if (manifold.kind == ManifoldKind::plane) {
        const double c = 1.0 / (2.0 * sigma * sigma);
        return [c](PhasePoint z, PhasePoint x) {
          return Complex(c * std::exp(-c * std::norm(plane_z(x) - plane_z(z))), 0.0);
        };
      }
      const double c = sphere_gaussian_constant(sigma, manifold.j());
      return [c, sigma](PhasePoint z, PhasePoint x) {
        const double t = geodesic(x, z);
        return Complex(c * std::exp(-t * t / (2.0 * sigma * sigma)), 0.0);
      };
    }
    case DeviceKind::custom: {
      auto fn = eta.custom;
      return [fn](PhasePoint z, PhasePoint x) { return fn(x, z); };
    }
    default:
      throw PreconditionError("device " + eta.label() + " has no pointwise density");
  }
}

GridFunction smear(const GridFunction& f, const DeviceFunction& eta) {
  if (eta.kind == DeviceKind::delta) return f;
  if (eta.kind == DeviceKind::gaussian) return smear_gaussian(f, eta.sigma);
  const DeviceKernel k = device_kernel(eta, f.grid->manifold());
  const auto& nodes = f.grid->nodes();
  const Eigen::VectorXcd wf = f.grid->weights().cast<Complex>().cwiseProduct(f.values);
  const Eigen::Index n = f.size();
  GridFunction out{f.grid, Eigen::VectorXcd::Zero(n)};
  for (Eigen::Index x = 0; x < n; ++x) {
    Complex acc = 0.0;
    for (Eigen::Index z = 0; z < n; ++z) {
      if (wf(z) == Complex(0.0)) continue;
      acc += wf(z) * k(nodes[static_cast<size_t>(z)], nodes[static_cast<size_t>(x)]);
    }
    out.values(x) = acc;
  }
  return out;
}

Complex smear_at(const GridFunction& f, const DeviceFunction& eta, PhasePoint x) {
  if (eta.kind == DeviceKind::delta) throw PreconditionError("delta device can only be evaluated on grid nodes");
  const DeviceKernel k = device_kernel(eta, f.grid->manifold());
  const auto& nodes = f.grid->nodes();
  const auto& w = f.grid->weights();
  Complex acc = 0.0;
  for (Eigen::Index z = 0; z < f.size(); ++z) acc += w(z) * f.values(z) * k(nodes[static_cast<size_t>(z)], x);
  return acc;
}

MultiplicationOperator pi_of_f(const GridFunction& f) { return MultiplicationOperator(f); }

MultiplicationOperator pi_eta(const GridFunction& f, const DeviceFunction& eta) {
  return MultiplicationOperator(smear(f, eta));
}

Operator quantize_stochastic(const Frame& frame, const GridFunction& f) {
  require_frame_grid(frame, f);
  return weighted_sum(frame.embedding(), frame.weights(), f.values);
}

Operator quantize_eta(const Frame& frame, const GridFunction& f, const DeviceFunction& eta) {
  if (eta.kind == DeviceKind::s_ordered) return quantize_s_ordered(frame, f, eta.s);
  return quantize_stochastic(frame, smear(f, eta));
}

Operator quantize_s_ordered(const Frame& frame, const GridFunction& f, double s) {
  require_frame_grid(frame, f);
  if (frame.system().kind() != ManifoldKind::plane) throw PreconditionError("s-ordering is defined on the plane");
  const Eigen::Index dim = frame.system().dim();
  const double t = 0.5 * (1.0 + s);
  if (t == 0.0) return quantize_stochastic(frame, f);

  const Eigen::Index big = dim + kOrderingPad;
  const Operator antinormal = weighted_sum(plane_embedding(*frame.grid(), big), frame.weights(), f.values);
  const Operator a = annihilation_op(big);
  const Operator ad = a.adjoint();
  auto laplacian = [&](const Operator& x) {
    const Operator inner = ad * x - x * ad;
    return Operator(a * inner - inner * a);
  };
  Operator sum = antinormal;
  Operator term = antinormal;
  const double scale = std::max(1.0, antinormal.topLeftCorner(dim, dim).cwiseAbs().maxCoeff());
  // The flow runs backwards in diffusion, so quadrature error in the high
  // levels grows with each term. Stop at the smallest block term.
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kOrderingTerms; ++k) {
    const Operator next = (t / k) * laplacian(term);
    const double size = next.topLeftCorner(dim, dim).cwiseAbs().maxCoeff();
    if (size > previous) break;
    previous = size;
    term = next;
    sum += term;
    if (size < 1e-15 * scale) break;
  }
  return sum.topLeftCorner(dim, dim);
}

Operator wigner_operator(Eigen::Index dim, PhasePoint z) {
  detail::require_dim(dim);
  const Complex alpha = plane_z(z);
  const double mod = std::abs(alpha);
  // Columns beyond dim + 4|alpha|^2 + 12|alpha| + 40 carry negligible weight.
  const Eigen::Index cols = dim + 40 + static_cast<Eigen::Index>(std::ceil(4.0 * mod * mod + 12.0 * mod));
  const Operator d = displacement_elements<double>(dim, cols, alpha);
  Eigen::VectorXd parity(cols);
  for (Eigen::Index k = 0; k < cols; ++k) parity(k) = (k % 2 == 0) ? 2.0 : -2.0;
  return d * parity.asDiagonal() * d.adjoint();
}

Operator wigner_operator_literal(Eigen::Index dim, PhasePoint z, const QuadratureGrid& alpha_grid) {
  detail::require_dim(dim);
  if (alpha_grid.kind() != ManifoldKind::plane) throw GridMismatch("alpha grid must be a plane grid");
  const Complex zc = plane_z(z);
  Operator out = Operator::Zero(dim, dim);
  for (Eigen::Index i = 0; i < alpha_grid.size(); ++i) {
    const Complex alpha = plane_z(alpha_grid.nodes()[static_cast<size_t>(i)]);
    const Complex phase = std::exp(std::conj(alpha) * zc - alpha * std::conj(zc));
    out += (alpha_grid.weights()(i) * phase) * displacement_elements<double>(dim, dim, alpha);
  }
  return out;
}

Operator quantize_weyl(const Frame& frame, const GridFunction& f) {
  require_frame_grid(frame, f);
  if (frame.system().kind() != ManifoldKind::plane) throw PreconditionError("Weyl quantization is defined on the plane");
  const Eigen::Index dim = frame.system().dim();
  const auto& nodes = frame.grid()->nodes();
  const auto& w = frame.weights();
  Operator out = Operator::Zero(dim, dim);
  for (Eigen::Index i = 0; i < frame.grid()->size(); ++i) {
    const Complex c = w(i) * f.values(i);
    if (c == Complex(0.0)) continue;
    out += c * wigner_operator(dim, nodes[static_cast<size_t>(i)]);
  }
  return out;
}

double wigner_function(const DensityMatrix& rho, PhasePoint z) {
  return (rho.op() * wigner_operator(rho.dim(), z)).trace().real();
}

double covariance_defect_quantize(const Frame& frame, const PointFunction& f, const GroupElement& a,
                                  std::optional<Eigen::Index> block) {
  const auto& grid = frame.grid();
  const GridFunction shifted =
      GridFunction::sample(grid, [&](PhasePoint x) { return f(a.act_inverse(x)); });
  const Operator rhs = quantize_stochastic(frame, shifted);
  const GridFunction base = GridFunction::sample(grid, f);
  Operator lhs;
  if (frame.system().kind() == ManifoldKind::plane) {
    // Conjugate in a padded space so the truncated block is exact.
    const Eigen::Index dim = frame.system().dim();
    const double mod = std::abs(a.alpha);
    const Eigen::Index big = dim + 40 + static_cast<Eigen::Index>(std::ceil(2.0 * mod * mod + 12.0 * mod));
    const Operator m = weighted_sum(plane_embedding(*grid, big), frame.weights(), base.values);
    const Operator d = displacement_elements<double>(dim, big, a.alpha);
    lhs = d * m * d.adjoint();
  } else {
    lhs = conjugate_by(frame.system().group_action(a), quantize_stochastic(frame, base));
  }
  return defect_norm(lhs, rhs, block);
}

double covariance_defect_pi_eta(const GridPtr& grid, const PointFunction& f, const DeviceFunction& eta,
                                const GroupElement& a, const std::vector<bool>& mask) {
  const GridFunction base = GridFunction::sample(grid, f);
  const GridFunction shifted = GridFunction::sample(grid, [&](PhasePoint x) { return f(a.act_inverse(x)); });
  const GridFunction lhs = smear(shifted, eta);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    if (!mask.empty() && !mask[static_cast<size_t>(i)]) continue;
    const PhasePoint x = grid->nodes()[static_cast<size_t>(i)];
    const Complex rhs = eta.kind == DeviceKind::delta ? f(a.act_inverse(x)) : smear_at(base, eta, a.act_inverse(x));
    worst = std::max(worst, std::abs(lhs.values(i) - rhs));
  }
  return worst;
}

double compression_defect(const Frame& frame, const GridFunction& f) {
  require_frame_grid(frame, f);
  const Operator m = quantize_stochastic(frame, f);
  const Eigen::MatrixXcd& e = frame.embedding();
  const Eigen::VectorXcd w = frame.weights().cast<Complex>();
  double worst = 0.0;
  for (Eigen::Index n = 0; n < e.cols(); ++n) {
    const GridFunction psi{frame.grid(), e.col(n)};
    const GridFunction projected = apply_P0(frame, psi);
    const GridFunction lhs = apply_P0(frame, f * projected);
    // M(f) acting on grid functions through its kernel <omega_x|M(f)|omega_y>.
    const Eigen::VectorXcd rhs = e * (m * (e.adjoint() * w.cwiseProduct(projected.values)));
    worst = std::max(worst, (lhs.values - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace csq
