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

#include "csq/measure.hpp"

#include <algorithm>
#include <cmath>

namespace csq {

namespace {

void require_region_grid(const Frame& frame, const Region& delta) {
  if (!delta.grid || delta.grid->id() != frame.grid()->id()) throw GridMismatch("region is not on the frame grid");
}

void require_state_dim(const Frame& frame, const DensityMatrix& rho) {
  if (rho.dim() != frame.system().dim()) throw DimensionMismatch("density matrix dimension does not match the system");
}

Eigen::VectorXd indicator_vector(const Region& delta) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(delta.indicator.size()));
  for (size_t i = 0; i < delta.indicator.size(); ++i) v(static_cast<Eigen::Index>(i)) = delta.indicator[i] ? 1.0 : 0.0;
  return v;
}

Operator diagonal_sum(const Frame& frame, const Eigen::VectorXd& factor) {
  const Eigen::MatrixXcd& e = frame.embedding();
  const Eigen::VectorXd d = frame.weights().cwiseProduct(factor);
  return e.adjoint() * d.asDiagonal() * e;
}

bool normalization_off(const GridFunction& w) { return std::abs(w.integrate() - Complex(1.0)) > 1e-6; }

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Region Region::from_predicate(GridPtr grid, const std::function<bool(PhasePoint)>& contains) {
  Region r{grid, std::vector<bool>(static_cast<size_t>(grid->size()))};
  for (size_t i = 0; i < r.indicator.size(); ++i) r.indicator[i] = contains(grid->nodes()[i]);
  return r;
}

Region Region::all(GridPtr grid) { return {grid, std::vector<bool>(static_cast<size_t>(grid->size()), true)}; }
Region Region::none(GridPtr grid) { return {grid, std::vector<bool>(static_cast<size_t>(grid->size()), false)}; }

Region Region::disk(GridPtr grid, PhasePoint center, double radius) {
  if (grid->kind() == ManifoldKind::plane) {
    const Complex c = plane_z(center);
    return from_predicate(grid, [c, radius](PhasePoint x) { return std::abs(plane_z(x) - c) <= radius; });
  }
  const Eigen::Vector3d n = sphere_direction(center);
  return from_predicate(grid, [n, radius](PhasePoint x) {
    return std::acos(std::clamp(sphere_direction(x).dot(n), -1.0, 1.0)) <= radius;
  });
}

Region Region::complement() const {
  Region r = *this;
  r.indicator.flip();
  return r;
}

Region Region::intersect(const Region& other) const {
  if (other.grid->id() != grid->id()) throw GridMismatch("regions live on different grids");
  Region r = *this;
  for (size_t i = 0; i < r.indicator.size(); ++i) r.indicator[i] = indicator[i] && other.indicator[i];
  return r;
}

Region Region::unite(const Region& other) const {
  if (other.grid->id() != grid->id()) throw GridMismatch("regions live on different grids");
  Region r = *this;
  for (size_t i = 0; i < r.indicator.size(); ++i) r.indicator[i] = indicator[i] || other.indicator[i];
  return r;
}

GridFunction Region::indicator_function() const { return {grid, indicator_vector(*this).cast<Complex>()}; }

Eigen::Index Region::count() const {
  return static_cast<Eigen::Index>(std::count(indicator.begin(), indicator.end(), true));
}

Operator css_measure(const Frame& frame, const Region& delta) {
  require_region_grid(frame, delta);
  return diagonal_sum(frame, indicator_vector(delta));
}

MultiplicationOperator spectral_measure(const Region& delta) { return MultiplicationOperator(delta.indicator_function()); }

Operator compress_spectral(const Frame& frame, const Region& delta) {
  require_region_grid(frame, delta);
  const Eigen::VectorXcd mask = indicator_vector(delta).cast<Complex>();
  return frame.compress([&](const Eigen::VectorXcd& psi) { return Eigen::VectorXcd(mask.cwiseProduct(psi)); });
}

Operator instrument_region(const Frame& frame, const DensityMatrix& rho, const Region& delta) {
  require_region_grid(frame, delta);
  return instrument_f(frame, rho, delta.indicator_function());
}

Operator instrument_f(const Frame& frame, const DensityMatrix& rho, const GridFunction& f) {
  require_state_dim(frame, rho);
  return apply_instrument(frame, rho.op(), f);
}

Operator apply_instrument(const Frame& frame, const Operator& x, const GridFunction& f) {
  if (x.rows() != frame.system().dim() || x.cols() != x.rows())
    throw DimensionMismatch("operator dimension does not match the system");
  if (!f.grid || f.grid->id() != frame.grid()->id()) throw GridMismatch("function is not on the frame grid");
  const Eigen::MatrixXcd& e = frame.embedding();
  // Tr(M_i X) = <omega_i|X|omega_i>.
  const Eigen::VectorXcd q = (e * x).cwiseProduct(e.conjugate()).rowwise().sum();
  const Eigen::VectorXcd d = frame.weights().cast<Complex>().cwiseProduct(q).cwiseProduct(f.values);
  return e.adjoint() * d.asDiagonal() * e;
}

double holevo_probability(const Frame& frame, const DensityMatrix& rho, const Region& delta) {
  require_region_grid(frame, delta);
  require_state_dim(frame, rho);
  const Eigen::VectorXd q = husimi_on_grid(frame, rho);
  return frame.weights().cwiseProduct(q).dot(indicator_vector(delta));
}

double disk_probability(const CoherentStateSystem& sys, const DensityMatrix& rho, PhasePoint center, double radius,
                        int n_radial, int n_angular) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
  if (n_radial < 2 || n_angular < 2) throw std::invalid_argument("disk rule needs at least 2x2 nodes");
  if (rho.dim() != sys.dim()) throw DimensionMismatch("state and coherent system dimensions differ");
  const auto [x, w] = gauss_legendre(n_radial);
  const Operator& op = rho.op();
  auto q = [&](PhasePoint y) {
    const StateVector v = sys.vector(y);
    return v.dot(op * v).real();
  };
  const double dpsi = 2.0 * M_PI / n_angular;
  double total = 0.0;
  if (sys.kind() == ManifoldKind::plane) {
    const Complex c = plane_z(center);
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const double r = 0.5 * radius * (x(k) + 1.0);
      const double wr = 0.5 * radius * w(k) * r * dpsi / M_PI;
      for (int a = 0; a < n_angular; ++a) total += wr * q(plane_point(c + std::polar(r, a * dpsi)));
    }
    return total;
  }
  // Cap about the pole in u = cos(Theta), then rotated onto the centre.
  const double lo = std::cos(std::min(radius, M_PI));
  const GroupElement to_centre = GroupElement::rotation(center.c1, center.c2);
  const double density = (2.0 * sys.spin().value() + 1.0) / (4.0 * M_PI);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double u = lo + 0.5 * (1.0 - lo) * (x(k) + 1.0);
    const double wu = 0.5 * (1.0 - lo) * w(k) * dpsi * density;
    for (int a = 0; a < n_angular; ++a) total += wu * q(to_centre.act(PhasePoint{std::acos(u), a * dpsi}));
  }
  return total;
}

OutcomeProbability device_outcome_distribution(const GridFunction& w, const DeviceFunction& eta, const Region& delta) {
  if (!delta.grid || delta.grid->id() != w.grid->id()) throw GridMismatch("region and state live on different grids");
  const auto& weights = w.grid->weights();
  OutcomeProbability out;
  out.normalization_warning = normalization_off(w);
  if (eta.kind == DeviceKind::delta) {
    out.value = weights.cwiseProduct(w.values.real()).dot(indicator_vector(delta));
    return out;
  }
  const DeviceKernel k = device_kernel(eta, w.grid->manifold());
  const auto& nodes = w.grid->nodes();
  double total = 0.0;
  for (Eigen::Index z = 0; z < w.size(); ++z) {
    const double mass = weights(z) * w.values(z).real();
    if (mass == 0.0) continue;
    double inside = 0.0;
    for (Eigen::Index x = 0; x < w.size(); ++x) {
      if (!delta.indicator[static_cast<size_t>(x)]) continue;
      inside += weights(x) * k(nodes[static_cast<size_t>(x)], nodes[static_cast<size_t>(z)]).real();
    }
    total += mass * inside;
  }
  out.value = total;
  return out;
}

DeviceMean device_mean_identity(const GridFunction& w, const GridFunction& f, const DeviceFunction& eta) {
  require_same_grid(w, f);
  const auto& weights = w.grid->weights();
  const auto& nodes = w.grid->nodes();
  DeviceMean out;
  out.normalization_warning = normalization_off(w);
  if (eta.kind == DeviceKind::delta) {
    out.outcome_mean = out.smeared_mean = (w * f).integrate();
    return out;
  }
  const DeviceKernel k = device_kernel(eta, w.grid->manifold());
  // Outcome density d(x) = sum_z w_z w(z) eta_x(z).
  Eigen::VectorXcd density = Eigen::VectorXcd::Zero(w.size());
  for (Eigen::Index x = 0; x < w.size(); ++x)
    for (Eigen::Index z = 0; z < w.size(); ++z)
      density(x) += weights(z) * w.values(z) * k(nodes[static_cast<size_t>(x)], nodes[static_cast<size_t>(z)]);
  out.outcome_mean = (GridFunction{w.grid, density} * f).integrate();
  out.smeared_mean = (w * smear(f, eta)).integrate();
  return out;
}

GridFunction ClassicalInstrumentOutput::apply(const GridFunction& psi) const {
  return factor_ * apply_P0(frame_, psi);
}

Complex ClassicalInstrumentOutput::trace() const {
  return (frame_.weights().cast<Complex>().cwiseProduct(factor_.values).cwiseProduct(frame_.kernel_diagonal())).sum();
}

Operator ClassicalInstrumentOutput::compress() const {
  const Eigen::MatrixXcd& e = frame_.embedding();
  const Eigen::VectorXcd d = frame_.weights().cast<Complex>().cwiseProduct(factor_.values);
  // O E = factor * (P0 E), and P0 E = scale * E G.
  const Eigen::MatrixXcd gram = e.adjoint() * frame_.weights().asDiagonal() * e;
  return frame_.kernel_scale() * (e.adjoint() * d.asDiagonal() * e * gram);
}

ClassicalInstrumentOutput classical_instrument(const GridFunction& rho_diag, const GridFunction& f, const Frame& frame) {
  require_same_grid(rho_diag, f);
  if (rho_diag.grid->id() != frame.grid()->id()) throw GridMismatch("instrument input is not on the frame grid");
  const Eigen::VectorXcd diag = frame.kernel_diagonal();
  if ((diag.array() - Complex(1.0)).abs().maxCoeff() > 1e-10)
    throw PreconditionError("classical instrument needs a reproducing kernel with K(x, x) = 1");
  return ClassicalInstrumentOutput(frame, f * rho_diag);
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  SplitMix64 sm(seed);
  for (auto& word : s_) word = sm.next();
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

MeasurementRecord sample_outcomes(const Frame& frame, const DensityMatrix& rho, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample count must be at least 1");
  require_state_dim(frame, rho);
  const CoherentStateSystem& sys = frame.system();
  const Manifold& manifold = frame.grid()->manifold();
  const double envelope = std::min(1.0, 1.1 * husimi_on_grid(frame, rho).maxCoeff());
  if (!(envelope > 0.0)) throw SamplingInefficiency("Husimi density vanishes on every grid node");

  MeasurementRecord record;
  record.seed = seed;
  record.envelope = envelope;
  record.proposal = manifold.kind == ManifoldKind::plane ? "uniform disk |z| <= R" : "uniform sphere";
  record.outcomes.reserve(static_cast<size_t>(n));
  Xoshiro256 rng(seed);
  const Operator& op = rho.op();
  std::int64_t proposals = 0;
  while (static_cast<std::int64_t>(record.outcomes.size()) < n) {
    PhasePoint x;
    if (manifold.kind == ManifoldKind::plane) {
      const double r = manifold.radius * std::sqrt(rng.uniform());
      const double a = 2.0 * M_PI * rng.uniform();
      x = plane_point(std::polar(r, a));
    } else {
      const double c = 2.0 * rng.uniform() - 1.0;
      x = PhasePoint{std::acos(c), 2.0 * M_PI * rng.uniform()};
    }
    const double u = rng.uniform();
    ++proposals;
    const StateVector v = sys.vector(x);
    if (u * envelope < v.dot(op * v).real()) record.outcomes.push_back(x);
    if (proposals >= 1000000 && static_cast<double>(record.outcomes.size()) < 1e-4 * static_cast<double>(proposals))
      throw SamplingInefficiency("rejection sampling acceptance rate fell below 1e-4");
  }
  record.acceptance_rate = static_cast<double>(n) / static_cast<double>(proposals);
  return record;
}

}  // namespace csq
