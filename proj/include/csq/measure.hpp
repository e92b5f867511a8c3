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

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csq/coherent.hpp"
#include "csq/quantize.hpp"

namespace csq {

/// A Borel set discretized as a subset of grid nodes.
struct Region {
  GridPtr grid;
  std::vector<bool> indicator;

  static Region from_predicate(GridPtr grid, const std::function<bool(PhasePoint)>& contains);
  static Region all(GridPtr grid);
  static Region none(GridPtr grid);
  /// |z - center| <= radius on the plane; geodesic distance on the sphere.
  static Region disk(GridPtr grid, PhasePoint center, double radius);

  Region complement() const;
  Region intersect(const Region& other) const;
  Region unite(const Region& other) const;
  GridFunction indicator_function() const;
  Eigen::Index count() const;
};

/// M(Delta) = sum_{i in Delta} w_i M_{x_i}.
Operator css_measure(const Frame& frame, const Region& delta);
/// Multiplication by the indicator of Delta.
MultiplicationOperator spectral_measure(const Region& delta);
/// P0 Pi(Delta) P0 written in the orthonormal basis of the embedded subspace.
Operator compress_spectral(const Frame& frame, const Region& delta);

/// E_Delta(rho) = sum_{i in Delta} w_i Tr(M_{x_i} rho) M_{x_i}.
Operator instrument_region(const Frame& frame, const DensityMatrix& rho, const Region& delta);
/// E_f(rho) = sum_i w_i f(x_i) Tr(M_{x_i} rho) M_{x_i}.
Operator instrument_f(const Frame& frame, const DensityMatrix& rho, const GridFunction& f);
/// The same map on an arbitrary operator, for composing instruments.
Operator apply_instrument(const Frame& frame, const Operator& x, const GridFunction& f);
/// Tr(rho M(Delta)).
double holevo_probability(const Frame& frame, const DensityMatrix& rho, const Region& delta);

/// Tr(rho M(disk)) for a geometric disk (plane) or geodesic cap (sphere), by a
/// polar rule centred on the disk rather than the frame grid. Free of the
/// node-indicator boundary error.
double disk_probability(const CoherentStateSystem& sys, const DensityMatrix& rho, PhasePoint center, double radius,
                        int n_radial = 48, int n_angular = 96);

struct OutcomeProbability {
  double value = 0.0;
  bool normalization_warning = false;
};

/// mu_w(Delta) = sum_z w_z w(z) sum_{x in Delta} w_x eta_x(z).
OutcomeProbability device_outcome_distribution(const GridFunction& w, const DeviceFunction& eta, const Region& delta);

struct DeviceMean {
  Complex outcome_mean;   // integral of f against mu_w
  Complex smeared_mean;   // integral of f_eta against w
  bool normalization_warning = false;
};
DeviceMean device_mean_identity(const GridFunction& w, const GridFunction& f, const DeviceFunction& eta);

/// Output of the classical instrument as a grid operator with kernel
/// O(y, z) = f(y) rho(y, y) K(y, z).
class ClassicalInstrumentOutput {
 public:
  ClassicalInstrumentOutput(const Frame& frame, GridFunction factor) : frame_(frame), factor_(std::move(factor)) {}

  GridFunction apply(const GridFunction& psi) const;
  /// Sum_y w_y O(y, y).
  Complex trace() const;
  /// E^dag W O E: the output read back as an operator on the Hilbert space.
  Operator compress() const;
  const GridFunction& factor() const { return factor_; }

 private:
  const Frame& frame_;
  GridFunction factor_;
};

/// Requires a kernel with unit diagonal.
ClassicalInstrumentOutput classical_instrument(const GridFunction& rho_diag, const GridFunction& f, const Frame& frame);

/// SplitMix64 (Vigna). Used for seeding.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0, seeded from SplitMix64.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);
  explicit Xoshiro256(const std::array<std::uint64_t, 4>& state) : s_(state) {}
  std::uint64_t next();
  /// (next() >> 11) * 2^-53, in [0, 1).
  double uniform();

 private:
  std::array<std::uint64_t, 4> s_{};
};

class SamplingInefficiency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeasurementRecord {
  std::vector<PhasePoint> outcomes;
  std::uint64_t seed = 0;
  double acceptance_rate = 0.0;
  double envelope = 0.0;
  std::string proposal;
};

/// Rejection sampling from the Husimi density. Proposal: uniform over the grid
/// disk (plane) or the whole sphere; envelope min(1, 1.1 * max node Husimi).
MeasurementRecord sample_outcomes(const Frame& frame, const DensityMatrix& rho, std::int64_t n, std::uint64_t seed);

}  // namespace csq
