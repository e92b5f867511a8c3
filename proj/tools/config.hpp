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

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "csq/coherent.hpp"
#include "csq/quantize.hpp"

namespace csq::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemSpec {
  ManifoldKind kind = ManifoldKind::sphere;
  int dim = 0;        // plane Fock cutoff N
  double radius = 0;  // plane grid radius in |z|
  Spin spin = Spin::from_twice(1);
  int n1 = 0;
  int n2 = 0;
  int stencil = 9;

  CoherentStateSystem coherent() const;
  GridPtr grid() const;
};

struct DeviceSpec {
  std::string kind = "delta";  // delta | gaussian | dipole
  double sigma = 0.0;
  double a = 0.0;

  DeviceFunction build(const SystemSpec& system) const;
};

struct StateSpec {
  std::string kind = "fiducial";  // fiducial | coherent | fock
  PhasePoint point;
  int level = 0;

  DensityMatrix build(const CoherentStateSystem& sys) const;
};

struct RegionSpec {
  PhasePoint center;
  double radius = 0.0;
};

struct VerifySpec {
  std::uint64_t seed = 1;
  int block = 8;
};

struct OrderingsSpec {
  std::string observable = "abs2(z)";
  int levels = 8;
};

struct MeasureSpec {
  StateSpec state;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<RegionSpec> regions;
};

struct EvolveSpec {
  std::string hamiltonian;
  std::string initial;
  std::vector<std::string> observables;
  double dtau = 0.0;
  int steps = 0;
  int every = 1;
  std::optional<PhasePoint> tracer;
  bool richardson = false;
};

struct RunConfig {
  SystemSpec system;
  DeviceSpec device;
  double kernel_scale = 1.0;  // fault injection
  std::map<std::string, double> tolerances;
  std::optional<VerifySpec> verify;
  std::optional<OrderingsSpec> orderings;
  std::optional<MeasureSpec> measure;
  std::optional<EvolveSpec> evolve;
  std::string hash;  // FNV-1a of the canonical JSON dump

  double tolerance(const std::string& name) const;
};

/// Default tolerance of every named check for the given manifold.
double default_tolerance(const std::string& name, ManifoldKind kind);
const std::vector<std::string>& tolerance_names();

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

}  // namespace csq::cli
