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

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "csq/io.hpp"

namespace csq::cli {

namespace {

using nlohmann::json;

// Object reader that rejects keys it was not asked about.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }
  ~Section() = default;

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& at(const std::string& key) {
    if (!has(key)) throw ConfigError(path_ + "." + key + ": missing field");
    return j_.at(key);
  }
  std::string sub(const std::string& key) const { return path_ + "." + key; }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(sub(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(sub(key) + ": not finite");
    return x;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
  std::int64_t integer(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(sub(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) { return has(key) ? integer(key) : fallback; }
  std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(sub(key) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(sub(key) + ": expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) { return has(key) ? string(key) : fallback; }
  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(sub(key) + ": expected a boolean");
    return v.get<bool>();
  }
  PhasePoint point(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ConfigError(sub(key) + ": expected [coord1, coord2]");
    return {v[0].get<double>(), v[1].get<double>()};
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError(path_ + "." + key + ": unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

int positive(std::int64_t v, const std::string& what) {
  if (v < 1 || v > 100000) throw ConfigError(what + ": must be a positive integer");
  return static_cast<int>(v);
}

SystemSpec parse_system(Section& root) {
  Section s(root.at("system"), "system");
  SystemSpec out;
  const std::string kind = s.string("kind");
  if (kind == "plane") {
    out.kind = ManifoldKind::plane;
    out.dim = positive(s.integer("N"), "system.N");
    out.radius = s.number("R");
    if (!(out.radius > 0.0)) throw ConfigError("system.R: must be positive");
  } else if (kind == "sphere") {
    out.kind = ManifoldKind::sphere;
    try {
      out.spin = Spin::from_value(s.number("j"));
    } catch (const InvalidSpin& e) {
      throw ConfigError(std::string("system.j: ") + e.what());
    }
  } else {
    throw ConfigError("system.kind: expected \"plane\" or \"sphere\"");
  }
  s.finish();

  const int two_j = out.spin.twice();
  out.n1 = out.kind == ManifoldKind::plane ? 80 : two_j + 6;
  out.n2 = out.kind == ManifoldKind::plane ? 80 : 2 * two_j + 12;
  if (root.has("grid")) {
    Section g(root.at("grid"), "grid");
    out.n1 = positive(g.integer("n1", out.n1), "grid.n1");
    out.n2 = positive(g.integer("n2", out.n2), "grid.n2");
    out.stencil = positive(g.integer("stencil", out.stencil), "grid.stencil");
    g.finish();
  }
  return out;
}

DeviceSpec parse_device(Section& root, const SystemSpec& system) {
  DeviceSpec out;
  if (!root.has("device")) return out;
  Section d(root.at("device"), "device");
  out.kind = d.string("kind");
  if (out.kind == "gaussian") {
    out.sigma = d.number("sigma");
    if (!(out.sigma > 0.0)) throw ConfigError("device.sigma: must be positive");
  } else if (out.kind == "dipole") {
    if (system.kind != ManifoldKind::sphere) throw ConfigError("device.kind: dipole needs a sphere system");
    out.a = d.number("a");
    if (std::abs(out.a) > 1.0) throw ConfigError("device.a: must lie in [-1, 1]");
  } else if (out.kind != "delta") {
    throw ConfigError("device.kind: expected delta, gaussian or dipole");
  }
  d.finish();
  return out;
}

StateSpec parse_state(Section& parent, const std::string& key) {
  StateSpec out;
  if (!parent.has(key)) return out;
  Section s(parent.at(key), parent.sub(key));
  out.kind = s.string("kind");
  if (out.kind == "coherent") {
    out.point = s.point("point");
  } else if (out.kind == "fock") {
    out.level = static_cast<int>(s.integer("level"));
    if (out.level < 0) throw ConfigError(s.sub("level") + ": must be non-negative");
  } else if (out.kind != "fiducial") {
    throw ConfigError(s.sub("kind") + ": expected fiducial, coherent or fock");
  }
  s.finish();
  return out;
}

MeasureSpec parse_measure(Section& root) {
  Section m(root.at("measure"), "measure");
  MeasureSpec out;
  out.state = parse_state(m, "state");
  out.samples = m.integer("samples");
  if (out.samples < 0) throw ConfigError("measure.samples: must be non-negative");
  out.seed = m.seed("seed", 0);
  if (m.has("regions")) {
    const json& list = m.at("regions");
    if (!list.is_array()) throw ConfigError("measure.regions: expected an array");
    for (size_t k = 0; k < list.size(); ++k) {
      Section r(list[k], "measure.regions[" + std::to_string(k) + "]");
      RegionSpec spec{r.point("center"), r.number("radius")};
      if (!(spec.radius > 0.0)) throw ConfigError(r.sub("radius") + ": must be positive");
      r.finish();
      out.regions.push_back(spec);
    }
  }
  m.finish();
  return out;
}

EvolveSpec parse_evolve(Section& root) {
  Section e(root.at("evolve"), "evolve");
  EvolveSpec out;
  out.hamiltonian = e.string("hamiltonian");
  out.initial = e.string("initial");
  if (e.has("observables")) {
    const json& list = e.at("observables");
    if (!list.is_array()) throw ConfigError("evolve.observables: expected an array");
    for (const json& o : list) {
      if (!o.is_string()) throw ConfigError("evolve.observables: expected strings");
      out.observables.push_back(o.get<std::string>());
    }
  }
  out.dtau = e.number("dtau");
  if (!(out.dtau > 0.0)) throw ConfigError("evolve.dtau: must be positive");
  out.steps = positive(e.integer("steps"), "evolve.steps");
  out.every = positive(e.integer("every", 1), "evolve.every");
  if (e.has("tracer")) out.tracer = e.point("tracer");
  out.richardson = e.boolean("richardson", false);
  e.finish();
  return out;
}

}  // namespace

CoherentStateSystem SystemSpec::coherent() const {
  return kind == ManifoldKind::plane ? CoherentStateSystem::plane(dim) : CoherentStateSystem::sphere(spin);
}

GridPtr SystemSpec::grid() const {
  return kind == ManifoldKind::plane ? build_plane_grid(radius, n1, n2, stencil)
                                     : build_sphere_grid(spin, n1, n2, stencil);
}

DeviceFunction DeviceSpec::build(const SystemSpec& system) const {
  if (kind == "gaussian") return DeviceFunction::gaussian(sigma);
  if (kind == "dipole") return DeviceFunction::dipole(system.spin, a);
  return DeviceFunction::delta();
}

DensityMatrix StateSpec::build(const CoherentStateSystem& sys) const {
  if (kind == "coherent") return DensityMatrix::pure(sys.vector(point));
  if (kind == "fock") {
    if (level >= sys.dim()) throw ConfigError("state.level: outside the Hilbert space");
    StateVector v = StateVector::Zero(sys.dim());
    v(level) = 1.0;
    return DensityMatrix::pure(v);
  }
  return DensityMatrix::pure(sys.fiducial());
}

const std::vector<std::string>& tolerance_names() {
  static const std::vector<std::string> names = {
      "resolution_of_identity", "reproducing_kernel", "projector",       "kernel_positive",
      "css_covariance",         "quantize_covariance", "smear_covariance", "instrument_normalization",
      "instrument_trace",       "holevo_additivity",  "compression",     "star_trace",
      "star_homomorphism",      "witness",            "poisson",         "divergence",
      "commutator",             "transformation_law", "q_commutator",    "ordering",
      "ordering_linear",        "sampling_sigmas",    "mass_drift"};
  return names;
}

double default_tolerance(const std::string& name, ManifoldKind kind) {
  const bool plane = kind == ManifoldKind::plane;
  if (name == "resolution_of_identity") return plane ? 1e-6 : 1e-12;
  if (name == "reproducing_kernel" || name == "projector") return plane ? 1e-6 : 1e-10;
  if (name == "kernel_positive") return 1e-8;
  if (name == "css_covariance" || name == "quantize_covariance" || name == "smear_covariance")
    return plane ? 1e-4 : 1e-8;
  if (name == "instrument_normalization") return 1e-6;
  if (name == "instrument_trace") return 1e-8;
  if (name == "holevo_additivity") return 1e-10;
  if (name == "compression") return 1e-5;
  if (name == "star_trace") return 1e-6;
  if (name == "star_homomorphism") return 1e-5;
  if (name == "witness") return 1e-3;
  if (name == "poisson") return 1e-4;
  if (name == "divergence") return 1e-4;
  if (name == "commutator") return 5e-4;
  if (name == "transformation_law") return 1e-4;
  if (name == "q_commutator") return 1e-4;
  if (name == "ordering") return 1e-5;
  if (name == "ordering_linear") return 1e-6;
  if (name == "sampling_sigmas") return 4.0;
  if (name == "mass_drift") return 1e-6;
  throw ConfigError("unknown tolerance " + name);
}

double RunConfig::tolerance(const std::string& name) const {
  const auto it = tolerances.find(name);
  return it != tolerances.end() ? it->second : default_tolerance(name, system.kind);
}

RunConfig parse_config(const json& doc) {
  Section root(doc, "config");
  RunConfig cfg;
  cfg.system = parse_system(root);
  cfg.device = parse_device(root, cfg.system);
  if (root.has("fault")) {
    Section f(root.at("fault"), "fault");
    cfg.kernel_scale = f.number("kernel_scale", 1.0);
    f.finish();
  }
  if (root.has("tolerances")) {
    Section t(root.at("tolerances"), "tolerances");
    for (const auto& name : tolerance_names())
      if (t.has(name)) {
        const double v = t.number(name);
        if (!(v > 0.0)) throw ConfigError("tolerances." + name + ": must be positive");
        cfg.tolerances[name] = v;
      }
    t.finish();
  }
  if (root.has("verify")) {
    Section v(root.at("verify"), "verify");
    VerifySpec spec;
    spec.seed = v.seed("seed", spec.seed);
    spec.block = positive(v.integer("block", spec.block), "verify.block");
    v.finish();
    cfg.verify = spec;
  }
  if (root.has("orderings")) {
    Section o(root.at("orderings"), "orderings");
    OrderingsSpec spec;
    spec.observable = o.string("observable", spec.observable);
    spec.levels = positive(o.integer("levels", spec.levels), "orderings.levels");
    o.finish();
    cfg.orderings = spec;
  }
  if (root.has("measure")) cfg.measure = parse_measure(root);
  if (root.has("evolve")) cfg.evolve = parse_evolve(root);
  root.finish();
  cfg.hash = hex64(fnv1a64(doc.dump()));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace csq::cli
