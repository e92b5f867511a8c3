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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "csq/expression.hpp"
#include "csq/io.hpp"
#include "csq/measure.hpp"

namespace csq::cli {

namespace {

using nlohmann::json;

json header(const RunConfig& cfg, const std::string& command) {
  json sys;
  if (cfg.system.kind == ManifoldKind::plane) {
    sys = {{"kind", "plane"}, {"N", cfg.system.dim}, {"R", cfg.system.radius}};
  } else {
    sys = {{"kind", "sphere"}, {"j", cfg.system.spin.value()}};
  }
  sys["grid"] = {{"n1", cfg.system.n1}, {"n2", cfg.system.n2}, {"stencil", cfg.system.stencil}};
  return {{"command", command}, {"config_hash", cfg.hash}, {"system", sys}};
}

template <class T>
const T& payload(const std::optional<T>& section, const char* name) {
  if (!section) throw ConfigError(std::string("config: missing section ") + name);
  return *section;
}

GridFunction sample_expression(const GridPtr& grid, const std::string& text) {
  return GridFunction::sample(grid, compile_expression(text, grid->manifold()));
}

bool finite(const Eigen::VectorXcd& v) { return v.allFinite(); }

bool in_region(ManifoldKind kind, PhasePoint x, const RegionSpec& r) {
  if (kind == ManifoldKind::plane) return std::abs(plane_z(x) - plane_z(r.center)) <= r.radius;
  const double c = sphere_direction(x).dot(sphere_direction(r.center));
  return std::acos(std::clamp(c, -1.0, 1.0)) <= r.radius;
}

}  // namespace

bool Check::pass() const {
  if (!std::isfinite(defect)) return false;
  return lower_bound ? defect > tolerance : defect <= tolerance;
}

json check_json(const Check& c) {
  json j = {{"name", c.name},     {"defect", c.defect}, {"tolerance", c.tolerance},
            {"asserted", c.asserted}, {"pass", c.pass()}, {"kind", c.lower_bound ? "witness" : "bound"}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

void print_table(std::ostream& out, const std::vector<Check>& checks) {
  out << std::left << std::setw(30) << "identity" << std::setw(14) << "defect" << std::setw(12) << "tolerance"
      << "result\n";
  for (const Check& c : checks) {
    std::ostringstream d, t;
    d << std::scientific << std::setprecision(3) << c.defect;
    t << std::scientific << std::setprecision(1) << c.tolerance;
    const char* verdict = !c.asserted ? "report" : (c.pass() ? "PASS" : "FAIL");
    out << std::left << std::setw(30) << c.name << std::setw(14) << d.str() << std::setw(12) << t.str() << verdict
        << "\n";
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Degradation("cannot write " + path.string());
}

void write_json(const std::filesystem::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out) {
  const std::vector<Check> checks = verify_suite(cfg);
  json report = header(cfg, "verify");
  report["reports"] = json::array();
  std::vector<std::string> failed;
  for (const Check& c : checks) {
    report["reports"].push_back(check_json(c));
    if (c.asserted && !c.pass()) failed.push_back(c.name);
  }
  report["failed"] = failed;
  report["pass"] = failed.empty();
  write_json(out / "verify.json", report);
  print_table(std::cout, checks);
  for (const auto& name : failed) std::cerr << "identity failed: " << name << "\n";
  return failed.empty() ? kPass : kIdentityFailure;
}

int cmd_orderings(const RunConfig& cfg, const std::filesystem::path& out) {
  const OrderingsSpec& spec = payload(cfg.orderings, "orderings");
  if (cfg.system.kind != ManifoldKind::plane) throw ConfigError("orderings: needs a plane system");
  const Frame frame(cfg.system.coherent(), cfg.system.grid());
  const GridFunction f = sample_expression(frame.grid(), spec.observable);
  const Operator anti = quantize_stochastic(frame, f);
  const Operator weyl = quantize_s_ordered(frame, f, 0.0);
  const Operator normal = quantize_s_ordered(frame, f, 1.0);
  const Operator expected = quantize_weyl(frame, f);
  for (const Operator* m : {&anti, &weyl, &normal, &expected})
    if (!m->allFinite()) throw Degradation("orderings: non-finite quantization");

  const Eigen::Index levels = std::min<Eigen::Index>(spec.levels, frame.system().dim());
  std::ostringstream csv;
  csv << "n,antinormal,weyl,normal,expected\n";
  for (Eigen::Index n = 0; n < levels; ++n)
    csv << n << "," << format_double(anti(n, n).real()) << "," << format_double(weyl(n, n).real()) << ","
        << format_double(normal(n, n).real()) << "," << format_double(expected(n, n).real()) << "\n";
  write_text(out / "orderings.csv", csv.str());

  const double weyl_gap = defect_norm(weyl, expected, levels);
  const double spread = std::max(defect_norm(anti, weyl, levels), defect_norm(normal, weyl, levels));
  const Check check{"weyl_routes_agree", weyl_gap, cfg.tolerance("ordering"), true, false,
                    "heat-flow Weyl against the Wigner-operator route"};
  json report = header(cfg, "orderings");
  report["observable"] = spec.observable;
  report["levels"] = levels;
  report["ordering_spread"] = spread;
  report["reports"] = json::array({check_json(check)});
  report["pass"] = check.pass();
  write_json(out / "orderings.json", report);
  print_table(std::cout, {check});
  if (!check.pass()) std::cerr << "identity failed: weyl_routes_agree\n";
  return check.pass() ? kPass : kIdentityFailure;
}

int cmd_measure_sim(const RunConfig& cfg, const std::filesystem::path& out) {
  const MeasureSpec& spec = payload(cfg.measure, "measure");
  const Frame frame(cfg.system.coherent(), cfg.system.grid());
  const DensityMatrix rho = spec.state.build(frame.system());
  json report = header(cfg, "measure-sim");
  report["seed"] = spec.seed;
  report["n"] = spec.samples;

  MeasurementRecord record;
  if (spec.samples > 0) {
    record = sample_outcomes(frame, rho, spec.samples, spec.seed);
    report["acceptance_rate"] = record.acceptance_rate;
    report["envelope"] = record.envelope;
    report["proposal"] = record.proposal;
  }
  std::ostringstream csv;
  csv << "index,coord1,coord2\n";
  for (size_t k = 0; k < record.outcomes.size(); ++k)
    csv << k << "," << format_double(record.outcomes[k].c1) << "," << format_double(record.outcomes[k].c2) << "\n";
  write_text(out / "outcomes.csv", csv.str());

  const double sigmas = cfg.tolerance("sampling_sigmas");
  const double n = static_cast<double>(spec.samples);
  bool ok = true;
  report["regions"] = json::array();
  for (const RegionSpec& r : spec.regions) {
    const double p = disk_probability(frame.system(), rho, r.center, r.radius);
    const double holevo = holevo_probability(frame, rho, Region::disk(frame.grid(), r.center, r.radius));
    json entry = {{"center", {r.center.c1, r.center.c2}}, {"radius", r.radius}, {"probability", p},
                  {"holevo_probability", holevo}};
    if (spec.samples > 0) {
      const auto hits = std::count_if(record.outcomes.begin(), record.outcomes.end(),
                                      [&](PhasePoint x) { return in_region(cfg.system.kind, x, r); });
      const double empirical = static_cast<double>(hits) / n;
      // The floor keeps a region of probability 0 or 1 from demanding an exact count.
      const double sigma = std::max(std::sqrt(std::max(p * (1.0 - p), 0.0) / n), 1.0 / n);
      const bool pass = std::abs(empirical - p) <= sigmas * sigma;
      ok = ok && pass;
      entry["count"] = hits;
      entry["empirical"] = empirical;
      entry["sigma"] = sigma;
      entry["z_score"] = (empirical - p) / sigma;
      entry["pass"] = pass;
    }
    report["regions"].push_back(entry);
  }
  report["pass"] = ok;
  write_json(out / "measure.json", report);
  std::cout << "samples " << spec.samples << ", regions " << spec.regions.size() << ", " << (ok ? "PASS" : "FAIL")
            << "\n";
  if (!ok) std::cerr << "identity failed: sampling statistics\n";
  return ok ? kPass : kIdentityFailure;
}

namespace {

struct Evolution {
  std::string csv;
  GridFunction final_state;
  double max_drift = 0.0;
};

Evolution run_evolution(const EvolveSpec& spec, const GridPtr& grid, double dtau, int steps,
                        int every) {
  const GridFunction g = sample_expression(grid, spec.hamiltonian);
  std::vector<GridFunction> obs;
  for (const auto& text : spec.observables) obs.push_back(sample_expression(grid, text));
  GridFunction w = sample_expression(grid, spec.initial);
  const double mass0 = w.integrate().real();
  if (!std::isfinite(mass0) || mass0 == 0.0) throw Degradation("evolve: initial density has no mass");

  Evolution e;
  std::ostringstream csv;
  csv << "step,tau,mass,energy";
  for (const auto& text : spec.observables) csv << ",mean(" << text << ")";
  csv << "\n";
  for (int step = 0; step <= steps; ++step) {
    if (step > 0) w = liouville_step(w, g, dtau);
    if (!finite(w.values)) throw Degradation("evolve: non-finite density at step " + std::to_string(step));
    const double mass = w.integrate().real();
    e.max_drift = std::max(e.max_drift, std::abs(mass - mass0) / std::abs(mass0));
    if (step % every != 0 && step != steps) continue;
    csv << step << "," << format_double(step * dtau) << "," << format_double(mass) << ","
        << format_double((w * g).integrate().real() / mass);
    for (const auto& o : obs) csv << "," << format_double((w * o).integrate().real() / mass);
    csv << "\n";
  }
  e.csv = csv.str();
  e.final_state = w;
  return e;
}

}  // namespace

int cmd_evolve(const RunConfig& cfg, const std::filesystem::path& out) {
  const EvolveSpec& spec = payload(cfg.evolve, "evolve");
  const GridPtr grid = cfg.system.grid();
  const Evolution main = run_evolution(spec, grid, spec.dtau, spec.steps, spec.every);
  write_text(out / "evolve.csv", main.csv);

  json report = header(cfg, "evolve");
  report["dtau"] = spec.dtau;
  report["steps"] = spec.steps;
  report["max_relative_mass_drift"] = main.max_drift;

  if (spec.tracer) {
    const PointFunction h = compile_expression(spec.hamiltonian, grid->manifold());
    const ScalarField field{[h](PhasePoint x) { return h(x).real(); }, {}};
    const PhasePoint end = canonical_flow_point(grid->manifold(), *spec.tracer, field, spec.dtau * spec.steps, spec.dtau);
    report["tracer"] = {{"start", {spec.tracer->c1, spec.tracer->c2}}, {"end", {end.c1, end.c2}}};
  }

  if (spec.richardson) {
    // Same grid at dtau, dtau/2, dtau/4: the spatial error cancels in the differences.
    const Evolution half = run_evolution(spec, grid, spec.dtau / 2, 2 * spec.steps, 2 * spec.steps);
    const Evolution quarter = run_evolution(spec, grid, spec.dtau / 4, 4 * spec.steps, 4 * spec.steps);
    const double e1 = max_defect(main.final_state, half.final_state);
    const double e2 = max_defect(half.final_state, quarter.final_state);
    const double ratio = e1 / e2;
    report["richardson"] = {{"coarse_gap", e1}, {"fine_gap", e2}, {"ratio", ratio},
                            {"observed_order", std::log2(ratio)}};
  }

  const Check mass{"mass_conservation", main.max_drift, cfg.tolerance("mass_drift"), true, false, ""};
  report["reports"] = json::array({check_json(mass)});
  report["pass"] = mass.pass();
  write_json(out / "evolve.json", report);
  print_table(std::cout, {mass});
  if (!mass.pass()) {
    std::cerr << "numeric degradation: mass drift " << main.max_drift << "\n";
    return kDegraded;
  }
  return kPass;
}

}  // namespace csq::cli
