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

#include <algorithm>
#include <cmath>
#include <optional>

#include "commands.hpp"
#include "csq/algebra.hpp"
#include "csq/measure.hpp"

namespace csq::cli {

namespace {

using Block = std::optional<Eigen::Index>;

double geodesic(PhasePoint a, PhasePoint b) {
  const double c = std::cos(a.c1) * std::cos(b.c1) + std::sin(a.c1) * std::sin(b.c1) * std::cos(a.c2 - b.c2);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

GridFunction random_function(const GridPtr& grid, Xoshiro256& rng) {
  Eigen::VectorXcd v(grid->size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
  return {grid, v};
}

Complex inner(const GridFunction& a, const GridFunction& b) {
  return (a.grid->weights().cast<Complex>().array() * a.values.conjugate().array() * b.values.array()).sum();
}

class Suite {
 public:
  explicit Suite(const RunConfig& cfg) : cfg_(cfg) {}

  void add(const std::string& name, const std::string& tol_key, double defect, std::string note = {}) {
    Check c{name, defect, cfg_.tolerance(tol_key), true, false, std::move(note)};
    checks_.push_back(std::move(c));
  }
  void witness(const std::string& name, double defect) {
    checks_.push_back({name, defect, cfg_.tolerance("witness"), true, true, "must exceed the tolerance"});
  }
  void report(const std::string& name, const std::string& tol_key, double defect, std::string note) {
    checks_.push_back({name, defect, cfg_.tolerance(tol_key), false, false, std::move(note)});
  }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  const RunConfig& cfg_;
  std::vector<Check> checks_;
};

// Frame-level identities: kernel, projector, measures, instruments, quantization.
void frame_checks(const RunConfig& cfg, const Frame& frame, Suite& s) {
  const GridPtr& grid = frame.grid();
  const CoherentStateSystem& sys = frame.system();
  const bool plane = grid->kind() == ManifoldKind::plane;
  const Eigen::Index dim = sys.dim();
  const Eigen::Index block = std::min<Eigen::Index>(cfg.verify->block, dim);
  const Block low = plane ? Block(block) : Block();
  Xoshiro256 rng(cfg.verify->seed);

  s.add("resolution_of_identity", "resolution_of_identity",
        defect_norm(resolution_of_identity(frame), Operator::Identity(dim, dim), low));

  // Reproduction of kernel columns and of embedded low-level states.
  const PhasePoint y0 = plane ? plane_point(Complex(0.5, -0.3)) : PhasePoint{1.0, 2.0};
  const GridFunction column = GridFunction::sample(grid, [&](PhasePoint x) { return sys.kernel(x, y0); });
  double reproduce = max_defect(apply_P0(frame, column), column);
  for (Eigen::Index n = 0; n < block; ++n) {
    StateVector v = StateVector::Zero(dim);
    v(n) = 1.0;
    const GridFunction ev = embed_state(frame, v);
    reproduce = std::max(reproduce, max_defect(apply_P0(frame, ev), ev));
  }
  s.add("reproducing_kernel", "reproducing_kernel", reproduce);

  const GridFunction psi = random_function(grid, rng);
  const GridFunction psi2 = random_function(grid, rng);
  const GridFunction p1 = apply_P0(frame, psi);
  const double scale = std::max(1.0, p1.values.cwiseAbs().maxCoeff());
  s.add("projector_idempotence", "projector", max_defect(apply_P0(frame, p1), p1) / scale);
  const double norms = std::sqrt(inner(psi, psi).real() * inner(psi2, psi2).real());
  s.add("projector_self_adjoint", "projector",
        std::abs(inner(psi, apply_P0(frame, psi2)) - inner(p1, psi2)) / norms);
  s.add("kernel_positive", "kernel_positive", std::max(0.0, -frame.kernel_min_weighted_eigenvalue()),
        "negated smallest eigenvalue of the weighted kernel");

  // Measures. Regions sit where the low levels live.
  const PhasePoint centre = plane ? plane_point(Complex(0.3, -0.2)) : PhasePoint{1.0, 0.3};
  const double radius = plane ? 1.0 : 0.8;
  const Region cap = Region::disk(grid, centre, radius);
  const Operator m = css_measure(frame, cap);
  const Eigen::VectorXcd chi = spectral_measure(cap).symbol().values;
  s.add("spectral_projectivity", "projector", (chi.cwiseProduct(chi) - chi).cwiseAbs().maxCoeff());
  s.witness("css_not_projective", defect_norm(Operator(m * m), m, low));

  double css_cov = 0.0;
  double quant_cov = 0.0;
  if (plane) {
    // The region boundary sits well outside the asserted block.
    const Complex alpha(0.5, -0.25);
    const double r = 0.7 * grid->manifold().radius;
    const Block inner_block = Block(std::max<Eigen::Index>(1, block / 2));
    const Region disk = Region::disk(grid, plane_point(0.0), r);
    const Region moved = Region::disk(grid, plane_point(alpha), r);
    css_cov = defect_norm(conjugate_by(sys.group_action(GroupElement::translation(alpha)), css_measure(frame, disk)),
                          css_measure(frame, moved), inner_block);
    const PointFunction bump = [](PhasePoint x) { return std::exp(-0.5 * std::norm(plane_z(x) - Complex(0.2, 0.1))); };
    quant_cov = covariance_defect_quantize(frame, bump, GroupElement::translation(alpha), low);
  } else {
    // Rotations about the pole by whole phi steps map nodes to nodes.
    for (int k : {1, 3}) {
      const GroupElement a = GroupElement::rotation(0.0, 2.0 * M_PI * k / static_cast<double>(grid->n2()));
      const Region moved = Region::from_predicate(grid, [&](PhasePoint x) { return geodesic(a.act_inverse(x), centre) <= radius; });
      css_cov = std::max(css_cov, defect_norm(conjugate_by(sys.group_action(a), m), css_measure(frame, moved)));
    }
    const PointFunction poly = [](PhasePoint x) {
      const double c = std::cos(x.c1), sn = std::sin(x.c1);
      return Complex(c * c + 0.3 * sn * std::cos(x.c2), 0.5 * sn * std::sin(x.c2) * c);
    };
    for (const auto& rot : {GroupElement::rotation(0.9, 2.1), GroupElement::rotation(2.5, -1.0)})
      quant_cov = std::max(quant_cov, covariance_defect_quantize(frame, poly, rot));
  }
  s.add("css_covariance", "css_covariance", css_cov);
  s.add("quantize_covariance", "quantize_covariance", quant_cov);
  if (plane) {
    const DeviceFunction eta = cfg.device.kind == "gaussian" ? cfg.device.build(cfg.system) : DeviceFunction::gaussian(0.5);
    const PointFunction bump = [](PhasePoint x) { return std::exp(-0.5 * std::norm(plane_z(x) - Complex(0.2, 0.1))); };
    s.add("smear_covariance", "smear_covariance",
          covariance_defect_pi_eta(grid, bump, eta, GroupElement::translation(Complex(0.4, 0.3)), grid->interior(0.4)));
  }

  // Instruments on a state concentrated inside the truncation.
  const DensityMatrix rho = DensityMatrix::pure(sys.vector(plane ? plane_point(Complex(0.3, 0.2)) : PhasePoint{0.7, 0.4}));
  s.add("instrument_normalization", "instrument_normalization",
        std::abs(instrument_region(frame, rho, Region::all(grid)).trace() - 1.0));
  s.add("instrument_trace", "instrument_trace",
        std::abs(instrument_region(frame, rho, cap).trace() - (rho.op() * m).trace()));
  s.add("holevo_additivity", "holevo_additivity",
        std::abs(holevo_probability(frame, rho, cap) + holevo_probability(frame, rho, cap.complement()) -
                 holevo_probability(frame, rho, Region::all(grid))));

  const GridFunction smooth = GridFunction::sample(grid, [&](PhasePoint x) {
    return plane ? Complex(std::exp(-0.3 * std::norm(plane_z(x))) * x.c1) : Complex(std::cos(x.c1));
  });
  s.add("compression", "compression", compression_defect(frame, smooth));

  if (plane) return;

  // Star products on the sphere with degree <= 2 symbols.
  const auto delta = DeviceFunction::delta();
  const GridFunction f = GridFunction::sample(grid, [](PhasePoint x) { return std::cos(x.c1) * std::sin(x.c1) * std::cos(x.c2) + 0.2; });
  const GridFunction g = GridFunction::sample(grid, [](PhasePoint x) { return std::pow(std::sin(x.c1), 2) * std::sin(2 * x.c2) - std::cos(x.c1); });
  const DeviceFunction eta = cfg.device.build(cfg.system);
  const Operator fg = star_product_operators(frame, f, g, eta);
  s.add("star_homomorphism", "star_homomorphism",
        defect_norm(quantize_stochastic(frame, star_product_functions(frame, f, g, eta)), fg));
  const Operator through = apply_instrument(frame, instrument_f(frame, rho, smear(g, eta)), smear(f, eta));
  s.add("star_trace", "star_trace", std::abs((rho.op() * fg).trace() - through.trace()));
  s.witness("star_noncommutative", defect_norm(fg, star_product_operators(frame, g, f, eta)));
}

// Finite-difference identities of the Hamiltonian calculus, on a grid fine
// enough for the stencils.
void flow_checks(const RunConfig& cfg, const Frame& frame, Suite& s) {
  const bool plane = cfg.system.kind == ManifoldKind::plane;
  const GridPtr grid = plane ? frame.grid()
                             : build_sphere_grid(cfg.system.spin, std::max(cfg.system.n1, 40),
                                                 std::max(cfg.system.n2, 80), cfg.system.stencil);
  const std::vector<bool> inside = grid->interior(0.4);
  const double j = cfg.system.spin.value();
  const auto sample = [&](auto fn) { return GridFunction::sample(grid, fn); };

  GridFunction f, g, h, psi;
  if (plane) {
    g = sample([](PhasePoint x) { return Complex(0.5 * x.c1 * x.c1); });
    f = sample([](PhasePoint x) { return Complex(0.5 * x.c2 * x.c2); });
    h = sample([](PhasePoint x) { return std::exp(-0.2 * std::norm(plane_z(x))) * x.c2; });
    psi = sample([](PhasePoint x) { return std::exp(-0.5 * std::norm(plane_z(x) - 0.4)); });
  } else {
    g = sample([&](PhasePoint x) { return Complex(j * std::cos(x.c1)); });
    f = sample([&](PhasePoint x) { return Complex(j * std::sin(x.c1) * std::cos(x.c2)); });
    h = sample([](PhasePoint x) { return Complex(std::sin(x.c1) * std::sin(x.c2) + 0.5 * std::cos(x.c1)); });
    psi = sample([](PhasePoint x) { return Complex(std::exp(std::cos(x.c1) - 1.0) * (1.0 + 0.3 * std::sin(x.c1) * std::cos(x.c2))); });
  }
  const GridFunction zero = GridFunction::constant(grid, 0.0);

  s.add("poisson_antisymmetry", "poisson", max_defect(poisson_bracket(f, g), Complex(-1.0) * poisson_bracket(g, f)));
  s.add("poisson_leibniz", "poisson",
        max_defect(poisson_bracket(f * g, h) - (f * poisson_bracket(g, h) + poisson_bracket(f, h) * g), zero, inside));
  s.add("poisson_jacobi", "poisson",
        max_defect(poisson_bracket(poisson_bracket(f, g), h) + poisson_bracket(poisson_bracket(g, h), f) +
                       poisson_bracket(poisson_bracket(h, f), g),
                   zero, inside));
  s.add("divergence", "divergence", divergence_defect(h, 0.4));

  const auto xg = lift_X(g), xf = lift_X(f);
  s.add("field_commutator", "commutator", max_defect(xg(xf(psi)) - xf(xg(psi)), lift_X(poisson_bracket(g, f))(psi), inside));
  s.add("mixed_commutator", "commutator", max_defect(xg(h * psi) - h * xg(psi), poisson_bracket(g, h) * psi, inside));
  const DeviceFunction eta = cfg.device.kind == "delta" ? DeviceFunction::gaussian(0.3) : cfg.device.build(cfg.system);
  const auto xge = lift_X_eta(g, eta), xfe = lift_X_eta(f, eta);
  s.add("field_commutator_eta", "commutator",
        max_defect(xge(xfe(psi)) - xfe(xge(psi)), lift_X(eta_poisson_bracket(f, g, eta))(psi), inside));
  const GridFunction he = smear(h, eta);
  s.add("mixed_commutator_eta", "commutator",
        max_defect(xge(he * psi) - he * xge(psi), eta_poisson_bracket(h, g, eta) * psi, inside));
  s.add("transformation_law", "transformation_law", transformation_law_defect(h, g, 1e-2, psi, inside),
        "one RK4 step, dtau = 0.01");

  // Compressed generators: asserted only where the embedded subspace is invariant.
  const Frame qframe(frame.system(), grid);
  const QCommutatorReport r = q_commutator_defect(qframe, g, f, DeviceFunction::delta(), cfg.tolerance("q_commutator"));
  const std::string premise = "invariance defect " + std::to_string(r.premise_defect);
  if (r.premise_holds) {
    s.add("q_commutator", "q_commutator", r.q_q.defect, premise);
    s.add("q_multiplication_commutator", "q_commutator", r.q_m.defect, premise);
  } else {
    s.report("q_commutator", "q_commutator", r.q_q.defect, premise + ", premise fails, not asserted");
    s.report("q_multiplication_commutator", "q_commutator", r.q_m.defect, premise + ", premise fails, not asserted");
  }
}

}  // namespace

std::vector<Check> verify_suite(const RunConfig& cfg) {
  Frame frame(cfg.system.coherent(), cfg.system.grid());
  if (cfg.kernel_scale != 1.0) frame = frame.with_kernel_scale(cfg.kernel_scale);
  Suite s(cfg);
  frame_checks(cfg, frame, s);
  flow_checks(cfg, frame, s);
  return s.take();
}

}  // namespace csq::cli
