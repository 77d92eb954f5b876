#include <doctest.h>

#include <cmath>

#include "espm/cell_model.hpp"
#include "espm/transport.hpp"
#include "support.hpp"

using namespace espm;

namespace {

constexpr double kC3 = 12.4 / 3.0;

Vector porosity(const CellParameters& p, const AxialGrid& g) {
  return cell_porosity(g, p.initial_porosity(Electrode::Negative), p.initial_porosity(Electrode::Positive), p);
}

// Electrolyte profile after `t_end` s of constant current from uniform c_e0.
Vector electrolyte_profile(const CellParameters& p, const Mesh& mesh, double current, double t_end, double dt) {
  const AxialGrid g = AxialGrid::build(p, mesh);
  const Vector eps = porosity(p, g);
  const auto J = pore_wall_fluxes(current, p);
  Vector c = Vector::Constant(g.size(), p.electrolyte.c_e0);
  for (double t = 0.0; t < t_end - 1e-9; t += dt) c = advance_electrolyte(c, eps, J, p, g, dt);
  return c;
}

// Averages each group of `factor` fine cells onto the coarse grid; cells
// within a region are uniform, so this is the exact coarse cell average.
Vector restrict_to_coarse(const Vector& fine, int factor) {
  Vector coarse(fine.size() / factor);
  for (Eigen::Index i = 0; i < coarse.size(); ++i) coarse(i) = fine.segment(i * factor, factor).mean();
  return coarse;
}

Mesh axial_mesh(int n) {
  Mesh m;
  m.N_x_n = m.N_x_s = m.N_x_p = n;
  return m;
}

}  // namespace

TEST_SUITE("transport") {
  TEST_CASE("pore-wall fluxes") {
    const auto& p = test::default_config().params;
    const auto zero = pore_wall_fluxes(0.0, p);
    CHECK(zero.J_n == 0.0);
    CHECK(zero.J_p == 0.0);
    CHECK(zero.J_s == 0.0);
    for (double I : {kC3, -2.0, 37.2}) {
      const auto J = pore_wall_fluxes(I, p);
      CHECK(J.J_s == 0.0);
      if (I > 0) {
        CHECK(J.J_n > 0.0);
        CHECK(J.J_p < 0.0);
      }
      CHECK(std::abs(p.L_n * J.J_n + p.L_p * J.J_p) <= 1e-15 * std::abs(p.L_n * J.J_n));
      CHECK(J.J_n == doctest::Approx(I / (p.A_cell * p.F * p.L_n)));
    }
  }

  TEST_CASE("electrolyte rhs: equilibrium and discrete conservation") {
    const auto& p = test::default_config().params;
    const Mesh mesh;
    const AxialGrid g = AxialGrid::build(p, mesh);
    const Vector eps = porosity(p, g);
    Vector c = Vector::Constant(g.size(), p.electrolyte.c_e0);
    CHECK(electrolyte_mass_rhs(c, eps, pore_wall_fluxes(0.0, p), p, g).cwiseAbs().maxCoeff() == 0.0);

    for (int i = 0; i < g.size(); ++i) c(i) = 1000.0 + 150.0 * std::sin(0.7 * i);
    const auto J = pore_wall_fluxes(kC3, p);
    const Vector rhs = electrolyte_mass_rhs(c, eps, J, p, g);
    const double net = (eps.array() * rhs.array() * g.dx.array()).sum();
    const double scale = (eps.array() * rhs.array().abs() * g.dx.array()).sum();
    CHECK(std::abs(net) <= 1e-12 * scale);

    Vector bad = c;
    bad(3) = 0.0;
    CHECK_THROWS_AS(electrolyte_mass_rhs(bad, eps, J, p, g), NumericalError);
  }

  TEST_CASE("electrolyte inventory is conserved over 1000 steps") {
    const auto& p = test::default_config().params;
    const AxialGrid g = AxialGrid::build(p, Mesh{});
    const Vector eps = porosity(p, g);
    for (double I : {kC3, 12.4, -6.2}) {
      const auto J = pore_wall_fluxes(I, p);
      Vector c = Vector::Constant(g.size(), p.electrolyte.c_e0);
      const double before = electrolyte_inventory(c, eps, g);
      for (int k = 0; k < 1000; ++k) c = advance_electrolyte(c, eps, J, p, g, 1.0);
      CHECK(std::abs(electrolyte_inventory(c, eps, g) - before) <= 1e-10 * before);
      CHECK(c.maxCoeff() > c.minCoeff());
    }
  }

  TEST_CASE("electrolyte profile: doubling N_x changes the t = 100 s profile by < 1%") {
    const auto& p = test::default_config().params;
    const Vector coarse = electrolyte_profile(p, axial_mesh(10), 12.4, 100.0, 0.5);
    const Vector fine = restrict_to_coarse(electrolyte_profile(p, axial_mesh(20), 12.4, 100.0, 0.5), 2);
    const Vector dev_c = coarse.array() - p.electrolyte.c_e0;
    CHECK((coarse - fine).norm() / coarse.norm() < 0.01);
    // The perturbation itself, not just the 1000 mol/m^3 baseline, must agree.
    CHECK((coarse - fine).norm() / dev_c.norm() < 0.05);
  }

  TEST_CASE("electrolyte steady profile converges at second order in space") {
    const auto& p = test::default_config().params;
    // Reach the discrete steady state; backward Euler converges to it for any dt.
    auto steady = [&](int n) { return electrolyte_profile(p, axial_mesh(n), 12.4, 4000.0, 20.0); };
    const Vector c5 = steady(5), c10 = steady(10), c20 = steady(20), c40 = steady(40);
    const double e1 = (c5 - restrict_to_coarse(c10, 2)).norm();
    const double e2 = (restrict_to_coarse(c10, 2) - restrict_to_coarse(c20, 4)).norm();
    const double e3 = (restrict_to_coarse(c20, 4) - restrict_to_coarse(c40, 8)).norm();
    CAPTURE(e1);
    CAPTURE(e2);
    CAPTURE(e3);
    CHECK(std::log2(e1 / e2) >= 1.8);
    CHECK(std::log2(e2 / e3) >= 1.8);
  }

  TEST_CASE("electrolyte potential: uniform concentration") {
    const auto& p = test::default_config().params;
    const AxialGrid g = AxialGrid::build(p, Mesh{});
    const Vector eps = porosity(p, g);
    const Vector c = Vector::Constant(g.size(), p.electrolyte.c_e0);

    const auto rest = solve_electrolyte_potential(c, eps, pore_wall_fluxes(0.0, p), p, g);
    CHECK(rest.phi_e.cwiseAbs().maxCoeff() == 0.0);
    CHECK(rest.delta_phi_e == 0.0);

    const auto sol = solve_electrolyte_potential(c, eps, pore_wall_fluxes(kC3, p), p, g);
    CHECK(sol.phi_e(0) == 0.0);
    CHECK(sol.delta_phi_e == 0.0);
    // Ohmic limit: the collector-to-collector drop equals I R_el, up to the
    // quadratic drop inside the half cells next to each collector.
    const double drop = sol.phi_e(0) - sol.phi_e(g.size() - 1);
    CHECK(drop == doctest::Approx(kC3 * sol.R_el).epsilon(0.01));
    for (int i = 1; i < g.size(); ++i) CHECK(sol.phi_e(i) < sol.phi_e(i - 1));
  }

  TEST_CASE("electrolyte potential: log-ratio diffusion term") {
    const auto& p = test::default_config().params;
    const AxialGrid g = AxialGrid::build(p, Mesh{});
    Vector c = Vector::Constant(g.size(), 800.0);
    c(g.size() - 1) = 800.0 * std::exp(1.0);
    CHECK(diffusion_potential(c, p) == doctest::Approx(2.0 * p.R_gas * p.T * (1.0 - p.t_plus) / p.F));
  }

  TEST_CASE("electrolyte potential rejects degenerate conductivity") {
    CellParameters p = test::default_config().params;
    p.electrolyte.kappa_coeffs = {0.0};
    const AxialGrid g = AxialGrid::build(p, Mesh{});
    const Vector c = Vector::Constant(g.size(), 1000.0);
    CHECK_THROWS_AS(solve_electrolyte_potential(c, porosity(p, g), pore_wall_fluxes(1.0, p), p, g), NumericalError);
  }

  TEST_CASE("Arrhenius solid diffusivity") {
    CellParameters p = test::default_config().params;
    p.E_a_Ds_p = 3e4;
    p.T = p.T_ref;
    CHECK(arrhenius_diffusivity(p.T, p, Electrode::Positive) == p.D_s_ref_p);
    CHECK(arrhenius_diffusivity(320.0, p, Electrode::Positive) > p.D_s_ref_p);
    CHECK(arrhenius_diffusivity(280.0, p, Electrode::Positive) < p.D_s_ref_p);
    p.E_a_Ds_n = 0.0;
    CHECK(arrhenius_diffusivity(250.0, p, Electrode::Negative) == p.D_s_ref_n);
    const double expected = p.D_s_ref_p * std::exp(-3e4 / p.R_gas * (1.0 / 320.0 - 1.0 / p.T_ref));
    CHECK(arrhenius_diffusivity(320.0, p, Electrode::Positive) == doctest::Approx(expected).epsilon(1e-14));
  }

  TEST_CASE("effective coefficients follow the Bruggeman power law") {
    CellParameters p = test::default_config().params;
    const double c = 1200.0;
    const auto full = effective_coefficients(c, 1.0, p);
    CHECK(full.D_eff == electrolyte_diffusivity(c, p));
    p.brugg = 1.5;
    const auto quarter = effective_coefficients(c, 0.25, p);
    CHECK(quarter.D_eff == doctest::Approx(0.125 * electrolyte_diffusivity(c, p)).epsilon(1e-14));
    double prev = 0.0;
    for (double eps = 0.05; eps <= 1.0; eps += 0.05) {
      const double k = effective_coefficients(c, eps, p).kappa_eff;
      CHECK(k > prev);
      prev = k;
    }
  }

  TEST_CASE("solid diffusion: zero flux keeps a uniform profile") {
    const SphericalGrid g = SphericalGrid::uniform(5e-6, 20);
    const Vector c = Vector::Constant(20, 12000.0);
    CHECK(solid_diffusion_rhs(c, 0.0, 1e-14, g).cwiseAbs().maxCoeff() == 0.0);
    CHECK((advance_solid(c, 0.0, 1e-14, g, 10.0) - c).cwiseAbs().maxCoeff() <= 1e-9);
  }

  TEST_CASE("solid diffusion: average changes by 3 q dt / R") {
    const double R = 5.16e-6, D = 1e-13, q = -3e-6, dt = 7.0;
    const SphericalGrid g = SphericalGrid::uniform(R, 20);
    const Vector c = Vector::Constant(20, 20000.0);
    const Vector next = advance_solid(c, q, D, g, dt);
    CHECK(average_concentration(next, g) - average_concentration(c, g) ==
          doctest::Approx(3.0 * q * dt / R).epsilon(1e-9));
    const Vector rhs = solid_diffusion_rhs(c, q, D, g);
    CHECK(rhs.dot(g.volume) / g.total_volume() == doctest::Approx(3.0 * q / R).epsilon(1e-12));
  }

  TEST_CASE("solid inventory changes by the integrated surface flux") {
    const auto& p = test::default_config().params;
    const SphericalGrid g = SphericalGrid::uniform(p.R_n, 20);
    Vector c = Vector::Constant(20, 25000.0);
    const double start = c.dot(g.volume);
    double injected = 0.0;
    for (int k = 0; k < 3000; ++k) {
      const double q = -4e-6 * (1.0 + 0.5 * std::sin(0.01 * k));
      c = advance_solid(c, q, p.D_s_ref_n, g, 1.0);
      injected += q * g.surface_area() * 1.0;
    }
    CHECK(std::abs(c.dot(g.volume) - start - injected) <= 1e-10 * start);
  }

  TEST_CASE("solid diffusion converges at second order against the quasi-steady profile") {
    // Constant surface flux q: after the transient, c = c0 + 3 q t / R + q/D (r^2/(2R) - 3R/10).
    // The profile grows linearly in time, which backward Euler integrates exactly.
    const double R = 1.0, D = 1.0, q = 1.0, dt = 0.01, t_end = 3.0;
    auto error = [&](int n) {
      const SphericalGrid g = SphericalGrid::uniform(R, n);
      Vector c = Vector::Zero(n);
      for (int k = 0; k < static_cast<int>(t_end / dt + 0.5); ++k) c = advance_solid(c, q, D, g, dt);
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const double r0 = i * g.dr, r1 = (i + 1) * g.dr;
        // Exact shell average of r^2 is 3/5 (r1^5 - r0^5)/(r1^3 - r0^3).
        const double r2_avg = 0.6 * (std::pow(r1, 5) - std::pow(r0, 5)) / (std::pow(r1, 3) - std::pow(r0, 3));
        const double exact = 3.0 * q * t_end / R + q / D * (r2_avg / (2.0 * R) - 0.3 * R);
        sum += (c(i) - exact) * (c(i) - exact) * g.volume(i);
      }
      return std::sqrt(sum / g.total_volume());
    };
    const double e10 = error(10), e20 = error(20), e40 = error(40);
    CAPTURE(e10);
    CAPTURE(e20);
    CAPTURE(e40);
    CHECK(std::log2(e10 / e20) >= 1.8);
    CHECK(std::log2(e20 / e40) >= 1.8);
  }

  TEST_CASE("anode surface depletes at the start of a discharge") {
    const Config& cfg = test::default_config();
    CellParameters p = test::inert_parameters();
    const CellModel model(p, cfg.mesh);
    CellState s = model.initial_state(0.8);
    const double before = s.c_s_surf_n;
    model.advance(s, kC3, 1.0);
    CHECK(s.c_s_surf_n < before);
    const double q = anode_surface_flux(kC3, 0.0, 0.0, s.a_t_n, p);
    CHECK(q < 0.0);
    CHECK(cathode_surface_flux(kC3, s.a_t_p, p) > 0.0);
  }
}
