#include <doctest.h>

#include <cmath>

#include "espm/aging.hpp"
#include "espm/cell_model.hpp"
#include "lam_oracle.hpp"
#include "support.hpp"

using namespace espm;

TEST_SUITE("aging") {
  TEST_CASE("SEI current density") {
    CellParameters p = test::default_config().params;
    p.k_f = 1e-12;
    const double a = p.specific_area(Electrode::Negative);
    const double j = sei_current_density(a, 0.15, -0.01, 0.002, 4.0, p);
    CHECK(j < 0.0);
    CHECK(sei_current_density(2.0 * a, 0.15, -0.01, 0.002, 4.0, p) == doctest::Approx(2.0 * j).epsilon(1e-14));
    // Raising the driving force by RT/(alpha F) divides the magnitude by e.
    const double step = p.R_gas * p.T / (p.alpha * p.F);
    CHECK(sei_current_density(a, 0.15 + step, -0.01, 0.002, 4.0, p) == doctest::Approx(j / std::exp(1.0)).epsilon(1e-12));
    CellParameters doubled = p;
    doubled.c_solv_surf *= 2.0;
    CHECK(sei_current_density(a, 0.15, -0.01, 0.002, 4.0, doubled) == doctest::Approx(2.0 * j).epsilon(1e-14));
    p.k_f = 0.0;
    CHECK(sei_current_density(a, 0.15, -0.01, 0.002, 4.0, p) == 0.0);
  }

  TEST_CASE("plating current density") {
    CellParameters p = test::default_config().params;
    p.k_f = 1e-12;
    p.i0_pl = 1e-5;
    const double a = p.specific_area(Electrode::Negative);
    const double j = plating_current_density(a, 0.1, 0.0, 0.0, 4.0, p);
    CHECK(j < 0.0);
    // Common exponential: the plating/SEI ratio does not depend on potential.
    const double r1 = j / sei_current_density(a, 0.1, 0.0, 0.0, 4.0, p);
    const double r2 = plating_current_density(a, -0.2, 0.05, 0.01, -4.0, p) /
                      sei_current_density(a, -0.2, 0.05, 0.01, -4.0, p);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
    // Lower driving force (charging pushes Phi_s,n down) increases plating.
    CHECK(std::abs(plating_current_density(a, 0.02, 0.0, 0.0, -4.0, p)) > std::abs(j));
    p.i0_pl = 0.0;
    CHECK(plating_current_density(a, 0.1, 0.0, 0.0, 4.0, p) == 0.0);
  }

  TEST_CASE("species and film rates") {
    CellParameters p = test::default_config().params;
    const double F = p.F;
    SUBCASE("unit plug-in") {
      const auto r = species_and_film_rates(-2.0 * F, 0.0, 1.0, p);
      CHECK(r.dc_SEI_dt == doctest::Approx(1.0));
      CHECK(r.dL_SEI_dt == doctest::Approx(p.M_SEI / p.rho_SEI));
      CHECK(r.dc_Li_dt == 0.0);
    }
    SUBCASE("beta = 1 routes all plated lithium into SEI") {
      p.beta = 1.0;
      const auto r = species_and_film_rates(0.0, -3.0, 2.0, p);
      CHECK(r.dc_Li_dt == 0.0);
      CHECK(r.dc_SEI_dt == doctest::Approx(3.0 / (2.0 * F)));
    }
    SUBCASE("beta = 0 leaves SEI fed by j_SEI only") {
      p.beta = 0.0;
      const auto r = species_and_film_rates(-5.0, -3.0, 2.0, p);
      CHECK(r.dc_SEI_dt == doctest::Approx(5.0 / (2.0 * F)));
      CHECK(r.dc_Li_dt == doctest::Approx(3.0 / (2.0 * F)));
    }
    SUBCASE("rates are nonnegative for cathodic currents and add up to dL_film") {
      const auto r = species_and_film_rates(-7.0, -2.0, 3.0, p);
      CHECK(r.dc_SEI_dt >= 0.0);
      CHECK(r.dc_Li_dt >= 0.0);
      const double film = (r.dc_SEI_dt * p.M_SEI / p.rho_SEI + r.dc_Li_dt * p.M_Li / p.rho_Li) / 3.0;
      CHECK(r.dL_SEI_dt + r.dL_Li_dt == doctest::Approx(film).epsilon(1e-14));
    }
  }

  TEST_CASE("film resistance") {
    const auto& p = test::default_config().params;
    const double a = p.specific_area(Electrode::Negative);
    CHECK(film_resistance(0.0, a, p) == 0.0);
    const double ratio = 0.085;  // L_SEI / kappa_SEI, ohm m^2
    CHECK(film_resistance(ratio * p.kappa_SEI, a, p) == doctest::Approx(ratio / (a * p.A_cell * p.L_n)).epsilon(1e-14));
    CHECK(film_resistance(1e-8, 0.5 * a, p) == doctest::Approx(2.0 * film_resistance(1e-8, a, p)).epsilon(1e-14));
    CHECK(film_resistance(2e-8, a, p) == doctest::Approx(2.0 * film_resistance(1e-8, a, p)).epsilon(1e-14));
  }

  TEST_CASE("LAM rates") {
    CellParameters p = test::default_config().params;
    CellState s = CellModel(p, Mesh{}).initial_state(1.0);
    auto r = lam_rates(s, p, 1e6);
    CHECK(r.a_f_p == 0.0);
    CHECK(r.da_ina_n_dt == 0.0);

    p.kprime_n = 2e-10;
    p.betaprime_n = 1e-9;
    r = lam_rates(s, p, 1e6);
    const double a = p.specific_area(Electrode::Negative);
    CHECK(r.a_f_n == doctest::Approx(a * 2e-10 * 1e6));
    CHECK(r.da_ina_n_dt == doctest::Approx(1e-9 * (a + r.a_f_n)));
    CHECK(lam_rates(s, p, 2e6).a_f_n == doctest::Approx(2.0 * r.a_f_n));
  }

  TEST_CASE("LAM integrator matches the closed form") {
    const double a = 3.0 / 5.16e-6;
    SUBCASE("kprime = 0 decays exponentially") {
      const double b = 5e-9;
      double a_ina = 0.0, t = 0.0;
      const double dt = 5400.0;
      for (int k = 0; k < 2000; ++k, t += dt) a_ina = advance_inactive_area(a, 0.0, b, a_ina, t, dt);
      const double a_t = total_area(a, fracture_area(a, 0.0, t), a_ina);
      CHECK(a_t == doctest::Approx(a * std::exp(-b * t)).epsilon(1e-6));
    }
    SUBCASE("kprime = betaprime keeps the area constant") {
      const double k = 3e-9;
      double a_ina = 0.0, t = 0.0;
      const double dt = 1000.0;
      for (int i = 0; i < 10000; ++i, t += dt) {
        a_ina = advance_inactive_area(a, k, k, a_ina, t, dt);
        CHECK(std::abs(total_area(a, fracture_area(a, k, t + dt), a_ina) - a) <= 1e-9 * a);
      }
    }
    SUBCASE("reference corners") {
      for (const auto& c : test::kLamCorners) {
        double a_ina = 0.0, t = 0.0, worst = 0.0;
        const double dt = 1000.0;
        while (t < 1e7) {
          a_ina = advance_inactive_area(a, c.kprime, c.betaprime, a_ina, t, dt);
          t += dt;
          const double a_t = total_area(a, fracture_area(a, c.kprime, t), a_ina);
          const double exact = test::lam_closed_form(a, c.kprime, c.betaprime, t);
          worst = std::max(worst, std::abs(a_t - exact) / exact);
        }
        CAPTURE(c.electrode);
        CAPTURE(c.kprime);
        CAPTURE(c.betaprime);
        CHECK(worst < 1e-6);
      }
    }
  }

  TEST_CASE("LAM regime classification") {
    auto cathode = classify_lam_regime(3.06e-11, 0.198e-11);
    CHECK(cathode.regime == LamRegime::FractureDominated);
    CHECK(cathode.indicator == doctest::Approx(1.0 - 3.06e-11 / 0.198e-11));
    CHECK(cathode.indicator == doctest::Approx(-14.45).epsilon(1e-3));
    auto anode = classify_lam_regime(1.40e-10, 0.741e-9);
    CHECK(anode.regime == LamRegime::IsolationDominated);
    CHECK(anode.indicator == doctest::Approx(0.811).epsilon(1e-3));
    CHECK(classify_lam_regime(7e-10, 7e-10).regime == LamRegime::Balanced);
    CHECK(classify_lam_regime(7e-10, 7e-10).indicator == 0.0);
    CHECK(classify_lam_regime(1.05, 1.0).regime == LamRegime::Balanced);
    CHECK(classify_lam_regime(1.05, 1.0, 0.01).regime == LamRegime::Intermediate);
    // Boundaries: exactly -1 and exactly 1 fall in neither (ii) nor (iii).
    CHECK(classify_lam_regime(2.0, 1.0).regime == LamRegime::Intermediate);
    CHECK(classify_lam_regime(0.0, 1.0).regime == LamRegime::Intermediate);
    CHECK(classify_lam_regime(3.06e-11, 1.85e-11).regime == LamRegime::Intermediate);
    CHECK_THROWS_AS(classify_lam_regime(1e-10, 0.0), Error);
  }

  TEST_CASE("cycle to time coefficients") {
    const auto tc = cycle_to_time_coefficients(7.57e-7, 4e-6, 1.0);
    CHECK(tc.kprime == 7.57e-7);
    CHECK(tc.betaprime == 4e-6);
    const auto a = cycle_to_time_coefficients(7.57e-7, 4e-6, 5400.0);
    const auto b = cycle_to_time_coefficients(7.57e-7, 4e-6, 10800.0);
    CHECK(b.kprime == doctest::Approx(0.5 * a.kprime));
    CHECK(b.betaprime == doctest::Approx(0.5 * a.betaprime));
    // The reference anode pair implies one cycle duration for both divisions.
    const double T_from_k = 7.57e-7 / 1.40e-10;
    const double T_from_b = 4e-6 / 0.741e-9;
    CHECK(std::abs(T_from_k - T_from_b) / T_from_b < 0.01);
    CHECK(T_from_b == doctest::Approx(5.4e3).epsilon(0.01));
    const auto mapped = cycle_to_time_coefficients(7.57e-7, 4e-6, T_from_b);
    CHECK(mapped.kprime == doctest::Approx(1.40e-10).epsilon(0.01));
    CHECK(mapped.betaprime == doctest::Approx(0.741e-9).epsilon(1e-12));
    CHECK_THROWS_AS(cycle_to_time_coefficients(1.0, 1.0, 0.0), Error);
  }

  TEST_CASE("porosity update") {
    CellParameters p = test::default_config().params;
    CellState s = CellModel(p, Mesh{}).initial_state(1.0);
    auto eps = porosity_update(s, p);
    CHECK(eps.eps_p == doctest::Approx(1.0 - p.v_p - p.v_p_filler));
    CHECK(eps.eps_n == doctest::Approx(1.0 - p.v_n - p.v_n_filler));

    CellState lam = s;
    lam.a_ina_n = 1e4;
    lam.a_f_n = 2e3;
    CHECK(porosity_update(lam, p).eps_n > eps.eps_n);

    CellState film = s;
    film.L_SEI = 1e-8;
    film.L_film = 1e-8;
    CHECK(porosity_update(film, p).eps_n < eps.eps_n);

    CellState broken = s;
    broken.L_film = 1e-5;
    CHECK_THROWS_AS(porosity_update(broken, p), PorosityError);
  }
}
