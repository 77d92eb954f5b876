#include <doctest.h>

#include <cmath>

#include "espm/aging.hpp"
#include "espm/cell_model.hpp"
#include "espm/transport.hpp"
#include "support.hpp"

using namespace espm;

namespace {

constexpr double kC3 = 12.4 / 3.0;

RunOptions c3_discharge(double dt = 1.0) {
  RunOptions o;
  o.current = kC3;
  o.cutoff = 2.8;
  o.dt.dt = dt;
  return o;
}

}  // namespace

TEST_SUITE("cell-model") {
  TEST_CASE("exchange current") {
    const CellParameters& p = test::default_config().params;
    const double cmax = p.c_s_max_n;
    CHECK(exchange_current(cmax, 0.5 * cmax, p, Electrode::Negative) == 0.0);
    CHECK(exchange_current(0.0, 0.5 * cmax, p, Electrode::Negative) == 0.0);

    const double half = 0.5 * cmax;
    const double expected = p.k_n * p.F * std::sqrt(half * half * half);
    CHECK(exchange_current(half, half, p, Electrode::Negative) == doctest::Approx(expected).epsilon(1e-14));

    CellParameters q = p;
    q.k_n *= 3.0;
    CHECK(exchange_current(half, half, q, Electrode::Negative) ==
          doctest::Approx(3.0 * exchange_current(half, half, p, Electrode::Negative)).epsilon(1e-14));

    CHECK_THROWS_AS(exchange_current(1.01 * cmax, half, p, Electrode::Negative), SaturationError);
    CHECK_THROWS_AS(exchange_current(-1.0, half, p, Electrode::Negative), SaturationError);
  }

  TEST_CASE("overpotential") {
    const CellParameters& p = test::default_config().params;
    const double a = p.specific_area(Electrode::Negative);
    const double i0 = 2.0;
    CHECK(overpotential(0.0, a, p.L_n, i0, p, Electrode::Negative) == 0.0);

    const double scale = 2.0 * p.R_gas * p.T / p.F;
    for (double x : {1e-4, 1e-2, 0.049}) {
      const double I = x * 2.0 * p.A_cell * a * p.L_n * i0;
      CHECK(overpotential(I, a, p.L_n, i0, p, Electrode::Negative) == doctest::Approx(scale * x).epsilon(1e-3));
    }

    const double I = 4.0;
    const double eta_n = overpotential(I, a, p.L_n, i0, p, Electrode::Negative);
    const double eta_p = overpotential(I, p.specific_area(Electrode::Positive), p.L_p, i0, p, Electrode::Positive);
    CHECK(eta_n > 0.0);
    CHECK(eta_p < 0.0);
    CHECK(overpotential(-I, a, p.L_n, i0, p, Electrode::Negative) == -eta_n);
    CHECK(std::abs(overpotential(I, 2.0 * a, p.L_n, i0, p, Electrode::Negative)) < std::abs(eta_n));

    CHECK_THROWS_AS(overpotential(I, a, p.L_n, 0.0, p, Electrode::Negative), SaturationError);
  }

  TEST_CASE("state of charge examples") {
    const CellParameters& p = test::default_config().params;
    CellState s;
    s.c_s_surf_n = p.theta_n_100 * p.c_s_max_n;
    s.c_s_surf_p = p.theta_p_0 * p.c_s_max_p;
    auto level = soc(s, p);
    CHECK(level.soc_n == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(level.soc_p == 0.0);

    s.c_s_surf_p = 0.5 * (p.theta_p_0 + p.theta_p_100) * p.c_s_max_p;
    CHECK(soc(s, p).soc_p == doctest::Approx(0.5).epsilon(1e-12));

    // Not clamped.
    s.c_s_surf_n = (p.theta_n_100 + 0.01) * p.c_s_max_n;
    CHECK(soc(s, p).soc_n > 1.0);
  }

  TEST_CASE("open circuit leaves an equilibrium state unchanged") {
    const CellModel model(test::inert_parameters(), test::default_config().mesh);
    CellState s = model.initial_state(0.6);
    const CellState before = s;
    const StepOutput out = model.advance(s, 0.0, 10.0);
    const auto& p = model.params();
    const double ocv = p.ocp_p->operator()(before.c_s_surf_p / p.c_s_max_p) -
                       p.ocp_n->operator()(before.c_s_surf_n / p.c_s_max_n);
    CHECK(out.V_cell == doctest::Approx(ocv).epsilon(1e-12));
    CHECK((s.c_s_n - before.c_s_n).cwiseAbs().maxCoeff() <= 1e-9 * p.c_s_max_n);
    CHECK((s.c_s_p - before.c_s_p).cwiseAbs().maxCoeff() <= 1e-9 * p.c_s_max_p);
    CHECK((s.c_e - before.c_e).cwiseAbs().maxCoeff() <= 1e-9 * p.electrolyte.c_e0);
    CHECK(s.t == 10.0);
  }

  TEST_CASE("first step voltage decomposition") {
    const CellModel model(test::default_config().params, test::default_config().mesh);
    const auto& p = model.params();
    CellState s = model.initial_state(1.0);
    const double ocv = p.ocp_p->operator()(s.c_s_surf_p / p.c_s_max_p) - p.ocp_n->operator()(s.c_s_surf_n / p.c_s_max_n);
    const StepOutput out = model.evaluate(s, kC3);
    CHECK(out.R_film == 0.0);
    CHECK(out.delta_phi_e == 0.0);
    const double expected = ocv - kC3 * (p.R_l + out.R_el) - std::abs(out.eta_p) - std::abs(out.eta_n);
    CHECK(out.V_cell == doctest::Approx(expected).epsilon(1e-14));
    CHECK(out.V_cell < ocv);
    CHECK(out.phi_s_n == doctest::Approx(out.U_n + out.eta_n).epsilon(1e-14));
  }

  TEST_CASE("flux split residual is zero and V is finite at every step") {
    CellParameters p = test::aged_config().params;
    p.k_f = 1e-12;
    const SimulationTrace trace = run_constant_current(p, test::default_config().mesh, c3_discharge());
    REQUIRE(trace.samples.size() > 100);
    for (std::size_t k = 1; k < trace.samples.size(); ++k) {
      const StepOutput& o = trace.samples[k];
      REQUIRE(flux_split_residual(o, p) == 0.0);
      REQUIRE(std::isfinite(o.V_cell));
      REQUIRE(o.t > trace.samples[k - 1].t);
      REQUIRE(o.capacity_Ah >= trace.samples[k - 1].capacity_Ah);
    }
    CHECK(trace.samples.back().j_SEI < 0.0);
    CHECK(trace.samples.back().j_pl < 0.0);
  }

  TEST_CASE("solid lithium conserved with side reactions off") {
    const CellModel model(test::inert_parameters(), test::default_config().mesh);
    CellState s = model.initial_state(1.0);
    const double n0 = model.solid_inventory(s);
    StepOutput out = model.evaluate(s, kC3);
    while (out.V_cell > 2.8) out = model.advance(s, kC3, 1.0, out);
    CHECK(s.t > 9000.0);
    CHECK(std::abs(model.solid_inventory(s) - n0) / n0 < 1e-8);
    // Charge moved between electrodes matches Coulomb counting.
    const double gained = model.solid_inventory(s, Electrode::Positive) -
                          model.solid_inventory(model.initial_state(1.0), Electrode::Positive);
    CHECK(gained == doctest::Approx(kC3 * s.t / model.params().F).epsilon(1e-8));
  }

  TEST_CASE("lithium bookkeeping closes with side reactions on") {
    CellParameters p = test::inert_parameters();
    p.k_f = 1e-11;
    p.i0_pl = 1e-5;
    const CellModel model(p, test::default_config().mesh);
    CellState s = model.initial_state(1.0);
    const double n0 = model.solid_inventory(s);
    StepOutput out = model.evaluate(s, kC3);
    for (int k = 0; k < 5000; ++k) out = model.advance(s, kC3, 1.0, out);
    const double lost = n0 - model.solid_inventory(s);
    const double bound = p.A_cell * p.L_n * 2.0 * (s.c_SEI + s.c_Li);
    REQUIRE(lost > 0.0);
    CHECK(lost == doctest::Approx(bound).epsilon(1e-6));
  }

  TEST_CASE("aging fields stay put when everything is off") {
    const CellModel model(test::inert_parameters(), test::default_config().mesh);
    CellState s = model.initial_state(1.0);
    const CellState before = s;
    StepOutput out = model.evaluate(s, kC3);
    for (int k = 0; k < 200; ++k) out = model.advance(s, kC3, 1.0, out);
    CHECK(s.c_SEI == 0.0);
    CHECK(s.c_Li == 0.0);
    CHECK(s.L_film == before.L_film);
    CHECK(s.a_t_n == before.a_t_n);
    CHECK(s.a_t_p == before.a_t_p);
    CHECK(s.eps_n == before.eps_n);
    CHECK(out.j_SEI == 0.0);
    CHECK(out.j_pl == 0.0);
  }

  TEST_CASE("side species accumulate monotonically") {
    CellParameters p = test::inert_parameters();
    p.k_f = 1e-11;
    p.i0_pl = 1e-5;
    const CellModel model(p, test::default_config().mesh);
    CellState s = model.initial_state(1.0);
    StepOutput out = model.evaluate(s, kC3);
    double sei = s.c_SEI, li = s.c_Li, film = s.L_film;
    for (int k = 0; k < 500; ++k) {
      out = model.advance(s, kC3, 1.0, out);
      REQUIRE(s.c_SEI > sei);
      REQUIRE(s.c_Li > li);
      REQUIRE(s.L_film > film);
      REQUIRE(s.L_film == s.L_SEI + s.L_Li);
      sei = s.c_SEI;
      li = s.c_Li;
      film = s.L_film;
    }
  }

  TEST_CASE("voltage decreases with current at fixed state") {
    const CellModel model(test::default_config().params, test::default_config().mesh);
    CellState s = model.initial_state(1.0);
    StepOutput out = model.evaluate(s, kC3);
    for (int k = 0; k < 600; ++k) out = model.advance(s, kC3, 1.0, out);
    double prev = model.evaluate(s, -10.0).V_cell;
    for (double I = -9.0; I <= 12.0; I += 1.0) {
      const double v = model.evaluate(s, I).V_cell;
      CHECK(v < prev);
      prev = v;
    }
  }

  TEST_CASE("area and current scale together") {
    CellParameters p = test::default_config().params;
    CellParameters q = p;
    q.A_cell *= 2.0;
    q.R_l /= 2.0;
    RunOptions o1 = c3_discharge();
    o1.cutoff.reset();
    o1.max_time = 3000.0;
    RunOptions o2 = o1;
    o2.current *= 2.0;
    const auto a = run_constant_current(p, test::default_config().mesh, o1);
    const auto b = run_constant_current(q, test::default_config().mesh, o2);
    REQUIRE(a.samples.size() == b.samples.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
      worst = std::max(worst, std::abs(a.samples[k].V_cell - b.samples[k].V_cell));
    }
    CHECK(worst < 1e-3);
  }

  TEST_CASE("time step and mesh convergence of capacity") {
    const auto& cfg = test::default_config();
    const double base = run_constant_current(cfg.params, cfg.mesh, c3_discharge(1.0)).final_capacity_Ah;
    const double half = run_constant_current(cfg.params, cfg.mesh, c3_discharge(0.5)).final_capacity_Ah;
    CHECK(std::abs(half - base) / base < 1e-3);

    Mesh fine = cfg.mesh;
    fine.N_r_p *= 2;
    fine.N_r_n *= 2;
    fine.N_x_p *= 2;
    fine.N_x_s *= 2;
    fine.N_x_n *= 2;
    const double dense = run_constant_current(cfg.params, fine, c3_discharge(1.0)).final_capacity_Ah;
    CHECK(std::abs(dense - base) / base < 5e-3);
  }

  TEST_CASE("C/3 discharge delivers close to nominal capacity") {
    const auto& cfg = test::default_config();
    const auto trace = run_constant_current(cfg.params, cfg.mesh, c3_discharge());
    CHECK(trace.termination == Termination::Cutoff);
    CHECK(trace.final_voltage == doctest::Approx(2.8).epsilon(1e-9));
    CHECK(trace.final_capacity_Ah == doctest::Approx(12.4).epsilon(0.05));
  }

  TEST_CASE("zero current runs to the time guard") {
    const auto& cfg = test::default_config();
    RunOptions o = c3_discharge();
    o.current = 0.0;
    o.max_time = 500.0;
    const auto trace = run_constant_current(cfg.params, cfg.mesh, o);
    CHECK(trace.termination == Termination::MaxTime);
    CHECK(trace.final_time == doctest::Approx(500.0));
    CHECK(trace.final_capacity_Ah == 0.0);
  }

  TEST_CASE("cutoff above the open-circuit voltage stops at once") {
    const auto& cfg = test::default_config();
    RunOptions o = c3_discharge();
    o.cutoff = 4.5;
    const auto trace = run_constant_current(cfg.params, cfg.mesh, o);
    CHECK(trace.termination == Termination::Cutoff);
    CHECK(trace.final_capacity_Ah == 0.0);
  }

  TEST_CASE("step rejects a non-positive dt") {
    const CellModel model(test::default_config().params, test::default_config().mesh);
    CellState s = model.initial_state(1.0);
    CHECK_THROWS_AS(model.advance(s, kC3, 0.0), Error);
  }
}
