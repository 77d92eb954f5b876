#include "espm/cell_model.hpp"

#include <cmath>
#include <sstream>

#include "espm/aging.hpp"
#include "espm/transport.hpp"

namespace espm {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Cutoff: return "cutoff";
    case Termination::Exhausted: return "exhausted";
    case Termination::MaxTime: return "max_time";
  }
  return "?";
}

double flux_split_residual(const StepOutput& out, const CellParameters& p) {
  const double total = out.current / (p.A_cell * p.L_n);
  return ((total - out.j_SEI) - out.j_pl) - out.j_int;
}

double exchange_current(double c_surf, double c_avg, const CellParameters& p, Electrode e) {
  const double c_max = p.c_s_max(e);
  if (!(c_surf >= 0.0) || !(c_surf <= c_max)) {
    std::ostringstream msg;
    msg << (e == Electrode::Positive ? "cathode" : "anode") << " surface concentration " << c_surf
        << " outside [0, " << c_max << "]";
    throw SaturationError(msg.str());
  }
  const double E_a = e == Electrode::Positive ? p.E_a_k_p : p.E_a_k_n;
  const double k = p.rate_constant(e) * arrhenius_factor(E_a, p.R_gas, p.T, p.T_ref);
  return k * p.F * std::sqrt(std::max(c_avg, 0.0) * c_surf * (c_max - c_surf));
}

double overpotential(double current, double a_t, double L, double i0, const CellParameters& p, Electrode e) {
  if (current == 0.0) return 0.0;
  if (!(i0 > 0.0)) {
    throw SaturationError(std::string(e == Electrode::Positive ? "cathode" : "anode") +
                          " exchange current vanished at a saturated surface");
  }
  const double magnitude = p.R_gas * p.T / (0.5 * p.F) * std::asinh(current / (2.0 * p.A_cell * a_t * L * i0));
  return e == Electrode::Negative ? magnitude : -magnitude;
}

StateOfCharge soc(const CellState& s, const CellParameters& p) {
  const double theta_n = s.c_s_surf_n / p.c_s_max_n;
  const double theta_p = s.c_s_surf_p / p.c_s_max_p;
  return {(theta_n - p.theta_n_0) / (p.theta_n_100 - p.theta_n_0),
          (p.theta_p_0 - theta_p) / (p.theta_p_0 - p.theta_p_100)};
}

namespace {

CellParameters validated(CellParameters p) {
  p.validate();
  return p;
}

Mesh validated(Mesh m) {
  m.validate();
  return m;
}

}  // namespace

CellModel::CellModel(CellParameters params, Mesh mesh)
    : params_(validated(std::move(params))),
      mesh_(validated(mesh)),
      axial_(AxialGrid::build(params_, mesh_)),
      sphere_p_(SphericalGrid::uniform(params_.R_p, mesh_.N_r_p)),
      sphere_n_(SphericalGrid::uniform(params_.R_n, mesh_.N_r_n)),
      D_s_p_(arrhenius_diffusivity(params_.T, params_, Electrode::Positive)),
      D_s_n_(arrhenius_diffusivity(params_.T, params_, Electrode::Negative)) {}

CellState CellModel::initial_state(double soc0) const {
  if (!(soc0 >= 0.0 && soc0 <= 1.0)) throw ConfigError("soc0", "must lie in [0, 1]");
  const auto& p = params_;
  const double theta_n = p.theta_n_0 + soc0 * (p.theta_n_100 - p.theta_n_0);
  const double theta_p = p.theta_p_0 - soc0 * (p.theta_p_0 - p.theta_p_100);

  CellState s;
  s.c_s_n = Vector::Constant(mesh_.N_r_n, theta_n * p.c_s_max_n);
  s.c_s_p = Vector::Constant(mesh_.N_r_p, theta_p * p.c_s_max_p);
  s.c_s_surf_n = theta_n * p.c_s_max_n;
  s.c_s_surf_p = theta_p * p.c_s_max_p;
  s.c_e = Vector::Constant(mesh_.axial_cells(), p.electrolyte.c_e0);
  s.L_SEI = p.L_SEI_init;
  s.L_Li = p.L_Li_init;
  s.L_film = s.L_SEI + s.L_Li;
  s.a_t_p = p.specific_area(Electrode::Positive);
  s.a_t_n = p.specific_area(Electrode::Negative);
  const auto eps = porosity_update(s, p);
  s.eps_p = eps.eps_p;
  s.eps_n = eps.eps_n;
  return s;
}

StepOutput CellModel::evaluate(const CellState& s, double current) const {
  const auto& p = params_;
  StepOutput out;
  out.t = s.t;
  out.current = current;

  const double i0_p = exchange_current(s.c_s_surf_p, average_concentration(s.c_s_p, sphere_p_), p, Electrode::Positive);
  const double i0_n = exchange_current(s.c_s_surf_n, average_concentration(s.c_s_n, sphere_n_), p, Electrode::Negative);
  out.eta_p = overpotential(current, s.a_t_p, p.L_p, i0_p, p, Electrode::Positive);
  out.eta_n = overpotential(current, s.a_t_n, p.L_n, i0_n, p, Electrode::Negative);

  out.U_p = p.ocp_p->operator()(s.c_s_surf_p / p.c_s_max_p);
  out.U_n = p.ocp_n->operator()(s.c_s_surf_n / p.c_s_max_n);
  out.R_film = film_resistance(s.L_SEI, s.a_t_n, p);
  out.phi_s_n = out.U_n + out.eta_n + out.R_film * current;

  const Vector eps = cell_porosity(axial_, s.eps_n, s.eps_p, p);
  const auto electrolyte = solve_electrolyte_potential(s.c_e, eps, pore_wall_fluxes(current, p), p, axial_);
  out.phi_e_n = anode_electrolyte_potential(electrolyte, axial_);
  out.R_el = electrolyte.R_el;
  out.delta_phi_e = electrolyte.delta_phi_e;

  out.V_cell = out.U_p - out.U_n + out.eta_p - out.eta_n + out.delta_phi_e -
               current * (p.R_l + out.R_el + out.R_film);
  if (!std::isfinite(out.V_cell)) throw NumericalError("non-finite cell voltage");

  const auto level = soc(s, p);
  out.soc_n = level.soc_n;
  out.soc_p = level.soc_p;
  return out;
}

StepOutput CellModel::advance(CellState& s, double current, double dt) const {
  return advance(s, current, dt, evaluate(s, current));
}

StepOutput CellModel::advance(CellState& s, double current, double dt, const StepOutput& now) const {
  const auto& p = params_;
  if (!(dt > 0.0)) throw Error("time step must be positive");
  if (now.t != s.t || now.current != current) throw Error("start-of-step evaluation does not match the state");

  // (1)-(3) are in `now`: overpotentials from the total current, anode solid and electrolyte potentials.

  // (4)-(5): side reactions and the intercalation share of the anode current.
  const double j_sei = sei_current_density(s.a_t_n, now.phi_s_n, now.phi_e_n, now.R_film, current, p);
  const double j_pl = plating_current_density(s.a_t_n, now.phi_s_n, now.phi_e_n, now.R_film, current, p);
  const double j_int = ((current / (p.A_cell * p.L_n)) - j_sei) - j_pl;

  // (6): transport.
  const double q_n = anode_surface_flux(current, j_sei, j_pl, s.a_t_n, p);
  const double q_p = cathode_surface_flux(current, s.a_t_p, p);
  Vector c_s_n = advance_solid(s.c_s_n, q_n, D_s_n_, sphere_n_, dt);
  Vector c_s_p = advance_solid(s.c_s_p, q_p, D_s_p_, sphere_p_, dt);
  const double surf_n = surface_concentration(c_s_n, q_n, D_s_n_, sphere_n_);
  const double surf_p = surface_concentration(c_s_p, q_p, D_s_p_, sphere_p_);
  auto check_solid = [](const Vector& c, double surf, double c_max, const char* name) {
    if (!(c.minCoeff() >= 0.0) || !(c.maxCoeff() <= c_max) || !(surf >= 0.0) || !(surf <= c_max)) {
      throw SaturationError(std::string(name) + " solid concentration left [0, c_s_max]");
    }
  };
  check_solid(c_s_n, surf_n, p.c_s_max_n, "anode");
  check_solid(c_s_p, surf_p, p.c_s_max_p, "cathode");

  const Vector eps = cell_porosity(axial_, s.eps_n, s.eps_p, p);
  Vector c_e = advance_electrolyte(s.c_e, eps, pore_wall_fluxes(current, p), p, axial_, dt);

  // Aging ODEs, explicit.
  const auto rates = species_and_film_rates(j_sei, j_pl, s.a_t_n, p);
  const double a_p = p.specific_area(Electrode::Positive);
  const double a_n = p.specific_area(Electrode::Negative);
  const double t_next = s.t + dt;

  CellState next;
  next.c_SEI = s.c_SEI + dt * rates.dc_SEI_dt;
  next.c_Li = s.c_Li + dt * rates.dc_Li_dt;
  next.L_SEI = s.L_SEI + dt * rates.dL_SEI_dt;
  next.L_Li = s.L_Li + dt * rates.dL_Li_dt;
  next.L_film = next.L_SEI + next.L_Li;

  // (7): areas and porosity.
  next.a_ina_p = advance_inactive_area(a_p, p.kprime_p, p.betaprime_p, s.a_ina_p, s.t, dt);
  next.a_ina_n = advance_inactive_area(a_n, p.kprime_n, p.betaprime_n, s.a_ina_n, s.t, dt);
  next.a_f_p = fracture_area(a_p, p.kprime_p, t_next);
  next.a_f_n = fracture_area(a_n, p.kprime_n, t_next);
  next.a_t_p = total_area(a_p, next.a_f_p, next.a_ina_p);
  next.a_t_n = total_area(a_n, next.a_f_n, next.a_ina_n);
  if (!(next.a_t_p > 0.0) || !(next.a_t_n > 0.0)) throw NumericalError("total active area exhausted");
  const auto porosity = porosity_update(next, p);
  next.eps_p = porosity.eps_p;
  next.eps_n = porosity.eps_n;

  next.c_s_n = std::move(c_s_n);
  next.c_s_p = std::move(c_s_p);
  next.c_s_surf_n = surf_n;
  next.c_s_surf_p = surf_p;
  next.c_e = std::move(c_e);
  next.t = t_next;
  s = std::move(next);

  // (8): voltage at the new state.
  StepOutput out = evaluate(s, current);
  out.j_int = j_int;
  out.j_SEI = j_sei;
  out.j_pl = j_pl;
  return out;
}

double CellModel::solid_inventory(const CellState& s, Electrode e) const {
  const auto& p = params_;
  const SphericalGrid& g = sphere(e);
  const double a_t = s.total_area(e);
  return average_concentration(s.solid(e), g) * p.A_cell * p.thickness(e) * a_t * p.radius(e) / 3.0;
}

double CellModel::solid_inventory(const CellState& s) const {
  return solid_inventory(s, Electrode::Positive) + solid_inventory(s, Electrode::Negative);
}

double CellModel::electrolyte_inventory(const CellState& s) const {
  const Vector eps = cell_porosity(axial_, s.eps_n, s.eps_p, params_);
  return espm::electrolyte_inventory(s.c_e, eps, axial_) * params_.A_cell;
}

CellState initial_state(const CellParameters& params, const Mesh& mesh, double soc0) {
  return CellModel(params, mesh).initial_state(soc0);
}

std::pair<CellState, StepOutput> step(const CellState& state, double current, double dt, const CellParameters& params,
                                      const Mesh& mesh) {
  const CellModel model(params, mesh);
  CellState next = state;
  StepOutput out = model.advance(next, current, dt);
  return {std::move(next), out};
}

void age_active_material(CellState& s, const CellParameters& p, double t_end, double dt) {
  if (!(dt > 0.0)) throw Error("time step must be positive");
  const double a_p = p.specific_area(Electrode::Positive);
  const double a_n = p.specific_area(Electrode::Negative);
  while (s.t < t_end) {
    const double h = std::min(dt, t_end - s.t);
    s.a_ina_p = advance_inactive_area(a_p, p.kprime_p, p.betaprime_p, s.a_ina_p, s.t, h);
    s.a_ina_n = advance_inactive_area(a_n, p.kprime_n, p.betaprime_n, s.a_ina_n, s.t, h);
    s.t = (t_end - s.t <= dt) ? t_end : s.t + h;
  }
  s.a_f_p = fracture_area(a_p, p.kprime_p, s.t);
  s.a_f_n = fracture_area(a_n, p.kprime_n, s.t);
  s.a_t_p = total_area(a_p, s.a_f_p, s.a_ina_p);
  s.a_t_n = total_area(a_n, s.a_f_n, s.a_ina_n);
  if (!(s.a_t_p > 0.0) || !(s.a_t_n > 0.0)) throw NumericalError("total active area exhausted");
  const auto eps = porosity_update(s, p);
  s.eps_p = eps.eps_p;
  s.eps_n = eps.eps_n;
}

namespace {

bool crossed(double voltage, double cutoff, double current) {
  if (current > 0.0) return voltage <= cutoff;
  if (current < 0.0) return voltage >= cutoff;
  return false;
}

void finish_at_last(SimulationTrace& trace) {
  const StepOutput& last = trace.samples.back();
  trace.final_time = last.t;
  trace.final_capacity_Ah = last.capacity_Ah;
  trace.final_voltage = last.V_cell;
}

}  // namespace

SimulationTrace run_constant_current(const CellModel& model, CellState state, const RunOptions& options) {
  SimulationTrace trace;
  const double I = options.current;
  const double t0 = state.t;
  trace.start_time = t0;

  auto annotate = [&](const Error& e) {
    std::ostringstream msg;
    const double t = state.t - t0;
    msg << "at t = " << t << " s, capacity " << I * t / 3600.0 << " Ah: " << e.what();
    return SimulationError(msg.str());
  };

  StepOutput out;
  try {
    out = model.evaluate(state, I);
  } catch (const Error& e) {
    throw annotate(e);
  }
  out.capacity_Ah = 0.0;
  trace.samples.push_back(out);

  if (options.cutoff && crossed(out.V_cell, *options.cutoff, I)) {
    trace.termination = Termination::Cutoff;
    finish_at_last(trace);
    return trace;
  }

  // Ensure the loop terminates at max_time even when dt does not divide it.
  const double end_time = t0 + options.max_time;
  while (true) {
    if (state.t - t0 >= options.max_time * (1.0 - 1e-12)) {
      trace.termination = Termination::MaxTime;
      finish_at_last(trace);
      return trace;
    }
    const double dt = std::min(options.dt.step(state.t), end_time - state.t);
    try {
      out = model.advance(state, I, dt, out);
    } catch (const SaturationError& e) {
      trace.termination = Termination::Exhausted;
      trace.note = e.what();
      finish_at_last(trace);
      return trace;
    } catch (const Error& e) {
      throw annotate(e);
    }
    out.capacity_Ah = I * (out.t - t0) / 3600.0;
    const StepOutput prev = trace.samples.back();
    trace.samples.push_back(out);

    if (options.cutoff && crossed(out.V_cell, *options.cutoff, I)) {
      const double cutoff = *options.cutoff;
      const double frac = (prev.V_cell - cutoff) / (prev.V_cell - out.V_cell);
      trace.termination = Termination::Cutoff;
      trace.final_time = prev.t + frac * (out.t - prev.t);
      trace.final_capacity_Ah = I * (trace.final_time - t0) / 3600.0;
      trace.final_voltage = cutoff;
      return trace;
    }
  }
}

SimulationTrace run_constant_current(const CellParameters& params, const Mesh& mesh, const RunOptions& options) {
  const CellModel model(params, mesh);
  return run_constant_current(model, model.initial_state(options.soc0), options);
}

}  // namespace espm
