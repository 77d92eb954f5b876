#pragma once

#include <cmath>
#include <string>

#include "espm/errors.hpp"
#include "espm/parameters.hpp"
#include "espm/state.hpp"
#include "espm/transport.hpp"

namespace espm {

// ---------------------------------------------------------------------------
// SEI growth and lithium plating
// ---------------------------------------------------------------------------
//
// Both side currents share the driving force Phi_s,n - Phi_e,n - R_film I and
// are cathodic (<= 0). Neither reaction reverses: there is no stripping.

template <typename Scalar>
Scalar side_reaction_exponential(Scalar phi_s_n, Scalar phi_e_n, Scalar R_film, double current,
                                 const CellParameters& p) {
  using std::exp;
  return exp(-p.alpha * p.F / (p.R_gas * p.T) * (phi_s_n - phi_e_n - R_film * current));
}

/// k_f(T); no concentration dependence.
inline double sei_rate_constant(const CellParameters& p) {
  return p.k_f * arrhenius_factor(p.E_a_kf, p.R_gas, p.T, p.T_ref);
}

/// j_SEI = -F a_t,n k_f c_solv exp(-alpha F/(R T) (Phi_s,n - Phi_e,n - R_film I)), A/m^3.
template <typename Scalar>
Scalar sei_current_density(Scalar a_t_n, Scalar phi_s_n, Scalar phi_e_n, Scalar R_film, double current,
                           const CellParameters& p) {
  return -p.F * a_t_n * sei_rate_constant(p) * p.c_solv_surf *
         side_reaction_exponential(phi_s_n, phi_e_n, R_film, current, p);
}

template <typename Scalar>
Scalar sei_current_density(const BasicCellState<Scalar>& state, Scalar phi_s_n, Scalar phi_e_n, Scalar R_film,
                           double current, const CellParameters& p) {
  return sei_current_density(state.a_t_n, phi_s_n, phi_e_n, R_film, current, p);
}

/// j_pl = -2 a_t,n i0_pl exp(-alpha F/(R T) (Phi_s,n - Phi_e,n - R_film I)), A/m^3.
template <typename Scalar>
Scalar plating_current_density(Scalar a_t_n, Scalar phi_s_n, Scalar phi_e_n, Scalar R_film, double current,
                               const CellParameters& p) {
  return -2.0 * a_t_n * p.i0_pl * side_reaction_exponential(phi_s_n, phi_e_n, R_film, current, p);
}

template <typename Scalar>
Scalar plating_current_density(const BasicCellState<Scalar>& state, Scalar phi_s_n, Scalar phi_e_n, Scalar R_film,
                               double current, const CellParameters& p) {
  return plating_current_density(state.a_t_n, phi_s_n, phi_e_n, R_film, current, p);
}

template <typename Scalar>
struct SideReactionRates {
  Scalar j_SEI{0}, j_pl{0};            // A/m^3
  Scalar dc_SEI_dt{0}, dc_Li_dt{0};    // mol/(m^3 s)
  Scalar dL_SEI_dt{0}, dL_Li_dt{0};    // m/s
};

/// Species and film growth rates. The SEI and plated-lithium layers are grown
/// from their own species terms so that L_film = L_SEI + L_Li holds exactly.
template <typename Scalar>
SideReactionRates<Scalar> species_and_film_rates(Scalar j_sei, Scalar j_pl, Scalar a_t_n, const CellParameters& p) {
  SideReactionRates<Scalar> r;
  r.j_SEI = j_sei;
  r.j_pl = j_pl;
  r.dc_SEI_dt = -(j_sei / (2.0 * p.F) + j_pl / (2.0 * p.F) * p.beta);
  r.dc_Li_dt = -j_pl / (2.0 * p.F) * (1.0 - p.beta);
  r.dL_SEI_dt = r.dc_SEI_dt * p.M_SEI / p.rho_SEI / a_t_n;
  r.dL_Li_dt = r.dc_Li_dt * p.M_Li / p.rho_Li / a_t_n;
  return r;
}

/// R_film = L_SEI / (a_t,n A L_n kappa_SEI).
template <typename Scalar>
Scalar film_resistance(Scalar L_sei, Scalar a_t_n, const CellParameters& p) {
  return L_sei / (a_t_n * p.A_cell * p.L_n * p.kappa_SEI);
}

// ---------------------------------------------------------------------------
// Loss of active material
// ---------------------------------------------------------------------------

/// a_f = a k' t
template <typename Scalar>
Scalar fracture_area(double a, double kprime, Scalar t) {
  return a * kprime * t;
}

/// da_ina/dt = beta' (a + a_f - a_ina)
template <typename Scalar>
Scalar inactive_area_rate(double a, Scalar a_f, Scalar a_ina, double betaprime) {
  return betaprime * (a + a_f - a_ina);
}

template <typename Scalar>
Scalar total_area(double a, Scalar a_f, Scalar a_ina) {
  return a + a_f - a_ina;
}

template <typename Scalar>
struct LamRates {
  Scalar a_f_p{0}, a_f_n{0};
  Scalar da_ina_p_dt{0}, da_ina_n_dt{0};
};

/// Fracture areas at time t and inactive-area rates for both electrodes.
template <typename Scalar>
LamRates<Scalar> lam_rates(const BasicCellState<Scalar>& state, const CellParameters& p, Scalar t) {
  LamRates<Scalar> r;
  const double a_p = p.specific_area(Electrode::Positive);
  const double a_n = p.specific_area(Electrode::Negative);
  r.a_f_p = fracture_area(a_p, p.kprime_p, t);
  r.a_f_n = fracture_area(a_n, p.kprime_n, t);
  r.da_ina_p_dt = inactive_area_rate(a_p, r.a_f_p, state.a_ina_p, p.betaprime_p);
  r.da_ina_n_dt = inactive_area_rate(a_n, r.a_f_n, state.a_ina_n, p.betaprime_n);
  return r;
}

/// Explicit Heun step of the inactive-area ODE from t to t + dt. The fracture
/// area is an explicit function of time and is evaluated at both ends.
template <typename Scalar>
Scalar advance_inactive_area(double a, double kprime, double betaprime, Scalar a_ina, Scalar t, double dt) {
  const Scalar k1 = inactive_area_rate(a, fracture_area(a, kprime, t), a_ina, betaprime);
  const Scalar predicted = a_ina + dt * k1;
  const Scalar k2 = inactive_area_rate(a, fracture_area(a, kprime, t + dt), predicted, betaprime);
  return a_ina + 0.5 * dt * (k1 + k2);
}

enum class LamRegime {
  Balanced,            // (i)   1 - k'/beta' close to 0
  FractureDominated,   // (ii)  1 - k'/beta' < -1
  IsolationDominated,  // (iii) 0 < 1 - k'/beta' < 1
  Intermediate,        // between the three cases
};

struct LamClassification {
  LamRegime regime;
  double indicator;  // 1 - k'/beta'
};

inline const char* to_string(LamRegime r) {
  switch (r) {
    case LamRegime::Balanced: return "balanced";
    case LamRegime::FractureDominated: return "fracture-dominated";
    case LamRegime::IsolationDominated: return "isolation-dominated";
    case LamRegime::Intermediate: return "intermediate";
  }
  return "?";
}

inline LamClassification classify_lam_regime(double kprime, double betaprime, double tolerance = 0.1) {
  if (betaprime == 0.0) throw Error("LAM regime undefined for betaprime = 0");
  const double s = 1.0 - kprime / betaprime;
  LamRegime regime = LamRegime::Intermediate;
  if (std::abs(s) <= tolerance) {
    regime = LamRegime::Balanced;
  } else if (s < -1.0) {
    regime = LamRegime::FractureDominated;
  } else if (s > 0.0 && s < 1.0) {
    regime = LamRegime::IsolationDominated;
  }
  return {regime, s};
}

struct TimeCoefficients {
  double kprime;
  double betaprime;
};

/// k' = k_cycle / T_cycle, beta' = beta_cycle / T_cycle.
inline TimeCoefficients cycle_to_time_coefficients(double k_cycle, double beta_cycle, double T_cycle) {
  if (!(T_cycle > 0.0)) throw Error("cycle duration must be positive");
  return {k_cycle / T_cycle, beta_cycle / T_cycle};
}

// ---------------------------------------------------------------------------
// Porosity
// ---------------------------------------------------------------------------

template <typename Scalar>
struct Porosities {
  Scalar eps_p;
  Scalar eps_n;
};

/// eps_p = eps_p0 + (a_ina,p - a_f,p)/3 R_p
/// eps_n = eps_n0 + (a_ina,n - a_f,n)/3 R_n - v_n 3 L_film / R_n
template <typename Scalar>
Porosities<Scalar> porosity_update(const BasicCellState<Scalar>& s, const CellParameters& p) {
  Porosities<Scalar> out;
  out.eps_p = p.initial_porosity(Electrode::Positive) + (s.a_ina_p - s.a_f_p) / 3.0 * p.R_p;
  out.eps_n = p.initial_porosity(Electrode::Negative) + (s.a_ina_n - s.a_f_n) / 3.0 * p.R_n -
              p.v_n * 3.0 * s.L_film / p.R_n;
  auto check = [](Scalar eps, const char* name) {
    if (!(eps > 0) || !(eps < 1)) {
      throw PorosityError(std::string(name) + " left (0, 1): " + std::to_string(static_cast<double>(eps)));
    }
  };
  check(out.eps_p, "cathode porosity");
  check(out.eps_n, "anode porosity");
  return out;
}

}  // namespace espm
