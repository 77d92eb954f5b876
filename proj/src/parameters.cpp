#include "espm/parameters.hpp"

#include <cmath>
#include <string>

#include "espm/errors.hpp"

namespace espm {

namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be strictly positive");
}

void require_nonnegative(double v, const char* field) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be nonnegative");
}

void require_open_unit(double v, const char* field) {
  if (!(v > 0.0 && v < 1.0)) throw ConfigError(field, "must lie in (0, 1)");
}

}  // namespace

void CellParameters::validate() const {
  require_positive(A_cell, "A_cell");
  require_positive(L_p, "L_p");
  require_positive(L_s, "L_s");
  require_positive(L_n, "L_n");
  require_positive(R_p, "R_p");
  require_positive(R_n, "R_n");

  require_open_unit(t_plus, "t_plus");
  require_positive(brugg, "brugg");
  require_positive(D_s_ref_p, "D_s_ref_p");
  require_positive(D_s_ref_n, "D_s_ref_n");
  require_nonnegative(E_a_Ds_p, "E_a_Ds_p");
  require_nonnegative(E_a_Ds_n, "E_a_Ds_n");
  if (!(eps_s > 0.0 && eps_s <= 1.0)) throw ConfigError("eps_s", "must lie in (0, 1]");
  require_positive(electrolyte.c_e0, "c_e0");
  if (electrolyte.D_coeffs.empty()) throw ConfigError("D_coeffs", "at least one coefficient required");
  if (electrolyte.kappa_coeffs.empty()) throw ConfigError("kappa_coeffs", "at least one coefficient required");

  require_positive(k_p, "k_p");
  require_positive(k_n, "k_n");
  require_open_unit(alpha, "alpha");
  require_nonnegative(i0_pl, "i0_pl");
  require_nonnegative(k_f, "k_f");
  require_nonnegative(c_solv_surf, "c_solv_surf");

  require_open_unit(v_p, "v_p");
  require_open_unit(v_n, "v_n");
  require_nonnegative(v_p_filler, "v_p_filler");
  require_nonnegative(v_n_filler, "v_n_filler");
  if (!(v_p + v_p_filler < 1.0)) throw ConfigError("v_p_filler", "v_p + v_p_filler must be < 1");
  if (!(v_n + v_n_filler < 1.0)) throw ConfigError("v_n_filler", "v_n + v_n_filler must be < 1");
  require_positive(c_s_max_p, "c_s_max_p");
  require_positive(c_s_max_n, "c_s_max_n");

  if (!(theta_n_0 >= 0.0 && theta_n_0 < theta_n_100 && theta_n_100 <= 1.0)) {
    throw ConfigError("theta_n_100", "need 0 <= theta_n_0 < theta_n_100 <= 1");
  }
  if (!(theta_p_100 >= 0.0 && theta_p_100 < theta_p_0 && theta_p_0 <= 1.0)) {
    throw ConfigError("theta_p_0", "need 0 <= theta_p_100 < theta_p_0 <= 1");
  }

  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta", "must lie in [0, 1]");
  require_nonnegative(kprime_p, "kprime_p");
  require_nonnegative(kprime_n, "kprime_n");
  require_nonnegative(betaprime_p, "betaprime_p");
  require_nonnegative(betaprime_n, "betaprime_n");
  require_positive(M_SEI, "M_SEI");
  require_positive(M_Li, "M_Li");
  require_positive(rho_SEI, "rho_SEI");
  require_positive(rho_Li, "rho_Li");
  require_positive(kappa_SEI, "kappa_SEI");
  require_nonnegative(L_SEI_init, "L_SEI_init");
  require_nonnegative(L_Li_init, "L_Li_init");

  require_nonnegative(R_l, "R_l");
  require_positive(T, "T");
  require_positive(T_ref, "T_ref");
  require_positive(F, "F");
  require_positive(R_gas, "R_gas");

  if (!ocp_p) throw ConfigError("ocp.positive", "curve not loaded");
  if (!ocp_n) throw ConfigError("ocp.negative", "curve not loaded");
}

void Mesh::validate() const {
  auto check = [](int n, const char* field) {
    if (n < 3) throw ConfigError(field, "must be at least 3");
  };
  check(N_r_p, "N_r_p");
  check(N_r_n, "N_r_n");
  check(N_x_p, "N_x_p");
  check(N_x_s, "N_x_s");
  check(N_x_n, "N_x_n");
}

double window_capacity_Ah(const CellParameters& p, Electrode e) {
  const double window = e == Electrode::Positive ? p.theta_p_0 - p.theta_p_100 : p.theta_n_100 - p.theta_n_0;
  return p.A_cell * p.thickness(e) * p.c_s_max(e) * window * p.F / 3600.0;
}

}  // namespace espm
