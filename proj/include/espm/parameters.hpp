#pragma once

#include <memory>
#include <string>
#include <vector>

#include "espm/ocp.hpp"
#include "espm/types.hpp"

namespace espm {

/// Bulk electrolyte correlations. Both are polynomials in concentration
/// (mol/m^3) with an Arrhenius temperature factor:
///   D(c, T)     = sum_k D_coeffs[k] c^k     * exp(-E_a_D / R (1/T - 1/T_ref))
///   kappa(c, T) = sum_k kappa_coeffs[k] c^k * exp(-E_a_kappa / R (1/T - 1/T_ref))
struct ElectrolyteProperties {
  double c_e0 = 1000.0;  // nominal concentration, mol/m^3
  std::vector<double> D_coeffs;
  double E_a_D = 0.0;
  std::vector<double> kappa_coeffs;
  double E_a_kappa = 0.0;
};

struct CellParameters {
  // geometry
  double A_cell = 0.0;  // m^2
  double L_p = 0.0, L_s = 0.0, L_n = 0.0;  // m
  double R_p = 0.0, R_n = 0.0;  // m

  // transport
  double t_plus = 0.0;
  double brugg = 0.0;
  double D_s_ref_p = 0.0, D_s_ref_n = 0.0;  // m^2/s
  double E_a_Ds_p = 0.0, E_a_Ds_n = 0.0;  // J/mol
  double eps_s = 0.0;  // separator porosity
  ElectrolyteProperties electrolyte;

  // kinetics
  double k_p = 0.0, k_n = 0.0;  // m^2.5/(mol^0.5 s)
  double E_a_k_p = 0.0, E_a_k_n = 0.0;
  double alpha = 0.0;
  double i0_pl = 0.0;  // A/m^2
  double k_f = 0.0;  // m/s
  double E_a_kf = 0.0;
  double c_solv_surf = 0.0;  // mol/m^3

  // composition
  double v_p = 0.0, v_n = 0.0;
  double v_p_filler = 0.0, v_n_filler = 0.0;
  double c_s_max_p = 0.0, c_s_max_n = 0.0;  // mol/m^3

  // stoichiometry windows
  double theta_p_0 = 0.0, theta_p_100 = 0.0;
  double theta_n_0 = 0.0, theta_n_100 = 0.0;

  // aging
  double beta = 0.0;
  double kprime_p = 0.0, kprime_n = 0.0;  // 1/s
  double betaprime_p = 0.0, betaprime_n = 0.0;  // 1/s
  double M_SEI = 0.0, M_Li = 0.0;  // kg/mol
  double rho_SEI = 0.0, rho_Li = 0.0;  // kg/m^3
  double kappa_SEI = 0.0;  // S/m
  double L_SEI_init = 0.0, L_Li_init = 0.0;  // pre-aged film, m

  double R_l = 0.0;  // ohm

  double T = 298.15, T_ref = 298.15;  // K

  double F = kFaraday;
  double R_gas = kGasConstant;

  std::shared_ptr<const OcpCurve> ocp_p;
  std::shared_ptr<const OcpCurve> ocp_n;
  // Source files of the OCP tables, kept for serialization.
  std::string ocp_p_path;
  std::string ocp_n_path;

  double radius(Electrode e) const { return e == Electrode::Positive ? R_p : R_n; }
  double thickness(Electrode e) const { return e == Electrode::Positive ? L_p : L_n; }
  double c_s_max(Electrode e) const { return e == Electrode::Positive ? c_s_max_p : c_s_max_n; }
  double rate_constant(Electrode e) const { return e == Electrode::Positive ? k_p : k_n; }
  double kprime(Electrode e) const { return e == Electrode::Positive ? kprime_p : kprime_n; }
  double betaprime(Electrode e) const { return e == Electrode::Positive ? betaprime_p : betaprime_n; }

  /// a_i = 3 / R_i
  double specific_area(Electrode e) const { return 3.0 / radius(e); }

  /// eps_i0 = 1 - v_i - v_i_filler
  double initial_porosity(Electrode e) const {
    return e == Electrode::Positive ? 1.0 - v_p - v_p_filler : 1.0 - v_n - v_n_filler;
  }

  const OcpCurve& ocp(Electrode e) const { return e == Electrode::Positive ? *ocp_p : *ocp_n; }

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

/// Discretization: radial shells per particle and axial cells per region.
struct Mesh {
  int N_r_p = 20, N_r_n = 20;
  int N_x_p = 10, N_x_s = 10, N_x_n = 10;

  int axial_cells() const { return N_x_n + N_x_s + N_x_p; }
  int radial_cells(Electrode e) const { return e == Electrode::Positive ? N_r_p : N_r_n; }

  void validate() const;
};

/// Theoretical capacity (Ah) of an electrode's stoichiometry window.
double window_capacity_Ah(const CellParameters& p, Electrode e);

}  // namespace espm
