#pragma once

#include <cmath>
#include <vector>

#include "espm/errors.hpp"
#include "espm/grid.hpp"
#include "espm/parameters.hpp"
#include "espm/state.hpp"
#include "espm/tridiagonal.hpp"
#include "espm/types.hpp"

namespace espm {

// ---------------------------------------------------------------------------
// Pore-wall fluxes
// ---------------------------------------------------------------------------

/// Volumetric lithium-ion source per region, mol/(m^3 s). I > 0 is discharge.
struct PoreWallFluxes {
  double J_p = 0.0;
  double J_s = 0.0;
  double J_n = 0.0;

  double in(Region r) const {
    switch (r) {
      case Region::Negative: return J_n;
      case Region::Separator: return J_s;
      case Region::Positive: return J_p;
    }
    return 0.0;
  }
};

inline PoreWallFluxes pore_wall_fluxes(double current, const CellParameters& p) {
  PoreWallFluxes f;
  f.J_n = current / (p.A_cell * p.F * p.L_n);
  f.J_p = -current / (p.A_cell * p.F * p.L_p);
  f.J_s = 0.0;
  return f;
}

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

inline double arrhenius_factor(double activation_energy, double R_gas, double T, double T_ref) {
  return std::exp(-activation_energy / R_gas * (1.0 / T - 1.0 / T_ref));
}

/// D_s(T) = D_s_ref exp(-E_a/R (1/T - 1/T_ref)).
inline double arrhenius_diffusivity(double T, const CellParameters& p, Electrode e) {
  const bool pos = e == Electrode::Positive;
  return (pos ? p.D_s_ref_p : p.D_s_ref_n) * arrhenius_factor(pos ? p.E_a_Ds_p : p.E_a_Ds_n, p.R_gas, T, p.T_ref);
}

template <typename Scalar>
Scalar polynomial(const std::vector<double>& coeffs, Scalar x) {
  Scalar acc(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

template <typename Scalar>
Scalar electrolyte_diffusivity(Scalar c, const CellParameters& p) {
  const auto& e = p.electrolyte;
  return polynomial(e.D_coeffs, c) * arrhenius_factor(e.E_a_D, p.R_gas, p.T, p.T_ref);
}

template <typename Scalar>
Scalar electrolyte_conductivity(Scalar c, const CellParameters& p) {
  const auto& e = p.electrolyte;
  return polynomial(e.kappa_coeffs, c) * arrhenius_factor(e.E_a_kappa, p.R_gas, p.T, p.T_ref);
}

template <typename Scalar>
struct EffectiveCoefficients {
  Scalar D_eff;
  Scalar kappa_eff;
};

/// Bruggeman scaling: X_eff = X(c, T) eps^brugg.
template <typename Scalar>
EffectiveCoefficients<Scalar> effective_coefficients(Scalar c, Scalar eps, const CellParameters& p) {
  using std::pow;
  const Scalar factor = pow(eps, p.brugg);
  return {electrolyte_diffusivity(c, p) * factor, electrolyte_conductivity(c, p) * factor};
}

inline double region_porosity(Region r, double eps_n, double eps_p, const CellParameters& p) {
  switch (r) {
    case Region::Negative: return eps_n;
    case Region::Separator: return p.eps_s;
    case Region::Positive: return eps_p;
  }
  return 0.0;
}

inline Vector cell_porosity(const AxialGrid& grid, double eps_n, double eps_p, const CellParameters& p) {
  Vector eps(grid.size());
  for (int i = 0; i < grid.size(); ++i) eps(i) = region_porosity(grid.region[i], eps_n, eps_p, p);
  return eps;
}

enum class Transported { Diffusivity, Conductivity };

/// Harmonic-mean face conductances X_eff / dx at the N-1 interior faces.
template <typename DC, typename DE>
VectorX<typename DC::Scalar> face_conductance(const Eigen::MatrixBase<DC>& c, const Eigen::MatrixBase<DE>& eps,
                                               const CellParameters& p, const AxialGrid& grid, Transported what) {
  using Scalar = typename DC::Scalar;
  using std::pow;
  const int n = grid.size();
  VectorX<Scalar> half(n);
  for (int i = 0; i < n; ++i) {
    const Scalar bulk = what == Transported::Diffusivity ? electrolyte_diffusivity(c(i), p)
                                                         : electrolyte_conductivity(c(i), p);
    half(i) = bulk * pow(eps(i), p.brugg) / (0.5 * grid.dx(i));
  }
  VectorX<Scalar> g(n - 1);
  for (int i = 0; i + 1 < n; ++i) g(i) = half(i) * half(i + 1) / (half(i) + half(i + 1));
  return g;
}

// ---------------------------------------------------------------------------
// Electrolyte mass transport
// ---------------------------------------------------------------------------

template <typename Derived>
void require_positive_concentration(const Eigen::MatrixBase<Derived>& c) {
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (!(c(i) > 0)) throw NumericalError("nonpositive electrolyte concentration in cell " + std::to_string(i));
  }
}

/// Finite-volume right-hand side dc_e/dt of
///   eps dc/dt = d/dx(D_eff dc/dx) + (1 - t_+) J,
/// with zero flux at both current collectors.
template <typename DC, typename DE>
VectorX<typename DC::Scalar> electrolyte_mass_rhs(const Eigen::MatrixBase<DC>& c, const Eigen::MatrixBase<DE>& eps,
                                                   const PoreWallFluxes& fluxes, const CellParameters& p,
                                                   const AxialGrid& grid) {
  using Scalar = typename DC::Scalar;
  require_positive_concentration(c);
  const int n = grid.size();
  const VectorX<Scalar> g = face_conductance(c, eps, p, grid, Transported::Diffusivity);
  VectorX<Scalar> rhs(n);
  for (int i = 0; i < n; ++i) {
    Scalar net = (1.0 - p.t_plus) * fluxes.in(grid.region[i]) * grid.dx(i);
    if (i + 1 < n) net += g(i) * (c(i + 1) - c(i));
    if (i > 0) net -= g(i - 1) * (c(i) - c(i - 1));
    rhs(i) = net / (eps(i) * grid.dx(i));
  }
  return rhs;
}

template <typename Scalar>
VectorX<Scalar> electrolyte_mass_rhs(const BasicCellState<Scalar>& state, const PoreWallFluxes& fluxes,
                                     const CellParameters& p, const AxialGrid& grid) {
  return electrolyte_mass_rhs(state.c_e, cell_porosity(grid, state.eps_n, state.eps_p, p), fluxes, p, grid);
}

/// One backward-Euler step of the electrolyte mass balance. Coefficients are
/// frozen at the old concentration, so the update is a single tridiagonal solve
/// and conserves sum(eps c dx) to round-off.
template <typename DC, typename DE>
VectorX<typename DC::Scalar> advance_electrolyte(const Eigen::MatrixBase<DC>& c, const Eigen::MatrixBase<DE>& eps,
                                                  const PoreWallFluxes& fluxes, const CellParameters& p,
                                                  const AxialGrid& grid, double dt) {
  using Scalar = typename DC::Scalar;
  require_positive_concentration(c);
  const int n = grid.size();
  const VectorX<Scalar> g = face_conductance(c, eps, p, grid, Transported::Diffusivity);
  VectorX<Scalar> lower = VectorX<Scalar>::Zero(n), diag(n), upper = VectorX<Scalar>::Zero(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    const Scalar capacity = eps(i) * grid.dx(i) / dt;
    diag(i) = capacity;
    rhs(i) = capacity * c(i) + (1.0 - p.t_plus) * fluxes.in(grid.region[i]) * grid.dx(i);
    if (i + 1 < n) {
      diag(i) += g(i);
      upper(i) = -g(i);
    }
    if (i > 0) {
      diag(i) += g(i - 1);
      lower(i) = -g(i - 1);
    }
  }
  VectorX<Scalar> next = solve_tridiagonal(lower, diag, upper, rhs);
  require_positive_concentration(next);
  return next;
}

/// sum(eps c dx): electrolyte lithium per unit cross-section, mol/m^2.
template <typename DC, typename DE>
typename DC::Scalar electrolyte_inventory(const Eigen::MatrixBase<DC>& c, const Eigen::MatrixBase<DE>& eps,
                                          const AxialGrid& grid) {
  return (c.array() * eps.array() * grid.dx.array()).sum();
}

// ---------------------------------------------------------------------------
// Electrolyte charge transport
// ---------------------------------------------------------------------------

template <typename Scalar>
struct ElectrolyteSolution {
  VectorX<Scalar> phi_e;  // V, phi_e(0) = 0 at the anode collector
  Scalar R_el;            // ohm
  Scalar delta_phi_e;     // V
};

/// R_el = 1/(2 A) (L_n/kappa_eff,n + 2 L_s/kappa_eff,s + L_p/kappa_eff,p) with
/// each kappa_eff evaluated at the region-average concentration.
template <typename DC>
typename DC::Scalar electrolyte_resistance(const Eigen::MatrixBase<DC>& c, double eps_n, double eps_p,
                                           const CellParameters& p, const AxialGrid& grid) {
  using Scalar = typename DC::Scalar;
  auto kappa_eff = [&](Region r) {
    const Scalar mean = c.segment(grid.begin(r), grid.count(r)).mean();
    const Scalar k = effective_coefficients<Scalar>(mean, region_porosity(r, eps_n, eps_p, p), p).kappa_eff;
    if (!(k > 0)) throw NumericalError("nonpositive effective conductivity");
    return k;
  };
  return (p.L_n / kappa_eff(Region::Negative) + 2.0 * p.L_s / kappa_eff(Region::Separator) +
          p.L_p / kappa_eff(Region::Positive)) /
         (2.0 * p.A_cell);
}

/// Concentration overpotential 2RT(1 - t_+)/F ln(c_cathode / c_anode) from the
/// collector cells.
template <typename DC>
typename DC::Scalar diffusion_potential(const Eigen::MatrixBase<DC>& c, const CellParameters& p) {
  using std::log;
  return 2.0 * p.R_gas * p.T * (1.0 - p.t_plus) / p.F * log(c(c.size() - 1) / c(0));
}

/// Solves the discretized charge balance
///   d/dx[kappa_eff (dphi/dx - 2RT(1-t_+)/F dln c/dx)] + F J = 0
/// with zero current at both collectors and phi_e(0) = 0. With those boundary
/// conditions the tridiagonal system is lower bidiagonal, so it is solved by a
/// forward sweep over face currents.
template <typename DC, typename DE>
ElectrolyteSolution<typename DC::Scalar> solve_electrolyte_potential(const Eigen::MatrixBase<DC>& c,
                                                                     const Eigen::MatrixBase<DE>& eps,
                                                                     const PoreWallFluxes& fluxes,
                                                                     const CellParameters& p, const AxialGrid& grid) {
  using Scalar = typename DC::Scalar;
  using std::log;
  require_positive_concentration(c);
  const int n = grid.size();
  const VectorX<Scalar> g = face_conductance(c, eps, p, grid, Transported::Conductivity);
  const double diffusion_coeff = 2.0 * p.R_gas * p.T * (1.0 - p.t_plus) / p.F;

  ElectrolyteSolution<Scalar> out;
  out.phi_e.resize(n);
  out.phi_e(0) = Scalar(0);
  Scalar face_current(0);
  for (int i = 0; i + 1 < n; ++i) {
    if (!(g(i) > 0) || !std::isfinite(static_cast<double>(g(i)))) {
      throw NumericalError("singular charge-transport system: degenerate kappa_eff at face " + std::to_string(i));
    }
    face_current += p.F * fluxes.in(grid.region[i]) * grid.dx(i);
    out.phi_e(i + 1) = out.phi_e(i) - face_current / g(i) + diffusion_coeff * (log(c(i + 1)) - log(c(i)));
  }

  // eps is only needed per region for R_el; take it from the first cell of each.
  const double eps_n = static_cast<double>(eps(grid.begin(Region::Negative)));
  const double eps_p = static_cast<double>(eps(grid.begin(Region::Positive)));
  out.R_el = electrolyte_resistance(c, eps_n, eps_p, p, grid);
  out.delta_phi_e = diffusion_potential(c, p);
  return out;
}

/// Volume average of phi_e over the anode region.
template <typename Scalar>
Scalar anode_electrolyte_potential(const ElectrolyteSolution<Scalar>& sol, const AxialGrid& grid) {
  return sol.phi_e.segment(grid.begin(Region::Negative), grid.count(Region::Negative)).mean();
}

// ---------------------------------------------------------------------------
// Solid-phase spherical diffusion
// ---------------------------------------------------------------------------
//
// `surface_flux` is D_s dc_s/dr at r = R, i.e. lithium entering the particle
// per unit surface area (mol/(m^2 s)).

/// Anode boundary flux with the side-reaction correction:
///   D dc/dr = (-I + L_n A (j_SEI + j_pl)) / (a_t,n A F L_n).
inline double anode_surface_flux(double current, double j_sei, double j_pl, double a_t_n, const CellParameters& p) {
  return (-current + p.L_n * p.A_cell * (j_sei + j_pl)) / (a_t_n * p.A_cell * p.F * p.L_n);
}

/// Cathode boundary flux: D dc/dr = I / (a_t,p A F L_p).
inline double cathode_surface_flux(double current, double a_t_p, const CellParameters& p) {
  return current / (a_t_p * p.A_cell * p.F * p.L_p);
}

template <typename Derived>
VectorX<typename Derived::Scalar> solid_diffusion_rhs(const Eigen::MatrixBase<Derived>& c, double surface_flux,
                                                      double D_s, const SphericalGrid& grid) {
  using Scalar = typename Derived::Scalar;
  const int n = grid.size();
  VectorX<Scalar> rhs(n);
  const double k = D_s / grid.dr;
  for (int i = 0; i < n; ++i) {
    Scalar net(0);
    if (i + 1 < n) net += k * grid.face_area(i) * (c(i + 1) - c(i));
    if (i > 0) net -= k * grid.face_area(i - 1) * (c(i) - c(i - 1));
    if (i + 1 == n) net += surface_flux * grid.surface_area();
    rhs(i) = net / grid.volume(i);
  }
  return rhs;
}

/// Backward-Euler step of the spherical diffusion equation.
template <typename Derived>
VectorX<typename Derived::Scalar> advance_solid(const Eigen::MatrixBase<Derived>& c, double surface_flux, double D_s,
                                                const SphericalGrid& grid, double dt) {
  using Scalar = typename Derived::Scalar;
  const int n = grid.size();
  const double k = D_s / grid.dr;
  VectorX<Scalar> lower = VectorX<Scalar>::Zero(n), diag(n), upper = VectorX<Scalar>::Zero(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    const double capacity = grid.volume(i) / dt;
    diag(i) = Scalar(capacity);
    rhs(i) = capacity * c(i);
    if (i + 1 < n) {
      diag(i) += k * grid.face_area(i);
      upper(i) = Scalar(-k * grid.face_area(i));
    }
    if (i > 0) {
      diag(i) += k * grid.face_area(i - 1);
      lower(i) = Scalar(-k * grid.face_area(i - 1));
    }
  }
  rhs(n - 1) += surface_flux * grid.surface_area();
  return solve_tridiagonal(lower, diag, upper, rhs);
}

/// Surface value extrapolated from the outer shell with the boundary gradient.
template <typename Derived>
typename Derived::Scalar surface_concentration(const Eigen::MatrixBase<Derived>& c, double surface_flux, double D_s,
                                               const SphericalGrid& grid) {
  return c(c.size() - 1) + surface_flux * 0.5 * grid.dr / D_s;
}

/// Volume-weighted particle average.
template <typename Derived>
typename Derived::Scalar average_concentration(const Eigen::MatrixBase<Derived>& c, const SphericalGrid& grid) {
  return c.dot(grid.volume) / grid.volume.sum();
}

}  // namespace espm
