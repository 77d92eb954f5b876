#pragma once

#include <optional>
#include <string>
#include <vector>

#include "espm/errors.hpp"
#include "espm/grid.hpp"
#include "espm/parameters.hpp"
#include "espm/state.hpp"

namespace espm {

/// Outputs at one instant. Side currents and j_int are the values applied
/// over the step that ended at `t`; everything else is evaluated at the state
/// reached at `t`.
struct StepOutput {
  double t = 0.0;
  double current = 0.0;
  double V_cell = 0.0;
  double soc_n = 0.0, soc_p = 0.0;
  double U_p = 0.0, U_n = 0.0;
  double eta_p = 0.0, eta_n = 0.0;
  double phi_s_n = 0.0, phi_e_n = 0.0;
  double delta_phi_e = 0.0;
  double R_film = 0.0, R_el = 0.0;
  double j_int = 0.0, j_SEI = 0.0, j_pl = 0.0;
  double capacity_Ah = 0.0;
};

/// I/(A L_n) - j_SEI - j_pl - j_int, evaluated in the same order j_int is
/// formed, so it is exactly zero for every step the model produces.
double flux_split_residual(const StepOutput& out, const CellParameters& p);

enum class Termination { Cutoff, Exhausted, MaxTime };

const char* to_string(Termination t);

struct SimulationTrace {
  std::vector<StepOutput> samples;
  Termination termination = Termination::MaxTime;
  double start_time = 0.0;
  // Interpolated at the cutoff crossing; equal to the last sample otherwise.
  double final_time = 0.0;
  double final_capacity_Ah = 0.0;
  double final_voltage = 0.0;
  std::string note;
};

/// Fixed step size. The default matches a C/3 discharge.
struct DtPolicy {
  double dt = 1.0;

  double step(double /*t*/) const { return dt; }
};

struct RunOptions {
  double current = 0.0;           // A, > 0 discharge
  std::optional<double> cutoff;   // V; none runs to max_time
  double soc0 = 1.0;
  DtPolicy dt;
  double max_time = 36000.0;      // s, measured from the initial state
};

/// Annotated failure of a constant-current run.
class SimulationError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Kinetics and state of charge
// ---------------------------------------------------------------------------

/// i0 = k F sqrt(c_avg c_surf (c_max - c_surf)), A/m^2. Zero at the
/// saturation bounds; throws SaturationError outside [0, c_max].
double exchange_current(double c_surf, double c_avg, const CellParameters& p, Electrode e);

/// eta = 2RT/F asinh(I / (2 A a_t L i0)), signed so that discharge gives
/// eta_n > 0 and eta_p < 0. Throws SaturationError when I != 0 and i0 == 0.
double overpotential(double current, double a_t, double L, double i0, const CellParameters& p, Electrode e);

struct StateOfCharge {
  double soc_n;
  double soc_p;
};

/// Surface-stoichiometry SOCs; not clamped.
StateOfCharge soc(const CellState& state, const CellParameters& p);

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

/// Enhanced single particle model with SEI, plating, and LAM. Holds the grids
/// for one (parameters, mesh) pair; const and shareable across threads.
class CellModel {
 public:
  CellModel(CellParameters params, Mesh mesh);

  const CellParameters& params() const { return params_; }
  const Mesh& mesh() const { return mesh_; }
  const AxialGrid& axial_grid() const { return axial_; }
  const SphericalGrid& sphere(Electrode e) const { return e == Electrode::Positive ? sphere_p_ : sphere_n_; }
  double solid_diffusivity(Electrode e) const { return e == Electrode::Positive ? D_s_p_ : D_s_n_; }

  /// Uniform solid concentrations consistent with soc0, electrolyte at c_e0,
  /// fresh areas, and the configured initial film.
  CellState initial_state(double soc0) const;

  /// Outputs at a fixed state for applied current I (no time advance).
  StepOutput evaluate(const CellState& state, double current) const;

  /// Advances `state` by dt at constant current. The state is left untouched
  /// if the step fails before its update is committed.
  StepOutput advance(CellState& state, double current, double dt) const;

  /// Same, reusing `now` = evaluate(state, current) from the caller.
  StepOutput advance(CellState& state, double current, double dt, const StepOutput& now) const;

  /// Lithium in the solid phase of both electrodes, mol. Each particle's
  /// active volume scales with a_t R / 3.
  double solid_inventory(const CellState& state) const;
  double solid_inventory(const CellState& state, Electrode e) const;

  /// Lithium in the electrolyte, mol.
  double electrolyte_inventory(const CellState& state) const;

 private:
  CellParameters params_;
  Mesh mesh_;
  AxialGrid axial_;
  SphericalGrid sphere_p_;
  SphericalGrid sphere_n_;
  double D_s_p_ = 0.0;
  double D_s_n_ = 0.0;
};

CellState initial_state(const CellParameters& params, const Mesh& mesh, double soc0);

std::pair<CellState, StepOutput> step(const CellState& state, double current, double dt, const CellParameters& params,
                                      const Mesh& mesh);

/// Integrates only the LAM dynamics from state.t to t_end (Heun, step dt) and
/// refreshes areas and porosity. Concentrations are untouched.
void age_active_material(CellState& state, const CellParameters& params, double t_end, double dt);

/// Steps at constant current until the cutoff is crossed, a surface
/// concentration saturates, or max_time elapses.
SimulationTrace run_constant_current(const CellModel& model, CellState state, const RunOptions& options);

SimulationTrace run_constant_current(const CellParameters& params, const Mesh& mesh, const RunOptions& options);

}  // namespace espm
