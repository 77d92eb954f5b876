#pragma once

#include "espm/types.hpp"

namespace espm {

/// Discretized concentrations plus the aging state of one cell.
///
/// `c_e` is ordered from the anode current collector: N_x_n anode cells, then
/// separator, then cathode. `c_s_surf_*` hold the particle surface
/// concentrations extrapolated with the boundary flux of the last step.
template <typename Scalar>
struct BasicCellState {
  VectorX<Scalar> c_s_p;
  VectorX<Scalar> c_s_n;
  VectorX<Scalar> c_e;
  Scalar c_s_surf_p{0};
  Scalar c_s_surf_n{0};

  Scalar c_SEI{0};
  Scalar c_Li{0};
  Scalar L_SEI{0};
  Scalar L_Li{0};
  Scalar L_film{0};

  Scalar a_f_p{0}, a_f_n{0};
  Scalar a_ina_p{0}, a_ina_n{0};
  Scalar a_t_p{0}, a_t_n{0};

  Scalar eps_p{0}, eps_n{0};

  Scalar t{0};

  const VectorX<Scalar>& solid(Electrode e) const { return e == Electrode::Positive ? c_s_p : c_s_n; }
  Scalar surface(Electrode e) const { return e == Electrode::Positive ? c_s_surf_p : c_s_surf_n; }
  Scalar total_area(Electrode e) const { return e == Electrode::Positive ? a_t_p : a_t_n; }
};

using CellState = BasicCellState<double>;

}  // namespace espm
