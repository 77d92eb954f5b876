#pragma once

#include <cmath>

#include "espm/errors.hpp"
#include "espm/types.hpp"

namespace espm {

/// Thomas algorithm for a tridiagonal system.
///
/// Row i reads lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i];
/// lower[0] and upper[n-1] are ignored. Throws NumericalError on a zero pivot.
template <typename DL, typename DD, typename DU, typename DR>
VectorX<typename DD::Scalar> solve_tridiagonal(const Eigen::MatrixBase<DL>& lower,
                                                const Eigen::MatrixBase<DD>& diag,
                                                const Eigen::MatrixBase<DU>& upper,
                                                const Eigen::MatrixBase<DR>& rhs) {
  using Scalar = typename DD::Scalar;
  const Eigen::Index n = diag.size();
  VectorX<Scalar> c_prime(n);
  VectorX<Scalar> x(n);

  Scalar pivot = diag(0);
  if (pivot == Scalar(0) || !std::isfinite(pivot)) throw NumericalError("singular tridiagonal system");
  c_prime(0) = n > 1 ? upper(0) / pivot : Scalar(0);
  x(0) = rhs(0) / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = diag(i) - lower(i) * c_prime(i - 1);
    if (pivot == Scalar(0) || !std::isfinite(pivot)) throw NumericalError("singular tridiagonal system");
    c_prime(i) = i + 1 < n ? upper(i) / pivot : Scalar(0);
    x(i) = (rhs(i) - lower(i) * x(i - 1)) / pivot;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) x(i) -= c_prime(i) * x(i + 1);
  return x;
}

}  // namespace espm
