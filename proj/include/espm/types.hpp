#pragma once

#include <Eigen/Core>

namespace espm {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Vector = VectorX<double>;

enum class Electrode { Positive, Negative };

// Axial regions, ordered from the anode current collector (x = 0).
enum class Region { Negative = 0, Separator = 1, Positive = 2 };

inline constexpr double kFaraday = 96485.33212;      // C/mol
inline constexpr double kGasConstant = 8.314462618;  // J/(mol K)

}  // namespace espm
