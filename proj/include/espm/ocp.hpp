#pragma once

#include <filesystem>
#include <memory>
#include <vector>

namespace espm {

/// Open-circuit potential U(theta) of one electrode, tabulated on [0, 1] and
/// evaluated with monotone piecewise-cubic (PCHIP) interpolation. Arguments
/// outside the table are clamped to its end points.
class OcpCurve {
 public:
  OcpCurve(std::vector<double> theta, std::vector<double> voltage);

  /// Reads a `theta,voltage` CSV with a header row.
  static OcpCurve from_csv(const std::filesystem::path& path);

  double operator()(double theta) const;

  const std::vector<double>& theta() const noexcept { return theta_; }
  const std::vector<double>& voltage() const noexcept { return voltage_; }

 private:
  struct Interpolant;

  std::vector<double> theta_;
  std::vector<double> voltage_;
  std::shared_ptr<const Interpolant> interp_;
};

}  // namespace espm
