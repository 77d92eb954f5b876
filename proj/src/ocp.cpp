#include "espm/ocp.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

// Boost 1.74's pchip calls isnan unqualified.
#include <math.h>
#include <boost/math/interpolators/pchip.hpp>

#include "espm/errors.hpp"

namespace espm {

struct OcpCurve::Interpolant {
  boost::math::interpolators::pchip<std::vector<double>> spline;
};

OcpCurve::OcpCurve(std::vector<double> theta, std::vector<double> voltage)
    : theta_(std::move(theta)), voltage_(std::move(voltage)) {
  if (theta_.size() != voltage_.size()) throw ConfigError("ocp", "theta and voltage columns differ in length");
  if (theta_.size() < 4) throw ConfigError("ocp", "at least 4 points required");
  for (std::size_t i = 1; i < theta_.size(); ++i) {
    if (!(theta_[i] > theta_[i - 1])) throw ConfigError("ocp", "theta must be strictly increasing");
    if (voltage_[i] > voltage_[i - 1]) throw ConfigError("ocp", "voltage must be nonincreasing in theta");
  }
  if (theta_.front() > 0.0 || theta_.back() < 1.0) throw ConfigError("ocp", "table must cover theta in [0, 1]");
  auto x = theta_;
  auto y = voltage_;
  interp_ = std::make_shared<const Interpolant>(
      Interpolant{boost::math::interpolators::pchip<std::vector<double>>(std::move(x), std::move(y))});
}

double OcpCurve::operator()(double theta) const {
  return interp_->spline(std::clamp(theta, theta_.front(), theta_.back()));
}

OcpCurve OcpCurve::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("ocp", "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("ocp", path.string() + " is empty");
  line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
  if (line != "theta,voltage") throw ConfigError("ocp", path.string() + ": header must be 'theta,voltage'");

  std::vector<double> theta, voltage;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string a, b;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b)) {
      throw ConfigError("ocp", path.string() + ": malformed row " + std::to_string(row));
    }
    try {
      theta.push_back(std::stod(a));
      voltage.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw ConfigError("ocp", path.string() + ": non-numeric row " + std::to_string(row));
    }
  }
  return OcpCurve(std::move(theta), std::move(voltage));
}

}  // namespace espm
