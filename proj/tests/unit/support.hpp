#pragma once

#include <filesystem>
#include <string>

#include "espm/config.hpp"

namespace espm::test {

inline std::filesystem::path data_dir() { return ESPM_DATA_DIR; }

inline const Config& default_config() {
  static const Config cfg = load_config(data_dir() / "cell.json");
  return cfg;
}

inline const Config& aged_config() {
  static const Config cfg = load_config(data_dir() / "cell_aged3300.json");
  return cfg;
}

/// Default parameters with every side reaction and LAM path switched off.
inline CellParameters inert_parameters() {
  CellParameters p = default_config().params;
  p.k_f = 0.0;
  p.i0_pl = 0.0;
  p.kprime_p = p.kprime_n = p.betaprime_p = p.betaprime_n = 0.0;
  return p;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("espm_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace espm::test
