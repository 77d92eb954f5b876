#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "espm/parameters.hpp"

namespace espm {

struct SimulationSettings {
  double capacity_Ah = 12.4;  // nominal, sets the C-rate
  double cutoff_V = 2.8;
  double dt_s = 1.0;
  double max_time_s = 36000.0;
  double soc0 = 1.0;
};

struct PsoSettings {
  int swarm_size = 30;
  int iterations = 150;
  double inertia = 0.729;
  double cognitive = 1.494;
  double social = 1.494;
  std::uint64_t seed = 42;
};

struct IdentificationSettings {
  std::array<double, 3> weights{1.0, 1.0, 1.0};  // voltage, SOC_n, SOC_p
  PsoSettings pso;
  // Fresh-cell vector fixed during the aged phases, keyed by parameter name.
  std::map<std::string, double> theta1;
};

struct Config {
  CellParameters params;
  Mesh mesh;
  SimulationSettings simulation;
  IdentificationSettings identification;
  std::filesystem::path source;
};

/// Parses and validates a config document. Relative OCP paths resolve against
/// base_dir; the resolved absolute paths are kept in the parameters.
Config config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);

Config load_config(const std::filesystem::path& path);

CellParameters load_parameters(const std::filesystem::path& path);

nlohmann::json to_json(const Config& config);

void save_config(const Config& config, const std::filesystem::path& path);

}  // namespace espm
