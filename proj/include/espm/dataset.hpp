#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace espm {

/// Constant-current voltage record. Samples are held on a time axis sorted
/// ascending; capacity-axis files are converted with t = 3600 Q / I.
struct ExperimentalDataset {
  std::vector<double> t_s;
  std::vector<double> voltage_V;
  double current_A = 0.0;
  std::optional<double> nominal_capacity_Ah;
  double temperature_K = 298.15;
  std::string cycle = "fresh";  // fresh | 1000 | 3300

  std::size_t size() const { return t_s.size(); }
  double duration() const { return t_s.empty() ? 0.0 : t_s.back(); }
};

/// Reads a dataset CSV. Optional `# key=value` lines before the header carry
/// current_A, nominal_capacity_Ah, temperature_K and cycle. The header is
/// `t_s,voltage_V` or `capacity_Ah,voltage_V`. `current_A` overrides the
/// metadata value when given. Rows are sorted by the axis column.
ExperimentalDataset load_dataset(const std::filesystem::path& path, std::optional<double> current_A = std::nullopt);

/// Checks the dataset invariants: at least 10 samples, a strictly increasing
/// nonnegative time axis, finite voltages, nonzero current.
void validate_dataset(const ExperimentalDataset& data);

void save_dataset(const std::filesystem::path& path, const ExperimentalDataset& data);

/// SOC(k) = 1 - I t(k) / (3600 Q_nom).
std::vector<double> soc_exp_from_coulomb_counting(const ExperimentalDataset& data, double capacity_nominal_Ah);

}  // namespace espm
