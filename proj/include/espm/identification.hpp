#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "espm/config.hpp"
#include "espm/dataset.hpp"
#include "espm/pso.hpp"

namespace espm {

enum class Phase { Fresh, Aged1000, Aged3300 };

const char* to_string(Phase p);

/// Parses "fresh", "aged1000" or "aged3300".
Phase parse_phase(const std::string& text);

/// Dataset cycle label expected for a phase: "fresh", "1000" or "3300".
const char* cycle_label(Phase p);

struct ParameterSpec {
  std::string name;
  std::string unit;
  double lower = 0.0;
  double upper = 0.0;
  double guess = 0.0;      // projected into [lower, upper]
  double reference = 0.0;  // reference identified value, for comparison only
};

/// Identified vector, bounds, guesses and reference values for a phase.
std::vector<ParameterSpec> phase_parameters(Phase phase);

/// Reference cost of the identified vector for a phase.
double reference_cost(Phase phase);

/// Name of the film ratio parameter; it maps onto L_SEI_init = ratio * kappa_SEI.
inline constexpr const char* kFilmRatio = "L_SEI_over_kappa_SEI";

void apply_parameter(CellParameters& p, const std::string& name, double value);
double read_parameter(const CellParameters& p, const std::string& name);

/// Phase for a dataset cycle label.
Phase phase_for_cycle(const std::string& cycle);

/// Side-reaction switches of a phase: fresh turns SEI and plating off,
/// aged1000 turns plating off; LAM is off in every phase.
void apply_phase_switches(CellParameters& p, Phase phase);

/// Configured parameters with the phase's side-reaction switches applied.
/// Aged phases also fix the fresh vector from config.identification.theta1.
/// LAM is off in every phase. Throws ConfigError when the config is not
/// consistent with the phase.
CellParameters phase_base_parameters(Phase phase, const Config& config);

struct CostWeights {
  double voltage = 1.0;
  double soc_n = 1.0;
  double soc_p = 1.0;
};

struct IdentificationProblem {
  std::vector<ParameterSpec> parameters;
  ExperimentalDataset data;
  CostWeights weights;
  CellParameters base;
  Mesh mesh;
  double dt = 1.0;
  double capacity_nominal_Ah = 0.0;  // Coulomb-counting reference
};

struct CostBreakdown {
  double total = 0.0;
  double rmse_voltage = 0.0;
  double rmse_soc_n = 0.0;
  double rmse_soc_p = 0.0;
  bool penalized = false;
  double completed_fraction = 1.0;
  std::string failure;
};

/// Penalty for a simulation that covers only `completed_fraction` of the
/// dataset horizon: 1e3 (1 + shortfall).
double penalty_cost(double completed_fraction);

/// J = w1 RMSE(V) + w2 RMSE(SOC_n - SOC_exp) + w3 RMSE(SOC_p - SOC_exp), with
/// the simulation sampled at the dataset times by linear interpolation.
CostBreakdown evaluate_cost(const IdentificationProblem& problem, const Vector& theta);

double cost(const IdentificationProblem& problem, const Vector& theta);

IdentificationProblem make_problem(Phase phase, const Config& config, const ExperimentalDataset& data);

PsoConfig pso_config_from(const Config& config, std::optional<std::uint64_t> seed, unsigned jobs);

struct IdentificationResult {
  Phase phase = Phase::Fresh;
  IdentificationProblem problem;
  PsoResult pso;
  Vector values;
  CostBreakdown cost;
  CostBreakdown guess_cost;
  CellParameters identified;  // base with the identified values applied
};

/// Runs PSO on the phase's vector. Throws OptimizationError when every
/// evaluation was penalized.
IdentificationResult identify(Phase phase, const Config& config, const ExperimentalDataset& data,
                              const PsoConfig& pso);

IdentificationResult identify_fresh(const Config& config, const ExperimentalDataset& data, const PsoConfig& pso);

/// `phase` must be Aged1000 or Aged3300.
IdentificationResult identify_aged(const Config& config, const ExperimentalDataset& data, Phase phase,
                                   const PsoConfig& pso);

/// Deterministic report: identified values with bounds, guesses and reference
/// values, cost terms, best-cost history, PSO settings and the resolved config.
nlohmann::json identification_report(const IdentificationResult& result, const Config& config,
                                     const PsoConfig& pso);

/// Throws Error when a report lacks a required key or has inconsistent values.
void validate_report(const nlohmann::json& report);

/// Voltage record of a constant-current discharge of `truth` to `cutoff_V`,
/// sampled every `sample_interval_s` with Gaussian voltage noise. The nominal
/// capacity is the smaller electrode window capacity.
ExperimentalDataset synthesize_dataset(const CellParameters& truth, const Mesh& mesh, double current_A,
                                       double cutoff_V, double dt, double sample_interval_s, double noise_V,
                                       std::uint64_t seed, const std::string& cycle);

}  // namespace espm
