#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "espm/cell_model.hpp"
#include "espm/config.hpp"
#include "espm/trace_io.hpp"

namespace espm {

enum class SweepParameter { KprimeN, BetaprimeN, Grid };

const char* to_string(SweepParameter p);

/// Parses "kprime_n", "betaprime_n" or "both".
SweepParameter parse_sweep_parameter(const std::string& text);

/// Default cycle duration remapping cycle-domain LAM coefficients to time.
inline constexpr double kDefaultCycleDuration = 5400.0;

struct SweepSpec {
  SweepParameter parameter = SweepParameter::BetaprimeN;
  double min = 0.741e-9;  // swept coefficient (betaprime_n for Grid), 1/s
  double max = 9.59e-9;
  int count = 8;
  // kprime_n range for Grid; the fixed kprime_n for a betaprime_n sweep is k_min.
  double k_min = 1.40e-10;
  double k_max = 6.30e-10;
  int k_count = 2;
  double fixed_betaprime_n = 0.741e-9;  // used by a kprime_n sweep
  double cycles = 3300.0;
  double T_cycle = kDefaultCycleDuration;  // s

  double horizon() const { return cycles * T_cycle; }

  /// Throws ConfigError: min < max and count >= 2, or min == max with count == 1.
  void validate() const;
};

/// `count` evenly spaced values from min to max inclusive.
std::vector<double> sweep_values(double min, double max, int count);

/// Initial state at soc0 whose LAM state has been integrated to `horizon_s`.
/// Concentrations and film are those of the fresh initial state.
CellState pre_aged_state(const CellModel& model, double soc0, double horizon_s);

/// Step used when pre-aging the LAM state, s.
inline constexpr double kAgingStep = 600.0;

struct SweepPoint {
  double kprime_n = 0.0;
  double betaprime_n = 0.0;
  double a_t_n_start = 0.0;
  TraceSummary summary;
  std::string trace_file;  // relative to the output directory; empty when not written
};

struct SweepResult {
  std::vector<SweepPoint> points;  // sorted by (kprime_n, betaprime_n)
  bool capacity_decreasing = false;
  bool R_film_increasing = false;
};

/// Simulates every grid point from `config` with cathode LAM off. When
/// out_dir is nonempty each point's trace is written there.
SweepResult run_sweep(const Config& config, const SweepSpec& spec, const RunOptions& discharge, unsigned jobs,
                      const std::filesystem::path& out_dir);

inline constexpr const char* kEnvelopeHeader =
    "kprime_n_1_s,betaprime_n_1_s,a_t_n_start_1_m,capacity_Ah,final_R_film_ohm,final_voltage_V,termination";

void write_envelope_csv(const std::filesystem::path& path, const SweepResult& result);

/// Re-reads an envelope and checks its schema and ordering; throws Error.
std::size_t validate_envelope_csv(const std::filesystem::path& path);

nlohmann::json sweep_summary_json(const SweepResult& result, const SweepSpec& spec, const RunOptions& discharge,
                                  const Config& config);

}  // namespace espm
