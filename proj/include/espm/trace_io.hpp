#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "espm/cell_model.hpp"
#include "espm/config.hpp"

namespace espm {

inline constexpr const char* kTraceHeader = "t_s,V_cell_V,soc_n,soc_p,capacity_Ah,R_film_ohm,j_sei_A_m3,j_pl_A_m3";

struct TraceRow {
  double t_s, V_cell_V, soc_n, soc_p, capacity_Ah, R_film_ohm, j_sei_A_m3, j_pl_A_m3;
};

void write_trace_csv(const std::filesystem::path& path, const SimulationTrace& trace);

/// Reads a trace CSV and checks its schema: exact header, eight finite
/// columns, strictly increasing time. Throws Error on violation.
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

struct TraceSummary {
  double end_capacity_Ah = 0.0;
  double end_voltage_V = 0.0;
  double end_time_s = 0.0;
  double peak_R_film_ohm = 0.0;
  double end_R_film_ohm = 0.0;
  std::string termination;
};

TraceSummary summarize(const SimulationTrace& trace);

nlohmann::json summary_json(const TraceSummary& summary, const Config& config);

/// Checks a summary JSON written by summary_json; throws Error on violation.
TraceSummary read_summary_json(const std::filesystem::path& path);

/// Writes `doc` with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace espm
