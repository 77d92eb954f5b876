#include "espm/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "espm/errors.hpp"
#include "espm/parallel.hpp"

namespace espm {

const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::KprimeN: return "kprime_n";
    case SweepParameter::BetaprimeN: return "betaprime_n";
    case SweepParameter::Grid: return "both";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(const std::string& text) {
  if (text == "kprime_n") return SweepParameter::KprimeN;
  if (text == "betaprime_n") return SweepParameter::BetaprimeN;
  if (text == "both") return SweepParameter::Grid;
  throw ConfigError("sweep.parameter", "must be kprime_n, betaprime_n or both, got '" + text + "'");
}

namespace {

void check_range(double min, double max, int count, const char* field) {
  if (!std::isfinite(min) || !std::isfinite(max) || min < 0.0) {
    throw ConfigError(field, "range must be finite and nonnegative");
  }
  const bool single = count == 1 && min == max;
  if (!single && !(min < max && count >= 2)) {
    throw ConfigError(field, "need min < max and count >= 2 (or min == max with count == 1)");
  }
}

}  // namespace

void SweepSpec::validate() const {
  check_range(min, max, count, "sweep.range");
  if (parameter == SweepParameter::Grid) check_range(k_min, k_max, k_count, "sweep.k_range");
  if (!(k_min >= 0.0)) throw ConfigError("sweep.kprime_n", "must be nonnegative");
  if (!(cycles >= 0.0)) throw ConfigError("sweep.cycles", "must be nonnegative");
  if (!(T_cycle > 0.0)) throw ConfigError("sweep.T_cycle", "must be strictly positive");
}

std::vector<double> sweep_values(double min, double max, int count) {
  if (count == 1) return {min};
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = min + (max - min) * i / (count - 1);
  v.back() = max;
  return v;
}

CellState pre_aged_state(const CellModel& model, double soc0, double horizon_s) {
  CellState s = model.initial_state(soc0);
  age_active_material(s, model.params(), horizon_s, kAgingStep);
  return s;
}

SweepResult run_sweep(const Config& config, const SweepSpec& spec, const RunOptions& discharge, unsigned jobs,
                      const std::filesystem::path& out_dir) {
  spec.validate();
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  std::vector<std::pair<double, double>> grid;  // (kprime_n, betaprime_n)
  switch (spec.parameter) {
    case SweepParameter::BetaprimeN:
      for (double b : sweep_values(spec.min, spec.max, spec.count)) grid.emplace_back(spec.k_min, b);
      break;
    case SweepParameter::KprimeN:
      for (double k : sweep_values(spec.min, spec.max, spec.count)) grid.emplace_back(k, spec.fixed_betaprime_n);
      break;
    case SweepParameter::Grid:
      for (double k : sweep_values(spec.k_min, spec.k_max, spec.k_count)) {
        for (double b : sweep_values(spec.min, spec.max, spec.count)) grid.emplace_back(k, b);
      }
      break;
  }
  std::sort(grid.begin(), grid.end());

  SweepResult result;
  result.points.resize(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    CellParameters p = config.params;
    p.kprime_p = p.betaprime_p = 0.0;
    p.kprime_n = grid[i].first;
    p.betaprime_n = grid[i].second;
    const CellModel model(p, config.mesh);
    CellState start = pre_aged_state(model, discharge.soc0, spec.horizon());
    SweepPoint& point = result.points[i];
    point.kprime_n = p.kprime_n;
    point.betaprime_n = p.betaprime_n;
    point.a_t_n_start = start.a_t_n;
    const SimulationTrace trace = run_constant_current(model, std::move(start), discharge);
    point.summary = summarize(trace);
    if (!out_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "point_%03zu.csv", i);
      point.trace_file = name;
      write_trace_csv(out_dir / name, trace);
    }
  });

  // Verdicts along betaprime_n at each fixed kprime_n; a kprime_n sweep has
  // no betaprime_n direction and reports the trend along kprime_n instead.
  std::map<double, std::vector<const SweepPoint*>> rows;
  for (const auto& pt : result.points) {
    rows[spec.parameter == SweepParameter::KprimeN ? pt.betaprime_n : pt.kprime_n].push_back(&pt);
  }
  result.capacity_decreasing = true;
  result.R_film_increasing = true;
  for (const auto& [key, row] : rows) {
    (void)key;
    for (std::size_t i = 1; i < row.size(); ++i) {
      result.capacity_decreasing =
          result.capacity_decreasing && row[i]->summary.end_capacity_Ah < row[i - 1]->summary.end_capacity_Ah;
      result.R_film_increasing =
          result.R_film_increasing && row[i]->summary.end_R_film_ohm > row[i - 1]->summary.end_R_film_ohm;
    }
  }
  return result;
}

void write_envelope_csv(const std::filesystem::path& path, const SweepResult& result) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write envelope " + path.string());
  out.precision(17);
  out << kEnvelopeHeader << '\n';
  for (const auto& p : result.points) {
    out << p.kprime_n << ',' << p.betaprime_n << ',' << p.a_t_n_start << ',' << p.summary.end_capacity_Ah << ','
        << p.summary.end_R_film_ohm << ',' << p.summary.end_voltage_V << ',' << p.summary.termination << '\n';
  }
  if (!out) throw Error("failed writing envelope " + path.string());
}

std::size_t validate_envelope_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open envelope " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kEnvelopeHeader) throw Error(path.string() + ": bad envelope header");
  std::size_t rows = 0;
  std::pair<double, double> prev{-1.0, -1.0};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw Error(path.string() + ": envelope row needs 7 columns");
    double v[6];
    for (int i = 0; i < 6; ++i) {
      char* end = nullptr;
      v[i] = std::strtod(cells[i].c_str(), &end);
      if (end == cells[i].c_str() || *end != '\0' || !std::isfinite(v[i])) {
        throw Error(path.string() + ": bad number in envelope");
      }
    }
    if (cells[6] != "cutoff" && cells[6] != "exhausted" && cells[6] != "max_time") {
      throw Error(path.string() + ": unknown termination '" + cells[6] + "'");
    }
    const std::pair<double, double> key{v[0], v[1]};
    if (rows > 0 && !(prev < key)) throw Error(path.string() + ": envelope rows not sorted");
    prev = key;
    ++rows;
  }
  if (rows == 0) throw Error(path.string() + ": envelope is empty");
  return rows;
}

nlohmann::json sweep_summary_json(const SweepResult& result, const SweepSpec& spec, const RunOptions& discharge,
                                  const Config& config) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : result.points) {
    points.push_back({{"kprime_n_1_s", p.kprime_n},
                      {"betaprime_n_1_s", p.betaprime_n},
                      {"a_t_n_start_1_m", p.a_t_n_start},
                      {"capacity_Ah", p.summary.end_capacity_Ah},
                      {"final_R_film_ohm", p.summary.end_R_film_ohm},
                      {"peak_R_film_ohm", p.summary.peak_R_film_ohm},
                      {"final_voltage_V", p.summary.end_voltage_V},
                      {"termination", p.summary.termination},
                      {"trace", p.trace_file}});
  }
  return {{"parameter", to_string(spec.parameter)},
          {"range", {spec.min, spec.max}},
          {"count", spec.count},
          {"kprime_n_range", {spec.k_min, spec.k_max}},
          {"kprime_n_count", spec.k_count},
          {"fixed_betaprime_n", spec.fixed_betaprime_n},
          {"cycles", spec.cycles},
          {"T_cycle_s", spec.T_cycle},
          {"horizon_s", spec.horizon()},
          {"current_A", discharge.current},
          {"cutoff_V", discharge.cutoff ? nlohmann::json(*discharge.cutoff) : nlohmann::json(nullptr)},
          {"capacity_decreasing", result.capacity_decreasing},
          {"R_film_increasing", result.R_film_increasing},
          {"points", points},
          {"config", to_json(config)}};
}

}  // namespace espm
