#include "espm/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "espm/errors.hpp"

namespace espm {

namespace {

std::string trim(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), '\r'), s.end());
  return s;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path, const SimulationTrace& trace) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write trace " + path.string());
  out.precision(17);
  out << kTraceHeader << '\n';
  for (const auto& s : trace.samples) {
    out << s.t << ',' << s.V_cell << ',' << s.soc_n << ',' << s.soc_p << ',' << s.capacity_Ah << ',' << s.R_film << ','
        << s.j_SEI << ',' << s.j_pl << '\n';
  }
  if (!out) throw Error("failed writing trace " + path.string());
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trace " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != kTraceHeader) {
    throw Error(path.string() + ": trace header must be '" + std::string(kTraceHeader) + "'");
  }
  std::vector<TraceRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    double v[8];
    int n = 0;
    while (std::getline(fields, cell, ',')) {
      if (n == 8) throw Error(path.string() + ": too many columns on line " + std::to_string(lineno));
      char* end = nullptr;
      v[n] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0' || !std::isfinite(v[n])) {
        throw Error(path.string() + ": bad number on line " + std::to_string(lineno));
      }
      ++n;
    }
    if (n != 8) throw Error(path.string() + ": expected 8 columns on line " + std::to_string(lineno));
    TraceRow r{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
    if (!rows.empty() && !(r.t_s > rows.back().t_s)) {
      throw Error(path.string() + ": time not strictly increasing on line " + std::to_string(lineno));
    }
    rows.push_back(r);
  }
  if (rows.empty()) throw Error(path.string() + ": trace has no rows");
  return rows;
}

TraceSummary summarize(const SimulationTrace& trace) {
  TraceSummary s;
  s.end_capacity_Ah = trace.final_capacity_Ah;
  s.end_voltage_V = trace.final_voltage;
  s.end_time_s = trace.final_time;
  s.termination = to_string(trace.termination);
  for (const auto& o : trace.samples) s.peak_R_film_ohm = std::max(s.peak_R_film_ohm, o.R_film);
  if (!trace.samples.empty()) s.end_R_film_ohm = trace.samples.back().R_film;
  return s;
}

nlohmann::json summary_json(const TraceSummary& s, const Config& config) {
  return {{"end_capacity_Ah", s.end_capacity_Ah},
          {"end_voltage_V", s.end_voltage_V},
          {"end_time_s", s.end_time_s},
          {"peak_R_film_ohm", s.peak_R_film_ohm},
          {"end_R_film_ohm", s.end_R_film_ohm},
          {"termination", s.termination},
          {"config", to_json(config)}};
}

TraceSummary read_summary_json(const std::filesystem::path& path) {
  const auto doc = read_json(path);
  TraceSummary s;
  auto num = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_number()) throw Error(path.string() + ": summary lacks numeric " + key);
    return doc[key].get<double>();
  };
  s.end_capacity_Ah = num("end_capacity_Ah");
  s.end_voltage_V = num("end_voltage_V");
  s.end_time_s = num("end_time_s");
  s.peak_R_film_ohm = num("peak_R_film_ohm");
  s.end_R_film_ohm = num("end_R_film_ohm");
  if (!doc.contains("termination") || !doc["termination"].is_string()) {
    throw Error(path.string() + ": summary lacks termination");
  }
  s.termination = doc["termination"].get<std::string>();
  if (s.termination != "cutoff" && s.termination != "exhausted" && s.termination != "max_time") {
    throw Error(path.string() + ": unknown termination '" + s.termination + "'");
  }
  if (!doc.contains("config") || !doc["config"].is_object()) throw Error(path.string() + ": summary lacks config");
  return s;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace espm
