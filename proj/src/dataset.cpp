#include "espm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "espm/errors.hpp"

namespace espm {

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& where) {
  const std::string s = strip(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw DatasetError(where + ": '" + s + "' is not a number");
  return v;
}

}  // namespace

ExperimentalDataset load_dataset(const std::filesystem::path& path, std::optional<double> current_A) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open dataset " + path.string());
  const std::string name = path.string();

  ExperimentalDataset data;
  std::optional<double> meta_current;
  std::string line;
  std::string header;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = strip(line);
    if (s.empty()) continue;
    if (s[0] != '#') {
      header = s;
      break;
    }
    const std::string body = strip(s.substr(1));
    const auto eq = body.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = strip(body.substr(0, eq));
    const std::string value = strip(body.substr(eq + 1));
    const std::string where = name + ":" + std::to_string(lineno);
    if (key == "current_A") {
      meta_current = parse_number(value, where);
    } else if (key == "nominal_capacity_Ah") {
      data.nominal_capacity_Ah = parse_number(value, where);
    } else if (key == "temperature_K") {
      data.temperature_K = parse_number(value, where);
    } else if (key == "cycle") {
      if (value != "fresh" && value != "1000" && value != "3300") {
        throw DatasetError(where + ": cycle must be fresh, 1000 or 3300");
      }
      data.cycle = value;
    }
  }

  bool capacity_axis = false;
  if (header == "t_s,voltage_V") {
    capacity_axis = false;
  } else if (header == "capacity_Ah,voltage_V") {
    capacity_axis = true;
  } else {
    throw DatasetError(name + ": header must be 't_s,voltage_V' or 'capacity_Ah,voltage_V'");
  }

  if (current_A) meta_current = current_A;
  if (!meta_current) throw DatasetError(name + ": current unknown; add '# current_A=...' or pass it explicitly");
  data.current_A = *meta_current;
  if (!(data.current_A != 0.0) || !std::isfinite(data.current_A)) throw DatasetError(name + ": current must be nonzero");

  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = strip(line);
    if (s.empty()) continue;
    const auto comma = s.find(',');
    const std::string where = name + ":" + std::to_string(lineno);
    if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos) {
      throw DatasetError(where + ": expected two columns");
    }
    rows.emplace_back(parse_number(s.substr(0, comma), where), parse_number(s.substr(comma + 1), where));
  }
  std::sort(rows.begin(), rows.end());

  for (const auto& [axis, v] : rows) {
    data.t_s.push_back(capacity_axis ? 3600.0 * axis / std::abs(data.current_A) : axis);
    data.voltage_V.push_back(v);
  }
  validate_dataset(data);
  return data;
}

void validate_dataset(const ExperimentalDataset& data) {
  if (data.t_s.size() != data.voltage_V.size()) throw DatasetError("time and voltage columns differ in length");
  if (data.size() < 10) throw DatasetError("dataset needs at least 10 samples, got " + std::to_string(data.size()));
  if (!(data.current_A != 0.0) || !std::isfinite(data.current_A)) throw DatasetError("current must be nonzero");
  if (!(data.t_s.front() >= 0.0)) throw DatasetError("axis must start at or after zero");
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (!std::isfinite(data.t_s[k]) || !std::isfinite(data.voltage_V[k])) {
      throw DatasetError("non-finite value in sample " + std::to_string(k));
    }
    if (k > 0 && !(data.t_s[k] > data.t_s[k - 1])) {
      throw DatasetError("axis not strictly increasing at sample " + std::to_string(k));
    }
  }
  if (data.nominal_capacity_Ah && !(*data.nominal_capacity_Ah > 0.0)) {
    throw DatasetError("nominal capacity must be positive");
  }
}

void save_dataset(const std::filesystem::path& path, const ExperimentalDataset& data) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write dataset " + path.string());
  out.precision(17);
  out << "# current_A=" << data.current_A << '\n';
  if (data.nominal_capacity_Ah) out << "# nominal_capacity_Ah=" << *data.nominal_capacity_Ah << '\n';
  out << "# temperature_K=" << data.temperature_K << '\n';
  out << "# cycle=" << data.cycle << '\n';
  out << "t_s,voltage_V\n";
  for (std::size_t k = 0; k < data.size(); ++k) out << data.t_s[k] << ',' << data.voltage_V[k] << '\n';
  if (!out) throw DatasetError("failed writing dataset " + path.string());
}

std::vector<double> soc_exp_from_coulomb_counting(const ExperimentalDataset& data, double capacity_nominal_Ah) {
  if (!(capacity_nominal_Ah > 0.0)) throw DatasetError("nominal capacity must be positive");
  std::vector<double> soc(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    soc[k] = 1.0 - data.current_A * data.t_s[k] / (3600.0 * capacity_nominal_Ah);
  }
  return soc;
}

}  // namespace espm
