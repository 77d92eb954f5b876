#include "espm/identification.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "espm/cell_model.hpp"
#include "espm/errors.hpp"

namespace espm {

using nlohmann::json;

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Fresh: return "fresh";
    case Phase::Aged1000: return "aged1000";
    case Phase::Aged3300: return "aged3300";
  }
  return "?";
}

Phase parse_phase(const std::string& text) {
  if (text == "fresh") return Phase::Fresh;
  if (text == "aged1000") return Phase::Aged1000;
  if (text == "aged3300") return Phase::Aged3300;
  throw ConfigError("phase", "must be fresh, aged1000 or aged3300, got '" + text + "'");
}

const char* cycle_label(Phase p) {
  switch (p) {
    case Phase::Fresh: return "fresh";
    case Phase::Aged1000: return "1000";
    case Phase::Aged3300: return "3300";
  }
  return "?";
}

std::vector<ParameterSpec> phase_parameters(Phase phase) {
  std::vector<ParameterSpec> specs;
  switch (phase) {
    case Phase::Fresh:
      specs = {
          {"A_cell", "m^2", 0.28, 0.83, 0.55, 0.57},
          {"R_l", "ohm", 0.02, 0.07, 0.045, 0.04},
          {"v_n", "-", 0.45, 0.65, 0.5, 0.54},
          {"R_p", "m", 0.6e-6, 1.9e-6, 1.25e-6, 1e-6},
          {"R_n", "m", 5e-6, 15e-6, 10e-6, 5.16e-6},
          {"D_s_ref_p", "m^2/s", 1e-14, 3.4e-13, 2.25e-13, 2e-13},
          {"D_s_ref_n", "m^2/s", 1e-14, 3.4e-13, 2.25e-13, 1e-13},
          {"theta_p_100", "-", 0.14, 0.41, 0.28, 0.30},
          {"theta_n_100", "-", 0.43, 1.0, 0.85, 0.99},
      };
      break;
    case Phase::Aged1000:
      specs = {
          {kFilmRatio, "ohm m^2", 0.0015, 0.15, 0.076, 0.085},
          {"theta_p_0", "-", 0.7, 1.0, 0.85, 0.92},
          {"theta_n_100", "-", 0.7, 1.0, 0.85, 0.88},
      };
      break;
    case Phase::Aged3300:
      specs = {
          // The nominal guess of 2 lies above the upper bound; it is projected below.
          {kFilmRatio, "ohm m^2", 0.003, 0.3, 2.0, 0.25},
          {"theta_p_0", "-", 0.6, 1.0, 0.8, 0.79},
          {"theta_n_100", "-", 0.6, 1.0, 0.8, 0.72},
      };
      break;
  }
  for (auto& s : specs) s.guess = std::clamp(s.guess, s.lower, s.upper);
  return specs;
}

double reference_cost(Phase phase) { return phase == Phase::Aged3300 ? 0.04 : 0.03; }

namespace {

double* parameter_slot(CellParameters& p, const std::string& name) {
  if (name == "A_cell") return &p.A_cell;
  if (name == "R_l") return &p.R_l;
  if (name == "v_n") return &p.v_n;
  if (name == "R_p") return &p.R_p;
  if (name == "R_n") return &p.R_n;
  if (name == "D_s_ref_p") return &p.D_s_ref_p;
  if (name == "D_s_ref_n") return &p.D_s_ref_n;
  if (name == "theta_p_0") return &p.theta_p_0;
  if (name == "theta_p_100") return &p.theta_p_100;
  if (name == "theta_n_0") return &p.theta_n_0;
  if (name == "theta_n_100") return &p.theta_n_100;
  return nullptr;
}

}  // namespace

void apply_parameter(CellParameters& p, const std::string& name, double value) {
  if (name == kFilmRatio) {
    p.L_SEI_init = value * p.kappa_SEI;
    return;
  }
  double* slot = parameter_slot(p, name);
  if (!slot) throw ConfigError(name, "not an identifiable parameter");
  *slot = value;
}

double read_parameter(const CellParameters& p, const std::string& name) {
  if (name == kFilmRatio) return p.L_SEI_init / p.kappa_SEI;
  double* slot = parameter_slot(const_cast<CellParameters&>(p), name);
  if (!slot) throw ConfigError(name, "not an identifiable parameter");
  return *slot;
}

Phase phase_for_cycle(const std::string& cycle) {
  if (cycle == "fresh") return Phase::Fresh;
  if (cycle == "1000") return Phase::Aged1000;
  if (cycle == "3300") return Phase::Aged3300;
  throw ConfigError("cycle", "must be fresh, 1000 or 3300, got '" + cycle + "'");
}

void apply_phase_switches(CellParameters& p, Phase phase) {
  p.kprime_p = p.kprime_n = 0.0;
  p.betaprime_p = p.betaprime_n = 0.0;
  switch (phase) {
    case Phase::Fresh:
      p.k_f = 0.0;
      p.i0_pl = 0.0;
      break;
    case Phase::Aged1000:
      p.i0_pl = 0.0;
      break;
    case Phase::Aged3300:
      if (!(p.i0_pl > 0.0)) throw ConfigError("kinetics.i0_pl", "aged3300 requires an active plating path (i0_pl > 0)");
      break;
  }
}

CellParameters phase_base_parameters(Phase phase, const Config& config) {
  CellParameters p = config.params;
  apply_phase_switches(p, phase);
  if (phase != Phase::Fresh) {
    const auto& theta1 = config.identification.theta1;
    if (theta1.empty()) throw ConfigError("identification.theta1", "aged phases require the fresh-cell vector");
    for (const auto& spec : phase_parameters(Phase::Fresh)) {
      auto it = theta1.find(spec.name);
      if (it == theta1.end()) throw ConfigError("identification.theta1." + spec.name, "missing field");
      apply_parameter(p, spec.name, it->second);
    }
    for (const auto& [name, value] : theta1) {
      (void)value;
      bool known = false;
      for (const auto& spec : phase_parameters(Phase::Fresh)) known = known || spec.name == name;
      if (!known) throw ConfigError("identification.theta1." + name, "not part of the fresh-cell vector");
    }
  }
  return p;
}

double penalty_cost(double completed_fraction) {
  const double shortfall = std::clamp(1.0 - completed_fraction, 0.0, 1.0);
  return 1e3 * (1.0 + shortfall);
}

CostBreakdown evaluate_cost(const IdentificationProblem& problem, const Vector& theta) {
  const auto& data = problem.data;
  if (theta.size() != static_cast<Eigen::Index>(problem.parameters.size())) {
    throw Error("parameter vector has the wrong dimension");
  }
  CellParameters p = problem.base;
  for (std::size_t i = 0; i < problem.parameters.size(); ++i) apply_parameter(p, problem.parameters[i].name, theta[i]);

  CostBreakdown out;
  auto fail = [&](double completed, const std::string& why) {
    out.penalized = true;
    out.completed_fraction = completed;
    out.total = penalty_cost(completed);
    out.failure = why;
    return out;
  };

  SimulationTrace trace;
  try {
    const CellModel model(p, problem.mesh);
    RunOptions options;
    options.current = data.current_A;
    options.soc0 = 1.0;
    options.dt.dt = problem.dt;
    options.max_time = data.duration();
    trace = run_constant_current(model, model.initial_state(1.0), options);
  } catch (const Error& e) {
    return fail(0.0, e.what());
  }
  const double horizon = data.duration();
  const double reached = trace.samples.back().t;
  if (trace.termination != Termination::MaxTime) {
    return fail(horizon > 0.0 ? reached / horizon : 0.0, trace.note.empty() ? to_string(trace.termination) : trace.note);
  }

  const auto soc_exp = soc_exp_from_coulomb_counting(data, problem.capacity_nominal_Ah);
  double sv = 0.0, sn = 0.0, sp = 0.0;
  std::size_t j = 0;
  const auto& s = trace.samples;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const double t = data.t_s[k];
    while (j + 2 < s.size() && s[j + 1].t < t) ++j;
    const StepOutput& a = s[j];
    const StepOutput& b = s[std::min(j + 1, s.size() - 1)];
    const double w = b.t > a.t ? std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0) : 0.0;
    const double V = a.V_cell + w * (b.V_cell - a.V_cell);
    const double soc_n = a.soc_n + w * (b.soc_n - a.soc_n);
    const double soc_p = a.soc_p + w * (b.soc_p - a.soc_p);
    sv += (V - data.voltage_V[k]) * (V - data.voltage_V[k]);
    sn += (soc_n - soc_exp[k]) * (soc_n - soc_exp[k]);
    sp += (soc_p - soc_exp[k]) * (soc_p - soc_exp[k]);
  }
  const double n = static_cast<double>(data.size());
  out.rmse_voltage = std::sqrt(sv / n);
  out.rmse_soc_n = std::sqrt(sn / n);
  out.rmse_soc_p = std::sqrt(sp / n);
  out.total = problem.weights.voltage * out.rmse_voltage + problem.weights.soc_n * out.rmse_soc_n +
              problem.weights.soc_p * out.rmse_soc_p;
  if (!std::isfinite(out.total)) return fail(1.0, "non-finite cost");
  return out;
}

double cost(const IdentificationProblem& problem, const Vector& theta) { return evaluate_cost(problem, theta).total; }

IdentificationProblem make_problem(Phase phase, const Config& config, const ExperimentalDataset& data) {
  validate_dataset(data);
  if (data.cycle != cycle_label(phase)) {
    throw DatasetError(std::string("dataset is labeled cycle=") + data.cycle + " but phase " + to_string(phase) +
                       " expects cycle=" + cycle_label(phase));
  }
  IdentificationProblem problem;
  problem.parameters = phase_parameters(phase);
  problem.data = data;
  problem.weights = {config.identification.weights[0], config.identification.weights[1],
                     config.identification.weights[2]};
  problem.base = phase_base_parameters(phase, config);
  problem.base.T = data.temperature_K;
  problem.mesh = config.mesh;
  problem.dt = config.simulation.dt_s;
  problem.capacity_nominal_Ah = data.nominal_capacity_Ah.value_or(config.simulation.capacity_Ah);
  return problem;
}

PsoConfig pso_config_from(const Config& config, std::optional<std::uint64_t> seed, unsigned jobs) {
  const auto& s = config.identification.pso;
  PsoConfig pso;
  pso.swarm_size = s.swarm_size;
  pso.iterations = s.iterations;
  pso.inertia = s.inertia;
  pso.cognitive = s.cognitive;
  pso.social = s.social;
  pso.seed = seed.value_or(s.seed);
  pso.jobs = std::max(1u, jobs);
  return pso;
}

IdentificationResult identify(Phase phase, const Config& config, const ExperimentalDataset& data,
                              const PsoConfig& pso) {
  IdentificationResult result;
  result.phase = phase;
  result.problem = make_problem(phase, config, data);
  const auto& problem = result.problem;

  const auto d = static_cast<Eigen::Index>(problem.parameters.size());
  PsoProblem search;
  search.lower.resize(d);
  search.upper.resize(d);
  Vector guess(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    search.lower[i] = problem.parameters[i].lower;
    search.upper[i] = problem.parameters[i].upper;
    guess[i] = problem.parameters[i].guess;
  }
  search.initial_guess = guess;
  search.objective = [&problem](const Vector& theta) { return cost(problem, theta); };

  result.pso = pso_minimize(search, pso);
  if (!result.pso.success) throw OptimizationError(std::string(to_string(phase)) + ": " + result.pso.diagnostics);
  result.values = result.pso.best;
  result.cost = evaluate_cost(problem, result.values);
  result.guess_cost = evaluate_cost(problem, guess);
  result.identified = problem.base;
  for (Eigen::Index i = 0; i < d; ++i) apply_parameter(result.identified, problem.parameters[i].name, result.values[i]);
  return result;
}

IdentificationResult identify_fresh(const Config& config, const ExperimentalDataset& data, const PsoConfig& pso) {
  return identify(Phase::Fresh, config, data, pso);
}

IdentificationResult identify_aged(const Config& config, const ExperimentalDataset& data, Phase phase,
                                   const PsoConfig& pso) {
  if (phase == Phase::Fresh) throw ConfigError("phase", "identify_aged needs aged1000 or aged3300");
  return identify(phase, config, data, pso);
}

namespace {

json cost_json(const CostBreakdown& c) {
  json j = {{"total", c.total},
            {"rmse_voltage_V", c.rmse_voltage},
            {"rmse_soc_n", c.rmse_soc_n},
            {"rmse_soc_p", c.rmse_soc_p},
            {"penalized", c.penalized}};
  if (c.penalized) {
    j["completed_fraction"] = c.completed_fraction;
    j["failure"] = c.failure;
  }
  return j;
}

}  // namespace

json identification_report(const IdentificationResult& r, const Config& config, const PsoConfig& pso) {
  json params = json::array();
  for (std::size_t i = 0; i < r.problem.parameters.size(); ++i) {
    const auto& s = r.problem.parameters[i];
    params.push_back({{"name", s.name},
                      {"unit", s.unit},
                      {"value", r.values[static_cast<Eigen::Index>(i)]},
                      {"lower", s.lower},
                      {"upper", s.upper},
                      {"guess", s.guess},
                      {"reference", s.reference}});
  }
  Config resolved = config;
  if (r.phase == Phase::Fresh) {
    for (std::size_t i = 0; i < r.problem.parameters.size(); ++i) {
      resolved.identification.theta1[r.problem.parameters[i].name] = r.values[static_cast<Eigen::Index>(i)];
    }
  }
  return {{"phase", to_string(r.phase)},
          {"parameters", params},
          {"cost", cost_json(r.cost)},
          {"guess_cost", cost_json(r.guess_cost)},
          {"reference_cost", reference_cost(r.phase)},
          {"weights", {r.problem.weights.voltage, r.problem.weights.soc_n, r.problem.weights.soc_p}},
          {"dataset",
           {{"samples", r.problem.data.size()},
            {"current_A", r.problem.data.current_A},
            {"duration_s", r.problem.data.duration()},
            {"cycle", r.problem.data.cycle},
            {"temperature_K", r.problem.data.temperature_K},
            {"nominal_capacity_Ah", r.problem.capacity_nominal_Ah}}},
          {"pso",
           {{"swarm_size", pso.swarm_size},
            {"iterations", pso.iterations},
            {"inertia", pso.inertia},
            {"cognitive", pso.cognitive},
            {"social", pso.social},
            {"seed", pso.seed},
            {"bound_handling", "clamp_zero_velocity"},
            {"evaluations", r.pso.evaluations},
            {"failed_evaluations", r.pso.failed_evaluations}}},
          {"history", r.pso.history},
          {"config", to_json(resolved)}};
}

void validate_report(const json& report) {
  auto need = [&](const char* key) {
    if (!report.contains(key)) throw Error(std::string("report lacks '") + key + "'");
    return report[key];
  };
  const json phase = need("phase");
  if (!phase.is_string()) throw Error("report phase must be a string");
  parse_phase(phase.get<std::string>());
  const json params = need("parameters");
  if (!params.is_array() || params.empty()) throw Error("report parameters must be a nonempty array");
  for (const auto& p : params) {
    for (const char* key : {"value", "lower", "upper", "guess", "reference"}) {
      if (!p.contains(key) || !p[key].is_number()) throw Error(std::string("report parameter lacks numeric ") + key);
    }
    const double v = p["value"].get<double>();
    if (!(v >= p["lower"].get<double>() && v <= p["upper"].get<double>())) {
      throw Error("report value of " + p.value("name", std::string("?")) + " lies outside its bounds");
    }
  }
  const json c = need("cost");
  if (!c.contains("total") || !c["total"].is_number()) throw Error("report cost lacks total");
  const json history = need("history");
  if (!history.is_array() || history.empty()) throw Error("report history must be a nonempty array");
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (history[i].get<double>() > history[i - 1].get<double>()) throw Error("report history is not nonincreasing");
  }
  if (history.back().get<double>() != c["total"].get<double>()) {
    throw Error("report cost disagrees with the final history entry");
  }
  if (!need("config").is_object()) throw Error("report config must be an object");
}

ExperimentalDataset synthesize_dataset(const CellParameters& truth, const Mesh& mesh, double current_A,
                                       double cutoff_V, double dt, double sample_interval_s, double noise_V,
                                       std::uint64_t seed, const std::string& cycle) {
  if (!(sample_interval_s > 0.0)) throw Error("sample interval must be positive");
  RunOptions options;
  options.current = current_A;
  options.cutoff = cutoff_V;
  options.dt.dt = dt;
  options.max_time = 1e6;
  const auto trace = run_constant_current(truth, mesh, options);
  if (trace.termination != Termination::Cutoff) {
    throw Error(std::string("synthetic discharge ended by ") + to_string(trace.termination) + " before the cutoff");
  }

  ExperimentalDataset data;
  data.current_A = current_A;
  data.temperature_K = truth.T;
  data.cycle = cycle;
  data.nominal_capacity_Ah =
      std::min(window_capacity_Ah(truth, Electrode::Positive), window_capacity_Ah(truth, Electrode::Negative));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_V);
  // Samples strictly before the cutoff crossing, so every sample lies on a stored step.
  const auto& s = trace.samples;
  std::size_t j = 0;
  for (double t = 0.0; t < trace.final_time; t += sample_interval_s) {
    while (j + 1 < s.size() && s[j + 1].t <= t) ++j;
    const StepOutput& a = s[j];
    const StepOutput& b = s[std::min(j + 1, s.size() - 1)];
    const double w = b.t > a.t ? (t - a.t) / (b.t - a.t) : 0.0;
    data.t_s.push_back(t);
    data.voltage_V.push_back(a.V_cell + w * (b.V_cell - a.V_cell) + (noise_V > 0.0 ? noise(rng) : 0.0));
  }
  validate_dataset(data);
  return data;
}

}  // namespace espm
