#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "espm/cell_model.hpp"
#include "espm/config.hpp"
#include "espm/dataset.hpp"
#include "espm/errors.hpp"
#include "espm/identification.hpp"
#include "espm/sweep.hpp"
#include "espm/trace_io.hpp"

namespace fs = std::filesystem;
using namespace espm;

namespace {

enum Exit { kOk = 0, kConfig = 2, kSimulation = 3, kDataset = 4, kOptimization = 5 };

struct DischargeFlags {
  std::optional<double> c_rate;
  std::optional<double> current;
  std::optional<double> cutoff;
};

void add_discharge_flags(CLI::App* cmd, DischargeFlags& f) {
  auto* rate = cmd->add_option("--c-rate", f.c_rate, "Current as a multiple of the nominal capacity (default 1/3)");
  auto* cur = cmd->add_option("--current", f.current, "Applied current in A, > 0 discharges");
  rate->excludes(cur);
  cmd->add_option("--cutoff", f.cutoff, "Cutoff voltage in V (default from config)");
}

RunOptions discharge_options(const Config& cfg, const DischargeFlags& f) {
  RunOptions o;
  o.current = f.current ? *f.current : f.c_rate.value_or(1.0 / 3.0) * cfg.simulation.capacity_Ah;
  o.cutoff = f.cutoff.value_or(cfg.simulation.cutoff_V);
  o.soc0 = cfg.simulation.soc0;
  o.dt.dt = cfg.simulation.dt_s;
  o.max_time = cfg.simulation.max_time_s;
  return o;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("espm");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("ESPM_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::info);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

int cmd_simulate(const std::string& config_path, const DischargeFlags& flags, double age_cycles, double T_cycle,
                 const fs::path& out, bool verify) {
  const Config cfg = load_config(config_path);
  const RunOptions opts = discharge_options(cfg, flags);
  const CellModel model(cfg.params, cfg.mesh);
  CellState start = age_cycles > 0.0 ? pre_aged_state(model, opts.soc0, age_cycles * T_cycle)
                                     : model.initial_state(opts.soc0);
  spdlog::info("simulating I = {:.6g} A, cutoff {:.4g} V", opts.current, *opts.cutoff);
  const SimulationTrace trace = run_constant_current(model, std::move(start), opts);
  const TraceSummary summary = summarize(trace);
  spdlog::info("{}: {:.6g} Ah at {:.6g} V after {:.6g} s", summary.termination, summary.end_capacity_Ah,
               summary.end_voltage_V, summary.end_time_s - trace.start_time);
  if (!trace.note.empty()) spdlog::warn("{}", trace.note);

  ensure_dir(out);
  write_trace_csv(out / "trace.csv", trace);
  auto doc = summary_json(summary, cfg);
  doc["current_A"] = opts.current;
  doc["cutoff_V"] = *opts.cutoff;
  doc["age_cycles"] = age_cycles;
  doc["T_cycle_s"] = T_cycle;
  write_json(out / "summary.json", doc);

  if (verify) {
    try {
      const auto rows = read_trace_csv(out / "trace.csv");
      const auto back = read_summary_json(out / "summary.json");
      if (rows.size() != trace.samples.size()) throw Error("trace row count changed on re-read");
      if (back.termination != summary.termination) throw Error("summary termination changed on re-read");
      spdlog::info("verified {} trace rows and summary", rows.size());
    } catch (const Error& e) {
      spdlog::error("verification failed: {}", e.what());
      return kSimulation;
    }
  }
  return kOk;
}

int cmd_identify(const std::string& config_path, const std::string& data_path, const std::string& phase_text,
                 std::optional<std::uint64_t> seed, std::optional<double> current, unsigned jobs, const fs::path& out,
                 bool verify) {
  const Phase phase = parse_phase(phase_text);
  const Config cfg = load_config(config_path);
  phase_base_parameters(phase, cfg);  // config/phase consistency before reading data
  const ExperimentalDataset data = load_dataset(data_path, current);
  const PsoConfig pso = pso_config_from(cfg, seed, jobs);
  spdlog::info("identifying {} on {} samples: swarm {}, {} iterations, seed {}, {} job(s)", to_string(phase),
               data.size(), pso.swarm_size, pso.iterations, pso.seed, pso.jobs);
  const IdentificationResult result = identify(phase, cfg, data, pso);
  spdlog::info("cost {:.6g} (V {:.4g}, SOC_n {:.4g}, SOC_p {:.4g}); {} of {} evaluations penalized", result.cost.total,
               result.cost.rmse_voltage, result.cost.rmse_soc_n, result.cost.rmse_soc_p, result.pso.failed_evaluations,
               result.pso.evaluations);
  for (std::size_t i = 0; i < result.problem.parameters.size(); ++i) {
    const auto& p = result.problem.parameters[i];
    spdlog::info("  {:<22} {:.6g}  (reference {:.6g})", p.name, result.values[static_cast<Eigen::Index>(i)],
                 p.reference);
  }
  if (out.has_parent_path()) ensure_dir(out.parent_path());
  write_json(out, identification_report(result, cfg, pso));
  if (verify) {
    try {
      validate_report(read_json(out));
      spdlog::info("verified report {}", out.string());
    } catch (const Error& e) {
      spdlog::error("verification failed: {}", e.what());
      return kOptimization;
    }
  }
  return kOk;
}

int cmd_sweep(const std::string& config_path, SweepSpec spec, const std::string& param, const DischargeFlags& flags,
              unsigned jobs, const fs::path& out, bool verify) {
  spec.parameter = parse_sweep_parameter(param);
  const Config cfg = load_config(config_path);
  const RunOptions opts = discharge_options(cfg, flags);
  spec.validate();
  ensure_dir(out);
  spdlog::info("sweeping {} over [{:.4g}, {:.4g}] ({} points), horizon {:.4g} s", to_string(spec.parameter), spec.min,
               spec.max, spec.count, spec.horizon());
  const SweepResult result = run_sweep(cfg, spec, opts, jobs, out);
  write_envelope_csv(out / "envelope.csv", result);
  write_json(out / "sweep_summary.json", sweep_summary_json(result, spec, opts, cfg));
  spdlog::info("capacity decreasing: {}; R_film increasing: {}", result.capacity_decreasing, result.R_film_increasing);
  if (verify) {
    try {
      const std::size_t rows = validate_envelope_csv(out / "envelope.csv");
      if (rows != result.points.size()) throw Error("envelope row count changed on re-read");
      for (const auto& p : result.points) read_trace_csv(out / p.trace_file);
      if (!read_json(out / "sweep_summary.json").is_object()) throw Error("sweep summary is not an object");
      spdlog::info("verified envelope, {} traces and summary", rows);
    } catch (const Error& e) {
      spdlog::error("verification failed: {}", e.what());
      return kSimulation;
    }
  }
  return kOk;
}

int cmd_synth(const std::string& config_path, const std::string& cycle, const DischargeFlags& flags, double noise_mV,
              double interval, std::uint64_t seed, const fs::path& out) {
  const Config cfg = load_config(config_path);
  const RunOptions opts = discharge_options(cfg, flags);
  CellParameters truth = cfg.params;
  apply_phase_switches(truth, phase_for_cycle(cycle));
  const auto data = synthesize_dataset(truth, cfg.mesh, opts.current, *opts.cutoff, opts.dt.dt, interval,
                                       noise_mV * 1e-3, seed, cycle);
  if (out.has_parent_path()) ensure_dir(out.parent_path());
  save_dataset(out, data);
  spdlog::info("wrote {} samples over {:.6g} s to {}", data.size(), data.duration(), out.string());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Enhanced single particle battery model with SEI, plating and loss of active material"};
  app.require_subcommand(1);

  std::string config_path;
  DischargeFlags flags;
  fs::path out;
  bool verify = false;
  unsigned jobs = 1;

  auto* sim = app.add_subcommand("simulate", "Constant-current run; writes trace.csv and summary.json");
  sim->add_option("--config", config_path, "Config JSON")->required();
  add_discharge_flags(sim, flags);
  double age_cycles = 0.0;
  double T_cycle = kDefaultCycleDuration;
  sim->add_option("--age-cycles", age_cycles, "Pre-age the LAM state over this many cycles");
  sim->add_option("--t-cycle", T_cycle, "Cycle duration in s for --age-cycles");
  sim->add_option("--out", out, "Output directory")->required();
  sim->add_flag("--verify", verify, "Re-read and validate the outputs");

  auto* ident = app.add_subcommand("identify", "PSO identification of one phase; writes a JSON report");
  std::string data_path, phase;
  std::optional<std::uint64_t> seed;
  std::optional<double> data_current;
  ident->add_option("--config", config_path, "Config JSON")->required();
  ident->add_option("--data", data_path, "Dataset CSV")->required();
  ident->add_option("--phase", phase, "fresh | aged1000 | aged3300")->required();
  ident->add_option("--seed", seed, "PSO seed (default from config)");
  ident->add_option("--current", data_current, "Dataset current in A when the file lacks it");
  ident->add_option("--jobs", jobs, "Concurrent cost evaluations")->check(CLI::PositiveNumber);
  ident->add_option("--out", out, "Report path")->required();
  ident->add_flag("--verify", verify, "Re-read and validate the report");

  auto* sweep = app.add_subcommand("sweep", "LAM coefficient sweep at a fixed cycle horizon");
  SweepSpec spec;
  std::string param = "betaprime_n";
  sweep->add_option("--config", config_path, "Config JSON")->required();
  sweep->add_option("--param", param, "betaprime_n | kprime_n | both");
  sweep->add_option("--min", spec.min, "Lower end of the swept coefficient, 1/s");
  sweep->add_option("--max", spec.max, "Upper end of the swept coefficient, 1/s");
  sweep->add_option("--count", spec.count, "Number of points");
  sweep->add_option("--kmin", spec.k_min, "kprime_n (fixed value, or grid lower end), 1/s");
  sweep->add_option("--kmax", spec.k_max, "kprime_n grid upper end, 1/s");
  sweep->add_option("--kcount", spec.k_count, "kprime_n grid points");
  sweep->add_option("--betaprime", spec.fixed_betaprime_n, "Fixed betaprime_n for a kprime_n sweep, 1/s");
  sweep->add_option("--cycles", spec.cycles, "Cycle horizon");
  sweep->add_option("--t-cycle", spec.T_cycle, "Cycle duration in s");
  add_discharge_flags(sweep, flags);
  sweep->add_option("--jobs", jobs, "Concurrent sweep points")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out, "Output directory")->required();
  sweep->add_flag("--verify", verify, "Re-read and validate the outputs");

  auto* synth = app.add_subcommand("synth", "Synthetic constant-current dataset from a config, with the cycle's side-reaction switches");
  std::string cycle = "fresh";
  double noise_mV = 1.0;
  double interval = 10.0;
  std::uint64_t synth_seed = 1;
  synth->add_option("--config", config_path, "Config JSON holding the true parameters")->required();
  synth->add_option("--cycle", cycle, "Dataset label: fresh | 1000 | 3300");
  add_discharge_flags(synth, flags);
  synth->add_option("--noise-mV", noise_mV, "Gaussian voltage noise, mV");
  synth->add_option("--interval", interval, "Sample interval, s");
  synth->add_option("--seed", synth_seed, "Noise seed");
  synth->add_option("--out", out, "Dataset CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*sim) return cmd_simulate(config_path, flags, age_cycles, T_cycle, out, verify);
    if (*ident) return cmd_identify(config_path, data_path, phase, seed, data_current, jobs, out, verify);
    if (*sweep) return cmd_sweep(config_path, spec, param, flags, jobs, out, verify);
    if (*synth) return cmd_synth(config_path, cycle, flags, noise_mV, interval, synth_seed, out);
  } catch (const ConfigError& e) {
    spdlog::error("config: {}", e.what());
    return kConfig;
  } catch (const DatasetError& e) {
    spdlog::error("dataset: {}", e.what());
    return kDataset;
  } catch (const OptimizationError& e) {
    spdlog::error("optimization: {}", e.what());
    return kOptimization;
  } catch (const Error& e) {
    spdlog::error("simulation: {}", e.what());
    return kSimulation;
  }
  return kOk;
}
