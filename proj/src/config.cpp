#include "espm/config.hpp"

#include <fstream>

#include "espm/errors.hpp"

namespace espm {

using nlohmann::json;

namespace {

const json& section(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) throw ConfigError(name, "missing section");
  if (!it->is_object()) throw ConfigError(name, "must be an object");
  return *it;
}

std::string path_of(const char* sec, const char* key) { return std::string(sec) + "." + key; }

double number(const json& obj, const char* sec, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path_of(sec, key), "missing field");
  if (!it->is_number()) throw ConfigError(path_of(sec, key), "must be a number");
  return it->get<double>();
}

double number_or(const json& obj, const char* sec, const char* key, double fallback) {
  return obj.contains(key) ? number(obj, sec, key) : fallback;
}

int integer_or(const json& obj, const char* sec, const char* key, int fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) throw ConfigError(path_of(sec, key), "must be an integer");
  return it->get<int>();
}

std::vector<double> coefficients(const json& obj, const char* sec, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path_of(sec, key), "missing field");
  if (!it->is_array()) throw ConfigError(path_of(sec, key), "must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) throw ConfigError(path_of(sec, key), "must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string text(const json& obj, const char* sec, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path_of(sec, key), "missing field");
  if (!it->is_string()) throw ConfigError(path_of(sec, key), "must be a string");
  return it->get<std::string>();
}

std::filesystem::path resolve(const std::string& p, const std::filesystem::path& base_dir) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base_dir / path;
  return std::filesystem::absolute(path).lexically_normal();
}

}  // namespace

Config config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("", "config root must be an object");
  Config cfg;
  CellParameters& p = cfg.params;

  const json& geo = section(doc, "geometry");
  p.A_cell = number(geo, "geometry", "A_cell");
  p.L_p = number(geo, "geometry", "L_p");
  p.L_s = number(geo, "geometry", "L_s");
  p.L_n = number(geo, "geometry", "L_n");
  p.R_p = number(geo, "geometry", "R_p");
  p.R_n = number(geo, "geometry", "R_n");

  const json& tr = section(doc, "transport");
  p.t_plus = number(tr, "transport", "t_plus");
  p.brugg = number(tr, "transport", "brugg");
  p.D_s_ref_p = number(tr, "transport", "D_s_ref_p");
  p.D_s_ref_n = number(tr, "transport", "D_s_ref_n");
  p.E_a_Ds_p = number_or(tr, "transport", "E_a_Ds_p", 0.0);
  p.E_a_Ds_n = number_or(tr, "transport", "E_a_Ds_n", 0.0);
  p.eps_s = number(tr, "transport", "eps_s");
  {
    auto it = tr.find("electrolyte");
    if (it == tr.end()) throw ConfigError("transport.electrolyte", "missing section");
    const json& el = *it;
    const char* sec = "transport.electrolyte";
    p.electrolyte.c_e0 = number_or(el, sec, "c_e0", 1000.0);
    p.electrolyte.D_coeffs = coefficients(el, sec, "D_coeffs");
    p.electrolyte.E_a_D = number_or(el, sec, "E_a_D", 0.0);
    p.electrolyte.kappa_coeffs = coefficients(el, sec, "kappa_coeffs");
    p.electrolyte.E_a_kappa = number_or(el, sec, "E_a_kappa", 0.0);
  }

  const json& kin = section(doc, "kinetics");
  p.k_p = number(kin, "kinetics", "k_p");
  p.k_n = number(kin, "kinetics", "k_n");
  p.E_a_k_p = number_or(kin, "kinetics", "E_a_k_p", 0.0);
  p.E_a_k_n = number_or(kin, "kinetics", "E_a_k_n", 0.0);
  p.alpha = number(kin, "kinetics", "alpha");
  p.i0_pl = number(kin, "kinetics", "i0_pl");
  p.k_f = number(kin, "kinetics", "k_f");
  p.E_a_kf = number_or(kin, "kinetics", "E_a_kf", 0.0);
  p.c_solv_surf = number(kin, "kinetics", "c_solv_surf");

  const json& comp = section(doc, "composition");
  p.v_p = number(comp, "composition", "v_p");
  p.v_n = number(comp, "composition", "v_n");
  p.v_p_filler = number(comp, "composition", "v_p_filler");
  p.v_n_filler = number(comp, "composition", "v_n_filler");
  p.c_s_max_p = number(comp, "composition", "c_s_max_p");
  p.c_s_max_n = number(comp, "composition", "c_s_max_n");

  const json& st = section(doc, "stoichiometry");
  p.theta_p_0 = number(st, "stoichiometry", "theta_p_0");
  p.theta_p_100 = number(st, "stoichiometry", "theta_p_100");
  p.theta_n_0 = number(st, "stoichiometry", "theta_n_0");
  p.theta_n_100 = number(st, "stoichiometry", "theta_n_100");

  const json& ag = section(doc, "aging");
  p.beta = number(ag, "aging", "beta");
  p.kprime_p = number(ag, "aging", "kprime_p");
  p.kprime_n = number(ag, "aging", "kprime_n");
  p.betaprime_p = number(ag, "aging", "betaprime_p");
  p.betaprime_n = number(ag, "aging", "betaprime_n");
  p.M_SEI = number(ag, "aging", "M_SEI");
  p.M_Li = number(ag, "aging", "M_Li");
  p.rho_SEI = number(ag, "aging", "rho_SEI");
  p.rho_Li = number(ag, "aging", "rho_Li");
  p.kappa_SEI = number(ag, "aging", "kappa_SEI");
  p.L_SEI_init = number_or(ag, "aging", "L_SEI_init", 0.0);
  p.L_Li_init = number_or(ag, "aging", "L_Li_init", 0.0);

  p.R_l = number(section(doc, "resistances"), "resistances", "R_l");

  const json& env = section(doc, "environment");
  p.T = number(env, "environment", "T");
  p.T_ref = number(env, "environment", "T_ref");

  if (doc.contains("constants")) {
    const json& c = section(doc, "constants");
    p.F = number_or(c, "constants", "F", kFaraday);
    p.R_gas = number_or(c, "constants", "R_gas", kGasConstant);
  }

  const json& ocp = section(doc, "ocp");
  p.ocp_p_path = resolve(text(ocp, "ocp", "positive"), base_dir).string();
  p.ocp_n_path = resolve(text(ocp, "ocp", "negative"), base_dir).string();
  p.ocp_p = std::make_shared<const OcpCurve>(OcpCurve::from_csv(p.ocp_p_path));
  p.ocp_n = std::make_shared<const OcpCurve>(OcpCurve::from_csv(p.ocp_n_path));

  if (doc.contains("mesh")) {
    const json& m = section(doc, "mesh");
    cfg.mesh.N_r_p = integer_or(m, "mesh", "N_r_p", cfg.mesh.N_r_p);
    cfg.mesh.N_r_n = integer_or(m, "mesh", "N_r_n", cfg.mesh.N_r_n);
    cfg.mesh.N_x_p = integer_or(m, "mesh", "N_x_p", cfg.mesh.N_x_p);
    cfg.mesh.N_x_s = integer_or(m, "mesh", "N_x_s", cfg.mesh.N_x_s);
    cfg.mesh.N_x_n = integer_or(m, "mesh", "N_x_n", cfg.mesh.N_x_n);
  }

  if (doc.contains("simulation")) {
    const json& s = section(doc, "simulation");
    auto& sim = cfg.simulation;
    sim.capacity_Ah = number_or(s, "simulation", "capacity_Ah", sim.capacity_Ah);
    sim.cutoff_V = number_or(s, "simulation", "cutoff_V", sim.cutoff_V);
    sim.dt_s = number_or(s, "simulation", "dt_s", sim.dt_s);
    sim.max_time_s = number_or(s, "simulation", "max_time_s", sim.max_time_s);
    sim.soc0 = number_or(s, "simulation", "soc0", sim.soc0);
    if (!(sim.capacity_Ah > 0.0)) throw ConfigError("simulation.capacity_Ah", "must be strictly positive");
    if (!(sim.dt_s > 0.0)) throw ConfigError("simulation.dt_s", "must be strictly positive");
    if (!(sim.max_time_s > 0.0)) throw ConfigError("simulation.max_time_s", "must be strictly positive");
    if (!(sim.soc0 >= 0.0 && sim.soc0 <= 1.0)) throw ConfigError("simulation.soc0", "must lie in [0, 1]");
  }

  if (doc.contains("identification")) {
    const json& id = section(doc, "identification");
    auto& out = cfg.identification;
    if (id.contains("weights")) {
      auto w = coefficients(id, "identification", "weights");
      if (w.size() != 3) throw ConfigError("identification.weights", "need exactly 3 weights");
      for (double v : w) {
        if (!(v >= 0.0)) throw ConfigError("identification.weights", "weights must be nonnegative");
      }
      out.weights = {w[0], w[1], w[2]};
    }
    if (id.contains("pso")) {
      const json& ps = section(id, "pso");
      const char* sec = "identification.pso";
      out.pso.swarm_size = integer_or(ps, sec, "swarm_size", out.pso.swarm_size);
      out.pso.iterations = integer_or(ps, sec, "iterations", out.pso.iterations);
      out.pso.inertia = number_or(ps, sec, "inertia", out.pso.inertia);
      out.pso.cognitive = number_or(ps, sec, "cognitive", out.pso.cognitive);
      out.pso.social = number_or(ps, sec, "social", out.pso.social);
      if (ps.contains("seed")) {
        if (!ps["seed"].is_number_unsigned()) throw ConfigError("identification.pso.seed", "must be a nonnegative integer");
        out.pso.seed = ps["seed"].get<std::uint64_t>();
      }
      if (out.pso.swarm_size < 5) throw ConfigError("identification.pso.swarm_size", "must be at least 5");
      if (out.pso.iterations < 1) throw ConfigError("identification.pso.iterations", "must be at least 1");
      if (!(out.pso.inertia > 0.0)) throw ConfigError("identification.pso.inertia", "must be strictly positive");
      if (!(out.pso.cognitive > 0.0)) throw ConfigError("identification.pso.cognitive", "must be strictly positive");
      if (!(out.pso.social > 0.0)) throw ConfigError("identification.pso.social", "must be strictly positive");
    }
    if (id.contains("theta1")) {
      const json& t1 = section(id, "theta1");
      for (auto it = t1.begin(); it != t1.end(); ++it) {
        if (!it->is_number()) throw ConfigError("identification.theta1." + it.key(), "must be a number");
        out.theta1[it.key()] = it->get<double>();
      }
    }
  }

  p.validate();
  cfg.mesh.validate();
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path.string() + ": " + e.what());
  }
  Config cfg = config_from_json(doc, std::filesystem::absolute(path).parent_path());
  cfg.source = std::filesystem::absolute(path).lexically_normal();
  return cfg;
}

CellParameters load_parameters(const std::filesystem::path& path) { return load_config(path).params; }

json to_json(const Config& cfg) {
  const CellParameters& p = cfg.params;
  json doc;
  doc["geometry"] = {{"A_cell", p.A_cell}, {"L_p", p.L_p}, {"L_s", p.L_s},
                     {"L_n", p.L_n},       {"R_p", p.R_p}, {"R_n", p.R_n}};
  doc["transport"] = {{"t_plus", p.t_plus},
                      {"brugg", p.brugg},
                      {"D_s_ref_p", p.D_s_ref_p},
                      {"D_s_ref_n", p.D_s_ref_n},
                      {"E_a_Ds_p", p.E_a_Ds_p},
                      {"E_a_Ds_n", p.E_a_Ds_n},
                      {"eps_s", p.eps_s},
                      {"electrolyte",
                       {{"c_e0", p.electrolyte.c_e0},
                        {"D_coeffs", p.electrolyte.D_coeffs},
                        {"E_a_D", p.electrolyte.E_a_D},
                        {"kappa_coeffs", p.electrolyte.kappa_coeffs},
                        {"E_a_kappa", p.electrolyte.E_a_kappa}}}};
  doc["kinetics"] = {{"k_p", p.k_p},     {"k_n", p.k_n},         {"E_a_k_p", p.E_a_k_p},
                     {"E_a_k_n", p.E_a_k_n}, {"alpha", p.alpha}, {"i0_pl", p.i0_pl},
                     {"k_f", p.k_f},     {"E_a_kf", p.E_a_kf},   {"c_solv_surf", p.c_solv_surf}};
  doc["composition"] = {{"v_p", p.v_p},
                        {"v_n", p.v_n},
                        {"v_p_filler", p.v_p_filler},
                        {"v_n_filler", p.v_n_filler},
                        {"c_s_max_p", p.c_s_max_p},
                        {"c_s_max_n", p.c_s_max_n}};
  doc["stoichiometry"] = {{"theta_p_0", p.theta_p_0},
                          {"theta_p_100", p.theta_p_100},
                          {"theta_n_0", p.theta_n_0},
                          {"theta_n_100", p.theta_n_100}};
  doc["aging"] = {{"beta", p.beta},
                  {"kprime_p", p.kprime_p},
                  {"kprime_n", p.kprime_n},
                  {"betaprime_p", p.betaprime_p},
                  {"betaprime_n", p.betaprime_n},
                  {"M_SEI", p.M_SEI},
                  {"M_Li", p.M_Li},
                  {"rho_SEI", p.rho_SEI},
                  {"rho_Li", p.rho_Li},
                  {"kappa_SEI", p.kappa_SEI},
                  {"L_SEI_init", p.L_SEI_init},
                  {"L_Li_init", p.L_Li_init}};
  doc["resistances"] = {{"R_l", p.R_l}};
  doc["environment"] = {{"T", p.T}, {"T_ref", p.T_ref}};
  doc["constants"] = {{"F", p.F}, {"R_gas", p.R_gas}};
  doc["ocp"] = {{"positive", p.ocp_p_path}, {"negative", p.ocp_n_path}};
  doc["mesh"] = {{"N_r_p", cfg.mesh.N_r_p},
                 {"N_r_n", cfg.mesh.N_r_n},
                 {"N_x_p", cfg.mesh.N_x_p},
                 {"N_x_s", cfg.mesh.N_x_s},
                 {"N_x_n", cfg.mesh.N_x_n}};
  const auto& sim = cfg.simulation;
  doc["simulation"] = {{"capacity_Ah", sim.capacity_Ah},
                       {"cutoff_V", sim.cutoff_V},
                       {"dt_s", sim.dt_s},
                       {"max_time_s", sim.max_time_s},
                       {"soc0", sim.soc0}};
  const auto& id = cfg.identification;
  json theta1 = json::object();
  for (const auto& [k, v] : id.theta1) theta1[k] = v;
  doc["identification"] = {{"weights", id.weights},
                           {"pso",
                            {{"swarm_size", id.pso.swarm_size},
                             {"iterations", id.pso.iterations},
                             {"inertia", id.pso.inertia},
                             {"cognitive", id.pso.cognitive},
                             {"social", id.pso.social},
                             {"seed", id.pso.seed}}},
                           {"theta1", theta1}};
  return doc;
}

void save_config(const Config& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("", "cannot write config " + path.string());
  out << to_json(cfg).dump(2) << '\n';
  if (!out) throw ConfigError("", "failed writing config " + path.string());
}

}  // namespace espm
